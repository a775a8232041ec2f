#pragma once

#include <string_view>
#include <vector>

#include "unisr/algebra.hpp"
#include "unisr/odeflow.hpp"
#include "unisr/vertical.hpp"

namespace unisr {

/// Vertical momenta together with m = Ad_{q(t)^-1} in the basis (f0, f1, f2).
/// The group element q itself is never formed: the right-invariant
/// Hamiltonians only depend on q through m, with
///   g_i = -<h, m f_i>,   a_i^j(q) = -(m f_i)^j.
struct TransportState {
    VerticalState h;
    Mat3 m = Mat3::Identity();
};

struct TransportDerivative {
    Vec3 dh;
    Mat3 dm;
};

/// Left-invariant Hamiltonians whose flows can be transported.
enum class FlowGenerator { hamiltonian, energy, casimir };

std::string_view to_string(FlowGenerator gen);
Vec3 generator_gradient(FlowGenerator gen, const VerticalState& h,
                        const UnimodularParams& params);

/// Sampled integrals along a transported trajectory.
struct IntegralRecord {
    double t = 0.0;
    double H = 0.0;
    double E = 0.0;
    double Cl = 0.0;
    double g0 = 0.0;
    double g1 = 0.0;
    double g2 = 0.0;
    double Cr = 0.0;
    /// |Cl - Cr|
    double casimir_residual = 0.0;
};

/// Hamiltonian flow of a left-invariant F(h) with u = grad F:
///   h' = ad_u^T h,   m' = -ad_u m.
TransportDerivative transport_field(const TransportState& s, const UnimodularParams& params,
                                    const Vec3& grad_f);

/// (g0, g1, g2) = -m^T h
Vec3 right_invariant_g(const TransportState& s);

/// C_r = 2 (g0^2 + (kappa - chi) g1^2 + (kappa + chi) g2^2)
double casimir_right(const Vec3& g, const UnimodularParams& params);

double casimir_identity_residual(const TransportState& s, const UnimodularParams& params);

IntegralRecord record_integrals(double t, const TransportState& s,
                                const UnimodularParams& params);

/// 12-vector layout: (h0, h1, h2, m row-major).
odeflow::State pack(const TransportState& s);
TransportState unpack(const odeflow::State& y);

odeflow::Field transport_flow(const UnimodularParams& params, FlowGenerator gen);

struct TransportRun {
    std::vector<TransportState> states;
    std::vector<IntegralRecord> records;
};

/// Integrates the augmented (h, m) system from m = I. IntegrationError
/// propagates from the integrator.
TransportRun integrate_transport(const UnimodularParams& params, const VerticalState& h0,
                                 double t_final, const odeflow::IntegratorConfig& config,
                                 FlowGenerator gen = FlowGenerator::hamiltonian);

/// Conditioning of the right-invariant integrals at s: the infinity norm of
/// m. Rounding and truncation errors in h and m reach g amplified by this
/// factor, which grows exponentially along hyperbolic directions (sl2, sh2).
double transport_condition(const TransportState& s);

struct WindowedRun {
    TransportRun run;
    /// Last sampled time with transport_condition <= cap.
    double window_end = 0.0;
    /// True when the cap cut the run short of t_max.
    bool truncated = false;
};

/// Like integrate_transport, but integrates in unit-length segments and
/// stops at the first sample whose transport_condition exceeds
/// condition_cap. Only samples inside the window are returned.
WindowedRun integrate_transport_windowed(const UnimodularParams& params,
                                         const VerticalState& h0, double t_max,
                                         const odeflow::IntegratorConfig& config,
                                         FlowGenerator gen, double condition_cap);

/// g_ij = dg_i/dx_j(Id) = sum_k c_ji^k h_k in linearly adapted coordinates.
Mat3 frame_coefficient_derivatives(const UnimodularParams& params, const VerticalState& h);

/// Central-difference estimate of d/dt sum_k a_i^k(exp(t f_j)) h_k at t = 0,
/// using a_i^k(exp(t f_j)) = -(exp(-t ad_{f_j}) f_i)^k.
Mat3 lemma_fd_estimate(const UnimodularParams& params, const VerticalState& h, double t_step);

/// Elementwise |lemma_fd_estimate - frame_coefficient_derivatives|.
/// Throws std::invalid_argument unless t_step is in (0, 0.1].
Mat3 verify_lemma_fd(const UnimodularParams& params, const VerticalState& h, double t_step);

/// Scaling and squaring with a degree-18 Taylor polynomial.
Mat3 matrix_exp_3x3(const Mat3& a);

}  // namespace unisr
