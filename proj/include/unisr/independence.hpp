#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "unisr/algebra.hpp"
#include "unisr/odeflow.hpp"
#include "unisr/vertical.hpp"

namespace unisr {

/// Rows (grad H, grad E / 4, grad g0, grad g1, grad g2); columns
/// (h0, h1, h2, x0, x1, x2) at a covector over the identity. The x_j are
/// linearly adapted coordinates and appear only as column labels.
using JacobianJ = Eigen::Matrix<double, 5, 6>;

/// Brackets of the integral tuple (H, g0, g1, g2).
using PoissonMatrixP = Eigen::Matrix4d;

JacobianJ jacobian_at_identity(const VerticalState& h, const UnimodularParams& params);

Eigen::VectorXd singular_values(const Eigen::MatrixXd& a);

/// Number of singular values above tol_factor * sigma_max * max(rows, cols).
int numerical_rank(const Eigen::MatrixXd& a, double tol_factor = 1e-10);

/// det d(H, g0, g1, g2) / d(h0, h1, h2, x_j) from the rows and columns of J.
/// Cofactor expansion gives -2 chi h1 h2, -h0 h2 and h0 h1 for j = 0, 1, 2.
double jacobian_minor(const VerticalState& h, const UnimodularParams& params, int x_column);

/// The x1 minor, jacobian_minor(h, params, 1).
double minor_det_HgGG(const VerticalState& h, const UnimodularParams& params);

/// det of the rows (grad_h H, grad_h E / 4, alpha): the vertical Jacobian of
/// (H, E, g) with g = alpha . (g0, g1, g2), up to the sign of the last row.
double involution_determinant(const VerticalState& h, const UnimodularParams& params,
                              const Vec3& alpha);

/// Closed form 2 chi a0 h1 h2 + a1 h0 h2 - a2 h0 h1 of involution_determinant.
double involution_determinant_expansion(const VerticalState& h, const UnimodularParams& params,
                                        const Vec3& alpha);

/// {g2, g1} = g0, {g1, g0} = (chi + kappa) g2, {g2, g0} = (chi - kappa) g1;
/// index 0 is H, which commutes with every g_i.
PoissonMatrixP poisson_matrix_P(const Vec3& g, const UnimodularParams& params);

/// Largest deviation of P from sum_k c_ij^k g_k on the g-block, from
/// antisymmetry, and from a vanishing H row and column.
double poisson_structure_residual(const Vec3& g, const UnimodularParams& params);

/// Whether (H, E, alpha . g) is a Liouville triple for these params:
/// alpha != 0, and alpha1^2 + alpha2^2 != 0 when chi == 0.
bool is_admissible_alpha(const UnimodularParams& params, const Vec3& alpha);

/// Settings for the flow-based involution witnesses.
struct WitnessConfig {
    double t_max = 10.0;
    double condition_cap = 100.0;
    double state_half_width = 2.0;
    odeflow::IntegratorConfig integrator = [] {
        odeflow::IntegratorConfig c;
        c.rel_tol = 1e-12;
        c.abs_tol = 1e-14;
        return c;
    }();
};

struct LiouvilleReport {
    bool admissible = false;
    double max_bracket_HE = 0.0;
    double max_g_drift_H_flow = 0.0;
    double max_g_drift_E_flow = 0.0;
    int flows = 0;
    bool involution_ok = false;
    double best_abs_det = 0.0;
    int samples_tried = 0;
    bool independence_found = false;
    bool passed = false;
};

/// Involution: {H, E} at random states, and conservation of alpha . g along
/// the H- and E-flows. Independence: random search for
/// |involution_determinant| > 1e-6 over up to n_samples states.
LiouvilleReport liouville_triple_check(const UnimodularParams& params, const Vec3& alpha,
                                       int n_samples, std::uint64_t seed = 0,
                                       const WitnessConfig& witness = {});

struct SuperintegrabilityReport {
    int states_checked = 0;
    int min_rank_J = 0;
    int max_rank_J = 0;
    bool rank_J_ok = false;
    int min_rank_P = 0;
    int max_rank_P = 0;
    bool rank_P_ok = false;
    double closure_residual = 0.0;
    bool closure_ok = false;
    bool passed = false;
};

/// (a) rank 4 for the rows (H, g0, g1, g2) of J at sampled states with
/// |h0 h1| > 0.01; (b) rank P == 2 at sampled g; (c) P consistent with the
/// structure constants.
SuperintegrabilityReport superintegrability_check(const UnimodularParams& params, int n_samples,
                                                  std::uint64_t seed = 0);

}  // namespace unisr
