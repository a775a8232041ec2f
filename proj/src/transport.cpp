#include "unisr/transport.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace unisr {

std::string_view to_string(FlowGenerator gen) {
    switch (gen) {
        case FlowGenerator::hamiltonian: return "H";
        case FlowGenerator::energy: return "E";
        case FlowGenerator::casimir: return "Cl";
    }
    return "unknown";
}

Vec3 generator_gradient(FlowGenerator gen, const VerticalState& h,
                        const UnimodularParams& params) {
    switch (gen) {
        case FlowGenerator::hamiltonian: return grad_hamiltonian(h);
        case FlowGenerator::energy: return grad_energy(h, params);
        case FlowGenerator::casimir: return grad_casimir_left(h, params);
    }
    throw std::invalid_argument("unknown flow generator");
}

TransportDerivative transport_field(const TransportState& s, const UnimodularParams& params,
                                    const Vec3& grad_f) {
    const Mat3 ad_u = ad_matrix(params, grad_f);
    return {ad_u.transpose() * s.h.vec(), -ad_u * s.m};
}

Vec3 right_invariant_g(const TransportState& s) { return -(s.m.transpose() * s.h.vec()); }

double casimir_right(const Vec3& g, const UnimodularParams& params) {
    const double chi = params.chi();
    const double kappa = params.kappa();
    return 2.0 * (g[0] * g[0] + (kappa - chi) * g[1] * g[1] + (kappa + chi) * g[2] * g[2]);
}

double casimir_identity_residual(const TransportState& s, const UnimodularParams& params) {
    return std::abs(casimir_left(s.h, params) - casimir_right(right_invariant_g(s), params));
}

IntegralRecord record_integrals(double t, const TransportState& s,
                                const UnimodularParams& params) {
    const Vec3 g = right_invariant_g(s);
    IntegralRecord rec;
    rec.t = t;
    rec.H = hamiltonian(s.h);
    rec.E = energy(s.h, params);
    rec.Cl = casimir_left(s.h, params);
    rec.g0 = g[0];
    rec.g1 = g[1];
    rec.g2 = g[2];
    rec.Cr = casimir_right(g, params);
    rec.casimir_residual = std::abs(rec.Cl - rec.Cr);
    return rec;
}

odeflow::State pack(const TransportState& s) {
    odeflow::State y(12);
    y.head<3>() = s.h.vec();
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) y[3 + 3 * r + c] = s.m(r, c);
    return y;
}

TransportState unpack(const odeflow::State& y) {
    if (y.size() != 12) throw std::invalid_argument("transport state must have 12 entries");
    TransportState s;
    s.h = VerticalState::from_vec(y.head<3>());
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) s.m(r, c) = y[3 + 3 * r + c];
    return s;
}

odeflow::Field transport_flow(const UnimodularParams& params, FlowGenerator gen) {
    return [params, gen](const odeflow::State& y) {
        const TransportState s = unpack(y);
        const auto d = transport_field(s, params, generator_gradient(gen, s.h, params));
        return pack(TransportState{VerticalState::from_vec(d.dh), d.dm});
    };
}

TransportRun integrate_transport(const UnimodularParams& params, const VerticalState& h0,
                                 double t_final, const odeflow::IntegratorConfig& config,
                                 FlowGenerator gen) {
    const auto traj =
        odeflow::integrate(transport_flow(params, gen), pack(TransportState{h0}), t_final, config);

    TransportRun run;
    run.states.reserve(traj.size());
    run.records.reserve(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        run.states.push_back(unpack(traj.states[i]));
        run.records.push_back(record_integrals(traj.times[i], run.states.back(), params));
    }
    return run;
}

double transport_condition(const TransportState& s) {
    return s.m.cwiseAbs().rowwise().sum().maxCoeff();
}

WindowedRun integrate_transport_windowed(const UnimodularParams& params,
                                         const VerticalState& h0, double t_max,
                                         const odeflow::IntegratorConfig& config,
                                         FlowGenerator gen, double condition_cap) {
    if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be > 0");
    constexpr double kSegment = 1.0;
    const auto field = transport_flow(params, gen);

    WindowedRun out;
    TransportState current{h0};
    out.run.states.push_back(current);
    out.run.records.push_back(record_integrals(0.0, current, params));

    double t0 = 0.0;
    while (t0 < t_max) {
        const double span = std::min(kSegment, t_max - t0);
        const auto traj = odeflow::integrate(field, pack(current), span, config);
        for (std::size_t i = 1; i < traj.size(); ++i) {
            const TransportState s = unpack(traj.states[i]);
            if (transport_condition(s) > condition_cap) {
                out.truncated = true;
                return out;
            }
            const double t = t0 + traj.times[i];
            out.run.states.push_back(s);
            out.run.records.push_back(record_integrals(t, s, params));
            out.window_end = t;
        }
        current = out.run.states.back();
        t0 = out.window_end;
    }
    return out;
}

Mat3 frame_coefficient_derivatives(const UnimodularParams& params, const VerticalState& h) {
    const auto c = structure_constants(params);
    const Vec3 hv = h.vec();
    Mat3 g = Mat3::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) g(i, j) += c(j, i, k) * hv[k];
    return g;
}

Mat3 lemma_fd_estimate(const UnimodularParams& params, const VerticalState& h, double t_step) {
    const Vec3 hv = h.vec();
    Mat3 est;
    for (int j = 0; j < 3; ++j) {
        const Mat3 ad = ad_matrix(params, Vec3::Unit(j));
        // Column i of exp(-t ad) is the image of f_i.
        const Vec3 forward = -(matrix_exp_3x3(-t_step * ad).transpose() * hv);
        const Vec3 backward = -(matrix_exp_3x3(t_step * ad).transpose() * hv);
        est.col(j) = (forward - backward) / (2.0 * t_step);
    }
    return est;
}

Mat3 verify_lemma_fd(const UnimodularParams& params, const VerticalState& h, double t_step) {
    if (!(t_step > 0.0 && t_step <= 0.1)) throw std::invalid_argument("t_step must be in (0, 0.1]");
    return (lemma_fd_estimate(params, h, t_step) - frame_coefficient_derivatives(params, h))
        .cwiseAbs();
}

Mat3 matrix_exp_3x3(const Mat3& a) {
    if (!a.allFinite()) throw std::invalid_argument("matrix_exp_3x3: non-finite input");
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const Mat3 scaled = a / std::ldexp(1.0, squarings);

    // Horner evaluation of sum_{n <= 18} scaled^n / n!
    constexpr int kDegree = 18;
    Mat3 result = Mat3::Identity();
    for (int n = kDegree; n >= 1; --n) result = Mat3::Identity() + scaled * result / n;

    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
}

}  // namespace unisr
