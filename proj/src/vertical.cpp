#include "unisr/vertical.hpp"

#include <cmath>
#include <stdexcept>

namespace unisr {

std::string_view to_string(PendulumRegime regime) {
    switch (regime) {
        case PendulumRegime::oscillation: return "oscillation";
        case PendulumRegime::rotation: return "rotation";
        case PendulumRegime::separatrix: return "separatrix";
        case PendulumRegime::degenerate: return "degenerate";
    }
    return "unknown";
}

double hamiltonian(const VerticalState& h) { return 0.5 * (h.h1 * h.h1 + h.h2 * h.h2); }

double energy(const VerticalState& h, const UnimodularParams& params) {
    return 2.0 * h.h0 * h.h0 - 2.0 * params.chi() * (h.h1 * h.h1 - h.h2 * h.h2);
}

double casimir_left(const VerticalState& h, const UnimodularParams& params) {
    const double chi = params.chi();
    const double kappa = params.kappa();
    return 2.0 * (h.h0 * h.h0 + (kappa - chi) * h.h1 * h.h1 + (kappa + chi) * h.h2 * h.h2);
}

Vec3 grad_hamiltonian(const VerticalState& h) { return {0.0, h.h1, h.h2}; }

Vec3 grad_energy(const VerticalState& h, const UnimodularParams& params) {
    const double chi = params.chi();
    return {4.0 * h.h0, -4.0 * chi * h.h1, 4.0 * chi * h.h2};
}

Vec3 grad_casimir_left(const VerticalState& h, const UnimodularParams& params) {
    const double chi = params.chi();
    const double kappa = params.kappa();
    return {4.0 * h.h0, 4.0 * (kappa - chi) * h.h1, 4.0 * (kappa + chi) * h.h2};
}

Vec3 vertical_field(const VerticalState& h, const UnimodularParams& params) {
    return {2.0 * params.chi() * h.h1 * h.h2, h.h2 * h.h0, -h.h1 * h.h0};
}

PendulumChart to_pendulum(const VerticalState& h) {
    PendulumChart chart;
    chart.state.r = std::hypot(h.h1, h.h2);
    chart.state.c = -2.0 * h.h0;
    if (chart.state.r == 0.0) {
        chart.degenerate = true;
        chart.state.gamma = 0.0;
    } else {
        chart.state.gamma = 2.0 * std::atan2(h.h2, h.h1);
    }
    return chart;
}

VerticalState from_pendulum(const PendulumState& p) {
    if (!(p.r >= 0.0)) throw std::invalid_argument("pendulum radius must be >= 0");
    const double theta = 0.5 * p.gamma;
    return {-0.5 * p.c, p.r * std::cos(theta), p.r * std::sin(theta)};
}

Vec3 pendulum_field(const PendulumState& p, const UnimodularParams& params) {
    return {0.0, p.c, -2.0 * params.chi() * p.r * p.r * std::sin(p.gamma)};
}

double pendulum_energy(const PendulumState& p, const UnimodularParams& params) {
    return 0.5 * p.c * p.c - 2.0 * params.chi() * p.r * p.r * std::cos(p.gamma);
}

PendulumRegime pendulum_regime(const PendulumState& p, const UnimodularParams& params,
                               double tol) {
    const double level = 2.0 * params.chi() * p.r * p.r;
    if (0.5 * level <= tol) return PendulumRegime::degenerate;
    const double e = pendulum_energy(p, params);
    if (std::abs(e - level) <= tol * (1.0 + std::abs(e))) return PendulumRegime::separatrix;
    return e < level ? PendulumRegime::oscillation : PendulumRegime::rotation;
}

}  // namespace unisr
