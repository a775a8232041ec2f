#pragma once

#include <string_view>

#include "unisr/algebra.hpp"

namespace unisr {

/// Vertical part of a covector: h_i = <lambda, f_i(q)>.
struct VerticalState {
    double h0 = 0.0;
    double h1 = 0.0;
    double h2 = 0.0;

    Vec3 vec() const { return {h0, h1, h2}; }
    static VerticalState from_vec(const Vec3& v) { return {v[0], v[1], v[2]}; }

    bool operator==(const VerticalState&) const = default;
};

/// Reduced coordinates h1 = r cos(gamma / 2), h2 = r sin(gamma / 2), c = -2 h0.
/// gamma is kept unwrapped along trajectories.
struct PendulumState {
    double r = 0.0;
    double gamma = 0.0;
    double c = 0.0;
};

struct PendulumChart {
    PendulumState state;
    /// r == 0: the angle is undefined and reported as 0.
    bool degenerate = false;
};

enum class PendulumRegime { oscillation, rotation, separatrix, degenerate };

std::string_view to_string(PendulumRegime regime);

/// H = (h1^2 + h2^2) / 2
double hamiltonian(const VerticalState& h);

/// E = 2 h0^2 - 2 chi (h1^2 - h2^2)
double energy(const VerticalState& h, const UnimodularParams& params);

/// C_l = 4 kappa H + E = 2 (h0^2 + (kappa - chi) h1^2 + (kappa + chi) h2^2)
double casimir_left(const VerticalState& h, const UnimodularParams& params);

Vec3 grad_hamiltonian(const VerticalState& h);
Vec3 grad_energy(const VerticalState& h, const UnimodularParams& params);
Vec3 grad_casimir_left(const VerticalState& h, const UnimodularParams& params);

/// (dh0, dh1, dh2) = (2 chi h1 h2, h2 h0, -h1 h0)
Vec3 vertical_field(const VerticalState& h, const UnimodularParams& params);

PendulumChart to_pendulum(const VerticalState& h);

/// Throws std::invalid_argument for r < 0.
VerticalState from_pendulum(const PendulumState& p);

/// (dr, dgamma, dc) = (0, c, -2 chi r^2 sin gamma)
Vec3 pendulum_field(const PendulumState& p, const UnimodularParams& params);

/// E = c^2 / 2 - 2 chi r^2 cos gamma
double pendulum_energy(const PendulumState& p, const UnimodularParams& params);

/// Phase-portrait region of the pendulum by comparing E with the
/// separatrix level 2 chi r^2.
PendulumRegime pendulum_regime(const PendulumState& p, const UnimodularParams& params,
                               double tol = 1e-9);

}  // namespace unisr
