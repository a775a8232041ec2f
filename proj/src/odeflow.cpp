#include "unisr/odeflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace unisr::odeflow {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// Difference between the 5th- and embedded 4th-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kSafety = 0.9;
constexpr double kMaxGrowth = 5.0;
constexpr double kMaxShrink = 0.2;
constexpr double kMinStepFraction = 1e-14;

std::vector<double> sample_times(double t_final, double sample_every) {
    std::vector<double> times;
    for (std::int64_t k = 1;; ++k) {
        const double t = static_cast<double>(k) * sample_every;
        if (t >= t_final * (1.0 - 1e-12)) break;
        times.push_back(t);
    }
    times.push_back(t_final);
    return times;
}

class Evaluator {
public:
    Evaluator(const Field& field, IntegrationStats& stats, Trajectory& traj)
        : field_(field), stats_(stats), traj_(traj) {}

    State operator()(const State& y, double t) {
        ++stats_.field_evaluations;
        State dy = field_(y);
        if (!dy.allFinite()) {
            throw IntegrationError(IntegrationError::Kind::non_finite, t, traj_,
                                   "non-finite field value at t = " + std::to_string(t));
        }
        return dy;
    }

private:
    const Field& field_;
    IntegrationStats& stats_;
    Trajectory& traj_;
};

double error_norm(const State& err, const State& y, const State& y_new,
                  const IntegratorConfig& cfg) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double scale =
            cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        const double r = err[i] / scale;
        sum += r * r;
    }
    return err.size() == 0 ? 0.0 : std::sqrt(sum / static_cast<double>(err.size()));
}

double weighted_rms(const State& v, const State& y, const IntegratorConfig& cfg) {
    return error_norm(v, y, y, cfg);
}

double initial_step(Evaluator& eval, const State& y0, const State& f0, double t_final,
                    const IntegratorConfig& cfg) {
    const double d0 = weighted_rms(y0, y0, cfg);
    const double d1 = weighted_rms(f0, y0, cfg);
    const double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    const State y1 = y0 + h0 * f0;
    const State f1 = eval(y1, h0);
    const double d2 = weighted_rms(f1 - f0, y0, cfg) / h0;
    const double dmax = std::max(d1, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    return std::min({100.0 * h0, h1, t_final});
}

void check_finite(const State& y, double t, const Trajectory& traj) {
    if (!y.allFinite()) {
        throw IntegrationError(IntegrationError::Kind::non_finite, t, traj,
                               "non-finite state at t = " + std::to_string(t));
    }
}

Trajectory integrate_adaptive(const Field& field, const State& y0, double t_final,
                              const IntegratorConfig& cfg, IntegrationStats& stats) {
    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(y0);

    Evaluator eval(field, stats, traj);
    const double h_min = kMinStepFraction * t_final;

    double t = 0.0;
    State y = y0;
    State k1 = eval(y, t);
    double h = initial_step(eval, y0, k1, t_final, cfg);
    std::int64_t attempts = 0;

    for (const double target : sample_times(t_final, cfg.sample_every)) {
        bool last_rejected = false;
        while (t < target) {
            if (++attempts > cfg.max_steps) {
                throw IntegrationError(IntegrationError::Kind::max_steps_exceeded, t, traj,
                                       "max_steps exceeded at t = " + std::to_string(t));
            }
            const bool clipped = h >= target - t;
            const double step = clipped ? target - t : h;

            const State k2 = eval(y + step * (a21 * k1), t + c2 * step);
            const State k3 = eval(y + step * (a31 * k1 + a32 * k2), t + c3 * step);
            const State k4 = eval(y + step * (a41 * k1 + a42 * k2 + a43 * k3), t + c4 * step);
            const State k5 =
                eval(y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), t + c5 * step);
            const State k6 = eval(
                y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), t + step);
            const State y_new =
                y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const State k7 = eval(y_new, t + step);
            const State err =
                step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

            const double norm = error_norm(err, y, y_new, cfg);
            double factor = norm == 0.0 ? kMaxGrowth
                                        : std::clamp(kSafety * std::pow(norm, -0.2),
                                                     kMaxShrink, kMaxGrowth);
            if (norm <= 1.0) {
                ++stats.accepted;
                t = clipped ? target : t + step;
                y = y_new;
                k1 = k7;
                check_finite(y, t, traj);
                if (last_rejected) factor = std::min(factor, 1.0);
                last_rejected = false;
                // A step shortened to land on a sample time keeps the
                // controller's previous proposal.
                if (!clipped) h = step * factor;
            } else {
                ++stats.rejected;
                last_rejected = true;
                h = step * factor;
                if (h < h_min) {
                    throw IntegrationError(IntegrationError::Kind::step_underflow, t, traj,
                                           "step size underflow at t = " + std::to_string(t));
                }
            }
        }
        traj.times.push_back(t);
        traj.states.push_back(y);
    }
    return traj;
}

State rk4_step(Evaluator& eval, const State& y, double t, double h) {
    const State k1 = eval(y, t);
    const State k2 = eval(y + 0.5 * h * k1, t + 0.5 * h);
    const State k3 = eval(y + 0.5 * h * k2, t + 0.5 * h);
    const State k4 = eval(y + h * k3, t + h);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Trajectory integrate_rk4(const Field& field, const State& y0, double t_final,
                         const IntegratorConfig& cfg, IntegrationStats& stats) {
    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(y0);

    Evaluator eval(field, stats, traj);
    double t = 0.0;
    State y = y0;
    std::int64_t steps = 0;

    for (const double target : sample_times(t_final, cfg.sample_every)) {
        const double span = target - t;
        const auto n = std::max<std::int64_t>(
            1, static_cast<std::int64_t>(std::ceil(span / cfg.step - 1e-9)));
        const double h = span / static_cast<double>(n);
        for (std::int64_t i = 0; i < n; ++i) {
            if (++steps > cfg.max_steps) {
                throw IntegrationError(IntegrationError::Kind::max_steps_exceeded, t, traj,
                                       "max_steps exceeded at t = " + std::to_string(t));
            }
            y = rk4_step(eval, y, t, h);
            t = i + 1 == n ? target : t + h;
            check_finite(y, t, traj);
            ++stats.accepted;
        }
        traj.times.push_back(t);
        traj.states.push_back(y);
    }
    return traj;
}

}  // namespace

std::string_view to_string(Method method) {
    return method == Method::rk4_fixed ? "rk4_fixed" : "adaptive_54";
}

Method parse_method(std::string_view name) {
    if (name == "rk4_fixed" || name == "rk4") return Method::rk4_fixed;
    if (name == "adaptive_54" || name == "adaptive") return Method::adaptive_54;
    throw std::invalid_argument("unknown integration method: " + std::string(name));
}

void IntegratorConfig::validate() const {
    if (!(step > 0.0)) throw std::invalid_argument("step must be > 0");
    if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be > 0");
    if (!(abs_tol > 0.0)) throw std::invalid_argument("abs_tol must be > 0");
    if (max_steps <= 0) throw std::invalid_argument("max_steps must be > 0");
    if (!(sample_every > 0.0)) throw std::invalid_argument("sample_every must be > 0");
}

Trajectory integrate(const Field& field, const State& y0, double t_final,
                     const IntegratorConfig& config, IntegrationStats* stats) {
    config.validate();
    if (!(t_final > 0.0) || !std::isfinite(t_final)) {
        throw std::invalid_argument("t_final must be finite and > 0");
    }
    if (!y0.allFinite()) throw std::invalid_argument("initial state must be finite");

    IntegrationStats local;
    IntegrationStats& s = stats ? *stats : local;
    return config.method == Method::rk4_fixed ? integrate_rk4(field, y0, t_final, config, s)
                                              : integrate_adaptive(field, y0, t_final, config, s);
}

double convergence_order(const Field& field, const State& y0, double t_final, int base_steps) {
    if (base_steps < 1) throw std::invalid_argument("base_steps must be >= 1");
    IntegratorConfig cfg;
    cfg.method = Method::rk4_fixed;
    cfg.sample_every = t_final;

    auto solve = [&](int n) {
        cfg.step = t_final / static_cast<double>(n);
        return integrate(field, y0, t_final, cfg).final_state();
    };
    const State coarse = solve(base_steps);
    const State mid = solve(2 * base_steps);
    const State fine = solve(4 * base_steps);

    const double err_coarse = (coarse - mid).norm();
    const double err_fine = (mid - fine).norm();
    if (err_fine == 0.0) return std::numeric_limits<double>::infinity();
    return std::log2(err_coarse / err_fine);
}

}  // namespace unisr::odeflow
