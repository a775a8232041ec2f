#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace unisr::odeflow {

using State = Eigen::VectorXd;
/// Autonomous vector field y' = field(y).
using Field = std::function<State(const State&)>;

enum class Method { rk4_fixed, adaptive_54 };

std::string_view to_string(Method method);
/// Accepts "rk4_fixed" / "rk4" and "adaptive_54" / "adaptive".
Method parse_method(std::string_view name);

struct IntegratorConfig {
    Method method = Method::adaptive_54;
    double step = 1e-3;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    std::int64_t max_steps = 10'000'000;
    double sample_every = 0.1;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

/// Samples at t = 0, k * sample_every and t_final.
struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;

    std::size_t size() const { return times.size(); }
    bool empty() const { return times.empty(); }
    const State& final_state() const { return states.back(); }
};

struct IntegrationStats {
    std::int64_t accepted = 0;
    std::int64_t rejected = 0;
    std::int64_t field_evaluations = 0;
};

class IntegrationError : public std::runtime_error {
public:
    enum class Kind { max_steps_exceeded, non_finite, step_underflow };

    IntegrationError(Kind kind, double time, Trajectory partial, const std::string& what)
        : std::runtime_error(what), kind_(kind), time_(time), partial_(std::move(partial)) {}

    Kind kind() const { return kind_; }
    /// Time at which the failure was detected.
    double time() const { return time_; }
    const Trajectory& partial() const { return partial_; }

private:
    Kind kind_;
    double time_;
    Trajectory partial_;
};

/// Integrates y' = field(y) from t = 0 to t_final. Adaptive steps are
/// clipped so every sample time is hit exactly; fixed RK4 uses equal
/// substeps no longer than config.step between consecutive samples.
Trajectory integrate(const Field& field, const State& y0, double t_final,
                     const IntegratorConfig& config, IntegrationStats* stats = nullptr);

/// Empirical order of fixed-step RK4 by step halving:
/// log2(|y_h - y_{h/2}| / |y_{h/2} - y_{h/4}|) with h = t_final / base_steps.
/// Returns +infinity when the differences vanish.
double convergence_order(const Field& field, const State& y0, double t_final,
                         int base_steps = 32);

}  // namespace unisr::odeflow
