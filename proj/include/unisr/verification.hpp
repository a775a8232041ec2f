#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "unisr/algebra.hpp"
#include "unisr/independence.hpp"

namespace unisr::verification {

struct CheckResult {
    std::string name;
    bool passed = false;
    /// Worst observed value of the checked quantity.
    double worst = 0.0;
    /// Pass threshold on `worst` (or the target value for exact checks).
    double threshold = 0.0;
    std::string detail;
    /// First few sampled states, so runs can be compared across builds.
    std::vector<std::array<double, 3>> samples;
};

struct SuiteOptions {
    int n_samples = 100;
    /// Horizon for the vertical and pendulum flows.
    double t_final = 10.0;
    /// Half-width of the cube from which initial momenta are drawn.
    double state_half_width = 2.0;
    /// Integrator for the vertical flow invariance check.
    odeflow::IntegratorConfig vertical = WitnessConfig{}.integrator;
    /// Transport witnesses run at verification-grade tolerance inside a
    /// conditioning window.
    WitnessConfig witness = {};
};

struct SuiteReport {
    double chi = 0.0;
    double kappa = 0.0;
    AlgebraClass algebra = AlgebraClass::h3;
    KillingSignature signature;
    std::uint64_t seed = 0;
    int n_samples = 0;
    std::vector<CheckResult> checks;

    bool passed() const;
};

/// Runs every invariant check for one parameter pair. Integration failures
/// are reported as failed checks, not thrown.
SuiteReport run_suite(const UnimodularParams& params, std::uint64_t seed,
                      const SuiteOptions& options = {});

/// One row of a parameter-plane sweep.
struct ScanCell {
    double chi = 0.0;
    double kappa = 0.0;
    AlgebraClass algebra = AlgebraClass::h3;
    /// Largest relative drift of H, E, g0, g1, g2 along windowed H-flows.
    double max_drift = 0.0;
    /// Largest |C_l - C_r| / (1 + |C_l(0)|) along the same flows.
    double casimir_residual = 0.0;
    int rank_J_generic = 0;
    int rank_P_generic = 0;
    /// Empty unless the cell's integrations failed.
    std::string error;
};

ScanCell scan_cell(const UnimodularParams& params, std::uint64_t seed, int n_trajectories = 4,
                   const WitnessConfig& witness = {});

}  // namespace unisr::verification
