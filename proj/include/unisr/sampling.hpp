#pragma once

#include <cstdint>
#include <random>

#include "unisr/vertical.hpp"

namespace unisr {

/// Seeded random source for the verification suites.
///
/// Engine: std::mt19937_64, seeded through std::seed_seq with the words
/// (seed low 32 bits, seed high 32 bits, stream low 32 bits, stream high
/// 32 bits). Both are fully specified by the C++ standard, so streams are
/// reproducible across platforms. Doubles use the top 53 bits of one
/// engine output: u = (x >> 11) * 2^-53 in [0, 1).
class Sampler {
public:
    explicit Sampler(std::uint64_t seed, std::uint64_t stream = 0);

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);
    /// Components uniform in [-half_width, half_width).
    VerticalState vertical(double half_width);
    Vec3 vec3(double lo, double hi);

private:
    std::mt19937_64 engine_;
};

}  // namespace unisr
