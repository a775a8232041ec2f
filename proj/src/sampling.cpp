#include "unisr/sampling.hpp"

#include <cmath>

namespace unisr {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

Sampler::Sampler(std::uint64_t seed, std::uint64_t stream) : engine_(make_engine(seed, stream)) {}

double Sampler::uniform(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * std::ldexp(1.0, -53);
    return lo + (hi - lo) * u;
}

VerticalState Sampler::vertical(double half_width) {
    const double h0 = uniform(-half_width, half_width);
    const double h1 = uniform(-half_width, half_width);
    const double h2 = uniform(-half_width, half_width);
    return {h0, h1, h2};
}

Vec3 Sampler::vec3(double lo, double hi) {
    const double x = uniform(lo, hi);
    const double y = uniform(lo, hi);
    const double z = uniform(lo, hi);
    return {x, y, z};
}

}  // namespace unisr
