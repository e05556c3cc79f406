#pragma once

#include <cstdint>
#include <random>

#include "opsent/kinematics.hpp"

namespace opsent {

// Independent, reproducible stream for task `stream` under a master seed.
inline std::mt19937_64 task_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

// Canonical 53-bit uniform in [0, 1); bit-reproducible everywhere, unlike
// std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline Vec3 random_unit_vector(std::mt19937_64& rng) {
    const double z = 2.0 * uniform01(rng) - 1.0;
    const double phi = 2.0 * 3.14159265358979323846 * uniform01(rng);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return Vec3(r * std::cos(phi), r * std::sin(phi), z);
}

}  // namespace opsent
