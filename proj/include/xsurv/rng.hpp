#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace xsurv {

// All randomized code draws through these helpers so that results depend only
// on (mt19937_64, seed, draw count), not on libstdc++ distribution internals.

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53; // [0, 1)
}

// Box-Muller; one normal per call, two uniforms consumed.
inline double standard_normal(std::mt19937_64& rng) {
    double u1 = uniform01(rng);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

} // namespace xsurv
