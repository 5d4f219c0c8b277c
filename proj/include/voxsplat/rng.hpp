#pragma once

#include <cmath>
#include <cstdint>

namespace voxsplat {

// Counter-based random stream. A draw is a pure function of (seed, counter),
// so identical streams replay bit-identically and independent streams are
// made by offsetting counters.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t counter = 0;

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t next_u64() {
        std::uint64_t z = mix(seed ^ 0x9E3779B97F4A7C15ULL) + 0x9E3779B97F4A7C15ULL * (++counter);
        return mix(z);
    }

    // Stream at a fixed counter offset; `stride` draws are reserved per slot.
    RngStream at(std::uint64_t slot, std::uint64_t stride = 1024) const {
        return RngStream{seed, counter + slot * stride};
    }

    // [0, 1)
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // (0, 1): resample zeros so log()/log(log()) stay finite
    double uniform_pos() {
        double u = uniform();
        while (u == 0.0) u = uniform();
        return u;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller; consumes exactly two draws
    double normal() {
        double u1 = uniform_pos();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    double gumbel() { return -std::log(-std::log(uniform_pos())); }
};

}  // namespace voxsplat
