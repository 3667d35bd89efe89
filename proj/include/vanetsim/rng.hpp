#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace vanetsim {

// Deterministic random stream. All sampling goes through the methods below
// rather than std::uniform_*_distribution, whose output is
// implementation-defined; results must be reproducible byte-for-byte.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Independent substream keyed by a label, so mobility, pair selection,
    // learning etc. draw from separate sequences of one master seed.
    static Rng substream(std::uint64_t seed, std::string_view label) {
        std::uint64_t h = 1469598103934665603ULL;
        for (char c : label) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ULL;
        }
        h ^= seed + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return Rng(h);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n), n >= 1. Rejection-free modulo bias is
    // negligible for the small n used here, but reject anyway.
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    std::uint64_t raw() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace vanetsim
