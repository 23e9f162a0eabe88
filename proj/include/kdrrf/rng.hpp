#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace kdrrf {

// Deterministic RNG stream. Distribution sampling is hand-rolled on top of
// mt19937_64 so that draws are reproducible bit-for-bit across platforms
// (std::uniform_real_distribution et al. are implementation-defined).
class RngStream {
public:
    RngStream() : RngStream(0) {}
    explicit RngStream(uint64_t seed) : engine_(mix(seed)) {}

    /// Child stream derived from this stream's seed lineage plus a tag.
    static RngStream derive(uint64_t seed, std::string_view tag, uint64_t index = 0) {
        uint64_t h = fnv1a(tag);
        return RngStream(mix(seed ^ h) + index * 0x9E3779B97F4A7C15ULL);
    }

    uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /// Uniform integer in [0, n). n must be > 0.
    uint64_t uniform_index(uint64_t n) {
        return engine_() % n;
    }

    /// Standard normal via Box-Muller (one draw per call, second root unused).
    double gaussian() {
        double u1 = 1.0 - uniform01();  // (0, 1]
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    double gaussian(double mean, double sigma) { return mean + sigma * gaussian(); }

private:
    static constexpr uint64_t fnv1a(std::string_view s) {
        uint64_t h = 0xcbf29ce484222325ULL;
        for (char c : s) {
            h ^= static_cast<uint8_t>(c);
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    // splitmix64 finalizer; spreads low-entropy seeds before feeding mt19937_64
    static constexpr uint64_t mix(uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
};

}  // namespace kdrrf
