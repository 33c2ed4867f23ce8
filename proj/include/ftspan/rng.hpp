#pragma once

#include <cstdint>
#include <cmath>

namespace ftspan {

// splitmix64 stream. Small, fast, and bit-identical on every platform,
// which keeps seeded runs reproducible across compilers.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool next_bool(double p) { return next_unit() < p; }

    // number of failures before the first success, truncated at cap
    int next_geometric(double p, int cap) {
        double u = next_unit();
        if (p >= 1.0) return 0;
        double r = std::floor(std::log1p(-u) / std::log1p(-p));
        if (r < 0) r = 0;
        if (r > static_cast<double>(cap)) return cap;
        return static_cast<int>(r);
    }

private:
    uint64_t state_;
};

inline uint64_t mix_seed(uint64_t a, uint64_t b) {
    uint64_t z = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Named seed derivation: all randomness flows from one root seed through
// chains of mix_seed calls, never from ambient entropy.
inline uint64_t derive_seed(uint64_t base, uint64_t tag) { return mix_seed(base, tag); }
inline uint64_t derive_seed(uint64_t base, uint64_t tag1, uint64_t tag2) {
    return mix_seed(mix_seed(base, tag1), tag2);
}
inline uint64_t derive_seed(uint64_t base, uint64_t tag1, uint64_t tag2, uint64_t tag3) {
    return mix_seed(mix_seed(mix_seed(base, tag1), tag2), tag3);
}

} // namespace ftspan
