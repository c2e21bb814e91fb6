#pragma once

#include <cstdint>
#include <random>

namespace percolab {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic stream derivation. A master seed plus up to three stream
/// indices (replicate, sweep, ...) always map to the same engine state, so
/// draws do not depend on scheduling or worker count.
class RngPolicy {
public:
    explicit RngPolicy(std::uint64_t master) : master_(master) {}

    std::uint64_t master() const { return master_; }

    std::mt19937_64 stream(std::uint64_t a, std::uint64_t b = 0,
                           std::uint64_t c = 0) const {
        std::uint64_t s = splitmix64(master_ ^ 0x5851f42d4c957f2dULL);
        s = splitmix64(s ^ a);
        s = splitmix64(s ^ b);
        s = splitmix64(s ^ c);
        return std::mt19937_64(s);
    }

private:
    std::uint64_t master_;
};

// Uniform double in [0,1) from the top 53 bits. Bit-stable across platforms,
// unlike std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace percolab
