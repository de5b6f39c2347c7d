#pragma once

#include <cstdint>
#include <random>

namespace spce {

/// Seedable random stream with deterministic substream derivation.
///
/// Every stream remembers the 64-bit key it was built from; substream(a, b)
/// derives a new, statistically independent stream from (key, a, b) without
/// touching the parent's draw position. This is what makes parallel runs
/// reproducible: worker count never changes which stream a run index sees.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : key_(seed) {
        // Expand the key through splitmix64 so that nearby seeds (0, 1, 2...)
        // land on unrelated engine states.
        std::uint64_t s = key_;
        std::uint32_t words[8];
        for (int i = 0; i < 4; ++i) {
            const std::uint64_t w = splitmix64(s);
            words[2 * i] = static_cast<std::uint32_t>(w);
            words[2 * i + 1] = static_cast<std::uint32_t>(w >> 32);
        }
        std::seed_seq seq(words, words + 8);
        engine_.seed(seq);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    std::uint64_t key() const { return key_; }

    /// Child stream keyed by (this stream's key, a, b). Pure: does not
    /// consume any state from the parent.
    RandomStream substream(std::uint64_t a, std::uint64_t b = 0) const {
        return RandomStream(mix(mix(key_, a + 1), b + 1));
    }

private:
    static std::uint64_t splitmix64(std::uint64_t& state) {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
        std::uint64_t z = h + 0x9e3779b97f4a7c15ULL * v;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::mt19937_64 engine_;
};

} // namespace spce
