#pragma once

#include <cstdint>
#include <vector>

namespace zkit {

// Deterministic 64-bit generator (splitmix64). All seeded behavior in the
// library flows through this type so results are identical across platforms
// and thread counts; std::random distributions are avoided because their
// output is not pinned by the standard.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform integer in [0, n). n must be positive.
    uint64_t below(uint64_t n) {
        // Rejection sampling keeps the distribution exactly uniform.
        uint64_t threshold = (0 - n) % n;
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    // Uniform double in [0, 1).
    double uniform() { return (next() >> 11) * (1.0 / 9007199254740992.0); }

    // Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; i--) {
            size_t j = (size_t)below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    template <typename CharT>
    void shuffle_chars(std::basic_string<CharT>& s) {
        for (size_t i = s.size(); i > 1; i--) {
            size_t j = (size_t)below(i);
            std::swap(s[i - 1], s[j]);
        }
    }

private:
    uint64_t state_;
};

// Derives an independent stream for a (seed, index...) tuple. Used so that
// Monte Carlo trials, solver restarts and suite members can run in any order
// or thread layout and still produce identical results.
inline uint64_t derive_stream(uint64_t seed, uint64_t index) {
    Rng mix(seed ^ (0x632be59bd9b4e019ull + index * 0x9e3779b97f4a7c15ull));
    return mix.next();
}

inline uint64_t derive_stream(uint64_t seed, uint64_t a, uint64_t b) {
    return derive_stream(derive_stream(seed, a), b);
}

}  // namespace zkit
