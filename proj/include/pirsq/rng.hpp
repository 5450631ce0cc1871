#ifndef PIRSQ_RNG_HPP
#define PIRSQ_RNG_HPP

#include <cstdint>
#include <numeric>
#include <vector>

namespace pirsq {

// splitmix64 step; fully specified, so streams are identical on every
// platform and toolchain.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Deterministic seeded randomness source. All protocol randomness is drawn
/// through this class; identical (seed, call sequence) gives identical draws.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {
        // decorrelate trivially related seeds
        splitmix64_next(state_);
    }

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    /// Unbiased draw from [0, bound) via rejection.
    std::uint64_t below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % bound;
    }

    std::uint32_t field_value(std::uint32_t q) { return static_cast<std::uint32_t>(below(q)); }

    /// Child stream that is a pure function of (seed, tag); the parent's
    /// position is not consumed.
    Rng fork(std::uint64_t tag) const {
        std::uint64_t s = seed_ ^ (0xD1B54A32D192ED03ULL * (tag + 1));
        splitmix64_next(s);
        return Rng(s);
    }

    /// Uniform permutation of {0,...,n-1} (Fisher-Yates).
    std::vector<std::size_t> permutation(std::size_t n) {
        std::vector<std::size_t> p(n);
        std::iota(p.begin(), p.end(), std::size_t{0});
        for (std::size_t i = n; i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(p[i - 1], p[j]);
        }
        return p;
    }

    std::uint64_t seed() const { return seed_; }

  private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

}  // namespace pirsq

#endif
