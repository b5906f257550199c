#ifndef RELTURAN_RNG_HPP
#define RELTURAN_RNG_HPP

#include <cstdint>
#include <span>
#include <utility>

namespace relturan {

/**
 * Seeded generator used everywhere randomness appears.
 *
 * Core: xoshiro256** (Blackman & Vigna). State initialisation and stream
 * derivation use SplitMix64, so the map (seed, stream index) -> sequence is
 * fully pinned and can be reproduced in any language:
 *
 *   key   = splitmix64(seed).next()
 *   state = four successive outputs of splitmix64(key + 0x9E3779B97F4A7C15 * (index + 1))
 *
 * uniform() uses the top 53 bits; below(n) uses Lemire's multiply-shift with
 * rejection, so draws never depend on the standard library's distributions.
 */
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed);

    // Independent stream `index` derived from `seed`.
    static Rng stream(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next();
    // Uniform double in [0, 1).
    double uniform();
    // Uniform integer in [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n);
    bool bernoulli(double p) { return uniform() < p; }

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()() { return next(); }

private:
    Rng() = default;
    std::uint64_t s_[4]{};
};

// SplitMix64 step; exposed for hashing seeds together.
std::uint64_t splitmix64(std::uint64_t& state);

} // namespace relturan

#endif
