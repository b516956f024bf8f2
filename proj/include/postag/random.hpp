#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace postag {

/// Seeded generator for reproducible sampling. mt19937_64 produces the
/// same stream on every conforming implementation, and the bounded draw
/// below uses explicit rejection sampling instead of
/// std::uniform_int_distribution (whose output is not pinned by the
/// standard), so samples are portable across compilers and platforms.
class SampleRng {
public:
    explicit SampleRng(std::uint64_t seed) : gen_(seed) {}

    /// Unbiased draw in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit =
            std::numeric_limits<std::uint64_t>::max() -
            std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t v = gen_();
        while (v >= limit) v = gen_();
        return v % n;
    }

    std::uint64_t next() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

/// Partial Fisher-Yates: picks `n` distinct indices out of `population`.
/// This is the pinned sampling algorithm ("fisher_yates_mt19937_64").
inline std::vector<std::size_t> sample_indices(std::size_t population, std::size_t n,
                                               std::uint64_t seed) {
    std::vector<std::size_t> idx(population);
    for (std::size_t i = 0; i < population; ++i) idx[i] = i;
    if (n >= population) return idx;
    SampleRng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.below(population - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(n);
    return idx;
}

inline constexpr const char* kSamplerName = "fisher_yates_mt19937_64";

}  // namespace postag
