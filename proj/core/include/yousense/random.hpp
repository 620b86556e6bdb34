#ifndef YOUSENSE_RANDOM_HPP
#define YOUSENSE_RANDOM_HPP

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace yousense {

/// Random source used throughout. Every operation that needs randomness
/// takes one by reference; callers own seeding.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
[[nodiscard]] std::uint64_t mix64(std::uint64_t x) noexcept;

/// Deterministically derives an independent stream seed from a master seed
/// and a path of stream labels (round index, purpose, user, ...).
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t master,
                                        std::initializer_list<std::uint64_t> path) noexcept;

[[nodiscard]] Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> path);

/// Uniform integer in [0, n). Requires n > 0.
[[nodiscard]] std::uint64_t uniform_index(Rng& rng, std::uint64_t n);

/// True with probability p (p clamped to [0,1]).
[[nodiscard]] bool bernoulli(Rng& rng, double p);

}  // namespace yousense

#endif  // YOUSENSE_RANDOM_HPP
