#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>

namespace oulab {

using Rng = std::mt19937_64;

// Deterministic independent stream for (seed, stream id).
Rng substream(std::uint64_t seed, std::uint64_t stream);

// Child seed derived from a parent seed and a tag.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Callers write per-index
// results so the output does not depend on the thread count.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

// Fixed-order pairwise summation.
double pairwise_sum(std::span<const double> v);

}  // namespace oulab
