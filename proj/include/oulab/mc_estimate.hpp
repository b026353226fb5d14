#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace oulab {

struct MCEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_paths = 0;
  double dt = 0.0;
  std::uint64_t seed = 0;
};

// Mean and standard error (sample sd / sqrt(n)) with pairwise summation.
MCEstimate summarize(std::span<const double> samples, double dt = 0.0, std::uint64_t seed = 0);

struct McParams {
  std::size_t paths = 10000;
  double dt = 1e-3;
  std::uint64_t seed = 1;
  int jobs = 1;
};

}  // namespace oulab
