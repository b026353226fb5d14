#include "oulab/mc_estimate.hpp"

#include "oulab/random.hpp"

#include <cmath>
#include <vector>

namespace oulab {

MCEstimate summarize(std::span<const double> samples, double dt, std::uint64_t seed) {
  MCEstimate e;
  e.n_paths = samples.size();
  e.dt = dt;
  e.seed = seed;
  if (samples.empty()) return e;
  const double n = static_cast<double>(samples.size());
  e.value = pairwise_sum(samples) / n;
  if (samples.size() > 1) {
    std::vector<double> sq(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) sq[i] = (samples[i] - e.value) * (samples[i] - e.value);
    e.std_error = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
  }
  return e;
}

}  // namespace oulab
