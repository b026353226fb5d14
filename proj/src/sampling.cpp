#include "oulab/sampling.hpp"

#include "oulab/random.hpp"

#include <stdexcept>

namespace oulab {

namespace {
constexpr std::size_t kBlock = 4096;
}

Mat sample_mu(const SpectralModel& model, std::size_t n, std::uint64_t seed, int jobs) {
  if (n < 1) throw std::invalid_argument("sample_mu: n must be positive");
  Mat out(model.dim(), static_cast<Eigen::Index>(n));
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  parallel_for(blocks, jobs, [&](std::size_t b) {
    Rng rng = substream(seed, b);
    const std::size_t end = std::min(n, (b + 1) * kBlock);
    for (std::size_t j = b * kBlock; j < end; ++j) draw_mu(model, rng, out.col(static_cast<Eigen::Index>(j)));
  });
  return out;
}

}  // namespace oulab
