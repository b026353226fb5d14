#pragma once

#include "oulab/spectral_model.hpp"

#include <cstdint>
#include <random>

namespace oulab {

// n i.i.d. draws from N(0, Q) as columns of a d x n matrix.
Mat sample_mu(const SpectralModel& model, std::size_t n, std::uint64_t seed, int jobs = 1);

// Draw from N(0, I_d) scaled by sqrt(lambda) using a caller-owned stream.
template <class Rng>
void draw_mu(const SpectralModel& model, Rng& rng, Eigen::Ref<Vec> out) {
  std::normal_distribution<double> n01;
  for (int k = 0; k < model.dim(); ++k) out(k) = std::sqrt(model.lambda(k)) * n01(rng);
}

}  // namespace oulab
