#pragma once

#include "oulab/spectral_model.hpp"

#include <functional>

namespace oulab {

struct QuadratureGrid {
  Vec nodes_1d;
  Vec weights_1d;
  int order = 0;
};

// Gauss-Hermite rule for N(0,1); weights sum to 1. Golub-Welsch.
QuadratureGrid gauss_hermite(int order);

// Gauss-Legendre rule on [-1, 1]; weights sum to 2.
QuadratureGrid gauss_legendre(int order);

// Tensor rule for mu = N(0, Q): points are columns (d x N).
struct TensorRule {
  Mat points;
  Vec weights;
};

TensorRule tensor_rule(const QuadratureGrid& grid, const SpectralModel& model);

double integrate(const TensorRule& rule, const std::function<double(const Vec&)>& f);

}  // namespace oulab
