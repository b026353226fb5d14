#pragma once

#include "oulab/multi_index.hpp"
#include "oulab/spectral_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace oulab {

// Normalized probabilists' Hermite polynomial, orthonormal against N(0,1).
template <typename Scalar>
Scalar hermite_1d(int n, const Scalar& xi) {
  if (n < 0) throw std::invalid_argument("hermite_1d: negative degree");
  if (n == 0) return Scalar(1.0);
  Scalar prev(1.0);
  Scalar cur = xi;
  for (int k = 1; k < n; ++k) {
    Scalar next = (xi * cur - std::sqrt(double(k)) * prev) / std::sqrt(double(k + 1));
    prev = cur;
    cur = next;
  }
  return cur;
}

// H_0(xi), ..., H_cap(xi)
template <typename Scalar>
std::vector<Scalar> hermite_table(int cap, const Scalar& xi) {
  std::vector<Scalar> h;
  h.reserve(cap + 1);
  h.push_back(Scalar(1.0));
  if (cap >= 1) h.push_back(xi);
  for (int k = 1; k < cap; ++k)
    h.push_back((xi * h[k] - std::sqrt(double(k)) * h[k - 1]) / std::sqrt(double(k + 1)));
  return h;
}

// Hermite functions H_n(xi) * (2 pi)^{-1/4} exp(-xi^2/4); stable at high degree.
inline Vec hermite_functions(int cap, double xi) {
  Vec h(cap + 1);
  h(0) = std::pow(2.0 * std::numbers::pi, -0.25) * std::exp(-0.25 * xi * xi);
  if (cap >= 1) h(1) = xi * h(0);
  for (int k = 1; k < cap; ++k)
    h(k + 1) = (xi * h(k) - std::sqrt(double(k)) * h(k - 1)) / std::sqrt(double(k + 1));
  return h;
}

template <typename Scalar>
Scalar hermite_tensor(const MultiIndex& gamma, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x,
                      const SpectralModel& model) {
  if (gamma.dim() != model.dim() || x.size() != model.dim())
    throw std::invalid_argument("hermite_tensor: dimension mismatch");
  Scalar out(1.0);
  for (int k = 0; k < model.dim(); ++k)
    if (gamma[k] > 0) out = out * hermite_1d<Scalar>(gamma[k], x(k) / std::sqrt(model.lambda(k)));
  return out;
}

}  // namespace oulab
