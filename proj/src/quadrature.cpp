#include "oulab/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace oulab {

namespace {

QuadratureGrid golub_welsch(const Vec& diag, const Vec& offdiag, double mu0) {
  Eigen::SelfAdjointEigenSolver<Mat> es;
  es.computeFromTridiagonal(diag, offdiag, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw NumericalError("golub_welsch: eigensolver failed");
  QuadratureGrid q;
  q.order = static_cast<int>(diag.size());
  q.nodes_1d = es.eigenvalues();
  q.weights_1d = mu0 * es.eigenvectors().row(0).transpose().array().square();
  return q;
}

}  // namespace

QuadratureGrid gauss_hermite(int order) {
  if (order < 1) throw std::invalid_argument("gauss_hermite: order must be positive");
  Vec diag = Vec::Zero(order);
  Vec off(order > 1 ? order - 1 : 0);
  for (int k = 1; k < order; ++k) off(k - 1) = std::sqrt(double(k));
  auto q = golub_welsch(diag, off, 1.0);
  // Newton polish on H_order and Christoffel weights 1 / sum_n H_n(x)^2; eigenvector
  // weights lose relative accuracy in the tails.
  for (int i = 0; i < order; ++i) {
    double x = q.nodes_1d(i);
    double christoffel = 1.0;
    for (int it = 0; it < 3; ++it) {
      double hm = 0.0, h = 1.0, s = 1.0;
      for (int n = 0; n < order; ++n) {
        const double hp = (x * h - std::sqrt(double(n)) * hm) / std::sqrt(double(n + 1));
        hm = h;
        h = hp;
        if (n + 1 < order) s += h * h;
      }
      christoffel = s;
      // hm = H_{order-1}, h = H_order, H_order' = sqrt(order) H_{order-1}
      if (hm != 0.0) x -= h / (std::sqrt(double(order)) * hm);
    }
    q.nodes_1d(i) = x;
    q.weights_1d(i) = 1.0 / christoffel;
  }
  // symmetrize against round-off
  for (int i = 0; i < order / 2; ++i) {
    int j = order - 1 - i;
    double x = 0.5 * (q.nodes_1d(j) - q.nodes_1d(i));
    double w = 0.5 * (q.weights_1d(i) + q.weights_1d(j));
    q.nodes_1d(i) = -x;
    q.nodes_1d(j) = x;
    q.weights_1d(i) = q.weights_1d(j) = w;
  }
  if (order % 2) q.nodes_1d(order / 2) = 0.0;
  q.weights_1d /= q.weights_1d.sum();
  return q;
}

QuadratureGrid gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
  Vec diag = Vec::Zero(order);
  Vec off(order > 1 ? order - 1 : 0);
  for (int k = 1; k < order; ++k) off(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
  auto q = golub_welsch(diag, off, 2.0);
  q.weights_1d *= 2.0 / q.weights_1d.sum();
  return q;
}

TensorRule tensor_rule(const QuadratureGrid& grid, const SpectralModel& model) {
  const int d = model.dim();
  const int n = grid.order;
  long double total = 1.0L;
  for (int k = 0; k < d; ++k) total *= n;
  if (total > 5e7L) throw std::length_error("tensor_rule: too many nodes");
  const Eigen::Index N = static_cast<Eigen::Index>(total);
  TensorRule r;
  r.points.resize(d, N);
  r.weights.resize(N);
  std::vector<int> idx(d, 0);
  for (Eigen::Index j = 0; j < N; ++j) {
    double w = 1.0;
    for (int k = 0; k < d; ++k) {
      r.points(k, j) = std::sqrt(model.lambda(k)) * grid.nodes_1d(idx[k]);
      w *= grid.weights_1d(idx[k]);
    }
    r.weights(j) = w;
    for (int k = d - 1; k >= 0; --k) {
      if (++idx[k] < n) break;
      idx[k] = 0;
    }
  }
  return r;
}

double integrate(const TensorRule& rule, const std::function<double(const Vec&)>& f) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < rule.points.cols(); ++j) s += rule.weights(j) * f(rule.points.col(j));
  return s;
}

}  // namespace oulab
