#include "oulab/sobolev.hpp"

#include "oulab/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace oulab {

double gradient_energy(const ChaosVector& phi, const SpectralModel& model) {
  double s = 0.0;
  for (const auto& [g, c] : phi.coeffs()) {
    double w = 0.0;
    for (int h = 0; h < model.dim(); ++h) w += g[h] * model.rate(h);
    s += w * c * c;
  }
  return s;
}

double second_order_energy(const ChaosVector& phi, const SpectralModel& model) {
  double s = 0.0;
  for (const auto& [g, c] : phi.coeffs()) {
    double w = 0.0;
    for (int h = 0; h < model.dim(); ++h)
      for (int k = 0; k < model.dim(); ++k)
        w += model.rate(h) * model.rate(k) * g[h] * (g[k] - (h == k ? 1 : 0));
    s += w * c * c;
  }
  return s;
}

double sobolev_norm(const ChaosVector& phi, int order, const SpectralModel& model) {
  if (order != 1 && order != 2) throw std::invalid_argument("sobolev_norm: order must be 1 or 2");
  double s = phi.l2_norm_sq() + gradient_energy(phi, model);
  if (order == 2) s += second_order_energy(phi, model);
  return s;
}

double gauss_ibp_check(const ChaosVector& phi, const ChaosVector& psi, int k, const SpectralModel& model) {
  if (k < 0 || k >= model.dim()) throw std::invalid_argument("gauss_ibp_check: coordinate out of range");
  const int order = (phi.max_degree() + psi.max_degree() + 1) / 2 + 2;
  const auto rule = tensor_rule(gauss_hermite(order), model);
  double lhs = 0.0, rhs = 0.0;
  for (Eigen::Index j = 0; j < rule.points.cols(); ++j) {
    const Vec x = rule.points.col(j);
    const double w = rule.weights(j);
    const double p = phi(x, model), q = psi(x, model);
    lhs += w * phi.gradient(x, model)(k) * q;
    rhs += w * (-p * psi.gradient(x, model)(k) + x(k) * p * q / model.lambda(k));
  }
  return std::abs(lhs - rhs);
}

}  // namespace oulab
