#include "oulab/regularity.hpp"

#include "oulab/quadrature.hpp"
#include "oulab/sampling.hpp"

#include <unsupported/Eigen/AutoDiff>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oulab {

Vec ExponentialTestFunction::gradient(const Vec& x) const {
  const double s = h.dot(x);
  return part == ExpPart::Cos ? Vec(-std::sin(s) * h) : Vec(std::cos(s) * h);
}

double ExponentialTestFunction::generator(const Vec& x, const SpectralModel& model) const {
  // L e^{i<x,h>} = [-(1/2)<Q^{1-a}h,h> - (i/2)<x, A^a h>] e^{i<x,h>}
  const double s = h.dot(x);
  const double a = -0.5 * (model.lambdas().cwiseProduct(model.rates()).array() * h.array().square()).sum();
  const double b = 0.5 * (x.array() * model.rates().array() * h.array()).sum();
  return part == ExpPart::Cos ? a * std::cos(s) + b * std::sin(s) : a * std::sin(s) - b * std::cos(s);
}

namespace {

inline constexpr int kMaxAutoDiffDim = 8;

// The raw operator (1/2) Tr[Q^{1-a} D^2 F] - (1/2) <x, A^a DF> on a product F = phi * beta.
// Fixed-size derivative vectors: nested dynamic AutoDiffScalar mishandles constants.
template <int N>
double generator_of_product_n(const ChaosVector& phi, const ExponentialTestFunction& beta, const Vec& x,
                              const SpectralModel& model) {
  using Inner = Eigen::AutoDiffScalar<Eigen::Matrix<double, N, 1>>;
  using Outer = Eigen::AutoDiffScalar<Eigen::Matrix<Inner, N, 1>>;
  Eigen::Matrix<Outer, Eigen::Dynamic, 1> ax(N);
  for (int k = 0; k < N; ++k) {
    ax(k).value() = Inner(x(k), N, k);
    for (int j = 0; j < N; ++j) ax(k).derivatives()(j) = Inner(j == k ? 1.0 : 0.0);
  }
  const Outer F = phi.evaluate<Outer>(ax, model) * beta.value<Outer>(ax);
  double s = 0.0;
  for (int k = 0; k < N; ++k) {
    const double dk = F.value().derivatives()(k);
    const double dkk = F.derivatives()(k).derivatives()(k);
    s += 0.5 * model.lambda(k) * model.rate(k) * dkk - 0.5 * x(k) * model.rate(k) * dk;
  }
  return s;
}

template <int N = 1>
double generator_of_product(const ChaosVector& phi, const ExponentialTestFunction& beta, const Vec& x,
                            const SpectralModel& model) {
  if constexpr (N > kMaxAutoDiffDim) {
    throw std::invalid_argument("product_rule_check: dimension above 8");
  } else {
    if (model.dim() == N) return generator_of_product_n<N>(phi, beta, x, model);
    return generator_of_product<N + 1>(phi, beta, x, model);
  }
}

}  // namespace

double product_rule_check(const ChaosVector& phi, const ExponentialTestFunction& beta, const SpectralModel& model,
                          int grid_order) {
  if (beta.h.size() != model.dim() || phi.dim() != model.dim())
    throw std::invalid_argument("product_rule_check: dimension mismatch");
  const auto rule = tensor_rule(gauss_hermite(grid_order), model);
  const Vec w1 = model.lambdas().cwiseProduct(model.rates());
  double worst = 0.0;
  for (Eigen::Index j = 0; j < rule.points.cols(); ++j) {
    const Vec x = rule.points.col(j);
    const double lhs = generator_of_product(phi, beta, x, model);
    const double b = beta.value<double>(x), p = phi(x, model);
    const double rhs = b * apply_generator(phi, x, model) + p * beta.generator(x, model) +
                       (w1.array() * phi.gradient(x, model).array() * beta.gradient(x).array()).sum();
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

RadialCutoff::RadialCutoff(Vec center, double r_, double r1_) : y(std::move(center)), r(r_), r1(r1_) {
  if (!(r > 0.0 && r < r1)) throw std::invalid_argument("RadialCutoff: need 0 < r < r1");
}

double RadialCutoff::rho(double s) const {
  const double a = r * r, b = r1 * r1;
  if (s <= a) return 1.0;
  if (s >= b) return 0.0;
  const double u = (s - a) / (b - a);
  return 1.0 - u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
}

double RadialCutoff::rho1(double s) const {
  const double a = r * r, b = r1 * r1;
  if (s <= a || s >= b) return 0.0;
  const double u = (s - a) / (b - a);
  return -30.0 * u * u * (1.0 - u) * (1.0 - u) / (b - a);
}

double RadialCutoff::rho2(double s) const {
  const double a = r * r, b = r1 * r1;
  if (s <= a || s >= b) return 0.0;
  const double u = (s - a) / (b - a);
  return -60.0 * u * (1.0 - u) * (1.0 - 2.0 * u) / ((b - a) * (b - a));
}

Vec radial_cutoff_generator(const RadialCutoff& c, const Mat& points, const SpectralModel& model) {
  if (points.rows() != model.dim() || c.y.size() != model.dim())
    throw std::invalid_argument("radial_cutoff_generator: dimension mismatch");
  const Vec w1 = model.lambdas().cwiseProduct(model.rates());
  const double tr = w1.sum();
  Vec out(points.cols());
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    const Vec x = points.col(j);
    const Vec z = x - c.y;
    const double s = z.squaredNorm();
    const double drift = (model.rates().array() * x.array() * z.array()).sum();
    out(j) = c.rho1(s) * (tr - drift) + 2.0 * c.rho2(s) * (w1.array() * z.array().square()).sum();
  }
  return out;
}

double max_level_on_ball(const DomainSpec& domain, const Vec& y, double r) {
  // g is a separable quadratic: projected gradient ascent from many starts
  const int d = domain.dim();
  double best = domain(y);
  const int starts = 8 * d;
  for (int s = 0; s < starts; ++s) {
    Vec dir = Vec::Zero(d);
    dir(s % d) = (s / d) % 2 ? -1.0 : 1.0;
    if (s >= 2 * d) dir += Vec::LinSpaced(d, 0.1 * (s + 1), -0.05 * s) / (1.0 + s);
    Vec x = y + r * dir.normalized();
    double step = r;
    for (int it = 0; it < 500 && step > 1e-12; ++it) {
      Vec cand = x + step * domain.gradient(x);
      Vec off = cand - y;
      if (off.norm() > r) cand = y + r * off.normalized();
      if (domain(cand) > domain(x)) {
        x = cand;
      } else {
        step *= 0.5;
      }
    }
    best = std::max(best, domain(x));
  }
  return best;
}

InteriorW22 interior_w22_monitor(const DomainSpec& domain, double lambda, const Vec& f_coeffs, const Vec& y, double r,
                                 const std::vector<double>& eps_ladder, const SpectralModel& model,
                                 const InteriorW22Options& opt) {
  InteriorW22 out;
  out.eps = eps_ladder;
  out.max_level = max_level_on_ball(domain, y, r);
  if (out.max_level >= 1.0) throw std::invalid_argument("interior_w22_monitor: ball touches the boundary");
  for (std::size_t j = 0; j < eps_ladder.size(); ++j)
    if (!(eps_ladder[j] > 0.0) || (j > 0 && !(eps_ladder[j] < eps_ladder[j - 1])))
      throw std::invalid_argument("interior_w22_monitor: eps ladder must be positive and decreasing");
  const GalerkinOperator op = assemble(model, domain, opt.degree_cap, eps_ladder.front(), opt.assembly);
  if (static_cast<std::size_t>(f_coeffs.size()) != op.size())
    throw std::invalid_argument("interior_w22_monitor: f size mismatch");
  const Mat xs = sample_mu(model, opt.samples, opt.seed);
  std::vector<Eigen::Index> inside;
  for (Eigen::Index j = 0; j < xs.cols(); ++j)
    if ((xs.col(j) - y).norm() <= r) inside.push_back(j);
  const Vec w1 = model.lambdas().cwiseProduct(model.rates());
  const Mat W = w1 * w1.transpose();
  for (double e : eps_ladder) {
    const auto s = solve_penalized(op.with_eps(e), lambda, f_coeffs);
    double acc = 0.0;
    for (Eigen::Index j : inside) acc += W.cwiseProduct(s.phi_eps.hessian(xs.col(j), model).cwiseAbs2()).sum();
    out.norms.push_back(acc / double(xs.cols()));
  }
  for (std::size_t j = 1; j < out.norms.size(); ++j)
    out.max_growth = std::max(out.max_growth, out.norms[j] / std::max(out.norms[j - 1], 1e-300));
  out.bounded = out.max_growth <= 2.0;
  return out;
}

}  // namespace oulab
