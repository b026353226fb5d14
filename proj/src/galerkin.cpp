#include "oulab/galerkin.hpp"

#include "oulab/numerics.hpp"
#include "oulab/ou_process.hpp"
#include "oulab/quadrature.hpp"
#include "oulab/semigroup.hpp"
#include "oulab/sobolev.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oulab {

GalerkinOperator::GalerkinOperator(HermiteBasis basis, SpectralModel model, DomainSpec domain, Vec l_diag, Mat v,
                                   Mat k_gram, std::optional<double> eps, AssemblyInfo info)
    : basis_(std::move(basis)),
      model_(std::move(model)),
      domain_(std::move(domain)),
      l_(std::move(l_diag)),
      v_(std::move(v)),
      k_gram_(std::move(k_gram)),
      eps_(eps),
      info_(std::move(info)) {
  if (eps_ && !(*eps_ > 0.0)) throw std::invalid_argument("GalerkinOperator: eps must be positive");
}

Mat GalerkinOperator::matrix() const {
  Mat m = eps_ ? Mat(-v_ / *eps_) : Mat::Zero(v_.rows(), v_.cols());
  m.diagonal() += l_;
  return m;
}

GalerkinOperator GalerkinOperator::with_eps(std::optional<double> eps) const {
  GalerkinOperator out = *this;
  if (eps && !(*eps > 0.0)) throw std::invalid_argument("GalerkinOperator: eps must be positive");
  out.eps_ = eps;
  return out;
}

GalerkinOperator assemble(const SpectralModel& model, const DomainSpec& domain, int degree_cap,
                          std::optional<double> eps, const AssemblyOptions& opt) {
  if (domain.dim() != model.dim()) throw std::invalid_argument("assemble: dimension mismatch");
  HermiteBasis basis(model.dim(), degree_cap, opt.max_basis);
  Vec l(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) l(i) = l_alpha_eigenvalue(basis[i], model);
  AssemblyInfo info, kinfo;
  Mat v = level_weighted_gram(basis, model, domain, penalty_weight(domain), opt.gram, &info);
  Mat k = level_weighted_gram(basis, model, domain, inside_weight(), opt.gram, &kinfo);
  return GalerkinOperator(std::move(basis), model, domain, std::move(l), std::move(v), std::move(k), eps,
                          std::move(info));
}

Vec project_field(const Field& f, const HermiteBasis& basis, const SpectralModel& model, int order) {
  const auto rule = tensor_rule(gauss_hermite(order), model);
  Vec c = Vec::Zero(static_cast<Eigen::Index>(basis.size()));
  for (Eigen::Index j = 0; j < rule.points.cols(); ++j) {
    const Vec x = rule.points.col(j);
    const double fw = rule.weights(j) * f(x);
    if (fw == 0.0) continue;
    for (std::size_t i = 0; i < basis.size(); ++i) c(i) += fw * hermite_tensor<double>(basis[i], x, model);
  }
  return c;
}

Vec project_indicator(const GalerkinOperator& op) { return op.k_gram().col(0); }

namespace {

Bound make_bound(std::string name, double est, double bound) {
  return {std::move(name), est, bound, est <= bound + kBoundRoundoff * std::max(1.0, bound)};
}

}  // namespace

SolveReport solve_penalized(const GalerkinOperator& op, double lambda, const Vec& f) {
  if (!(lambda > 0.0)) throw std::invalid_argument("solve_penalized: lambda must be positive");
  if (!op.eps()) throw std::invalid_argument("solve_penalized: operator has no eps");
  if (static_cast<std::size_t>(f.size()) != op.size()) throw std::invalid_argument("solve_penalized: size mismatch");
  const double eps = *op.eps();
  Mat A = -op.matrix();
  A.diagonal().array() += lambda;
  Eigen::LLT<Mat> llt(A);
  if (llt.info() != Eigen::Success) throw NumericalError("solve_penalized: indefinite system");
  const Vec phi = llt.solve(f);
  const Vec r = A * phi - f;
  if (r.norm() > 1e-8 * std::max(1.0, f.norm())) throw NumericalError("solve_penalized: linear solve did not converge");

  SolveReport s{ChaosVector::from_dense(op.basis(), phi), phi, lambda, eps, f.squaredNorm(), {}, {}, {}, 0.0, 0.0};
  const double fn = s.f_norm_sq;
  s.l2 = make_bound("l2", phi.squaredNorm(), fn / (lambda * lambda));
  s.grad = make_bound("grad", 2.0 * (-op.l_alpha_diag().array() * phi.array().square()).sum(), 2.0 * fn / lambda);
  s.penalty = make_bound("penalty", phi.dot(op.v_matrix() * phi), eps * fn / lambda);
  s.weak_residual = r.cwiseAbs().maxCoeff();
  if (op.size() <= 3000) {
    Eigen::SelfAdjointEigenSolver<Mat> es(A, Eigen::EigenvaluesOnly);
    s.condition_number = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
  }
  return s;
}

SolveReport solve_penalized(const GalerkinOperator& op, double lambda, const ChaosVector& f) {
  return solve_penalized(op, lambda, f.to_dense(op.basis()));
}

double apply_generator(const ChaosVector& phi, const Vec& x, const SpectralModel& model) {
  const Vec g = phi.gradient(x, model);
  const Mat h = phi.hessian(x, model);
  double s = 0.0;
  for (int k = 0; k < model.dim(); ++k)
    s += 0.5 * model.lambda(k) * model.rate(k) * h(k, k) - 0.5 * x(k) * model.rate(k) * g(k);
  return s;
}

FormCheck dirichlet_form_check(const GalerkinOperator& op, const ChaosVector& phi, const ChaosVector& psi) {
  const auto& m = op.model();
  const int order = (phi.max_degree() + psi.max_degree()) / 2 + 2;
  const auto rule = tensor_rule(gauss_hermite(order), m);
  const Vec w1 = m.lambdas().cwiseProduct(m.rates());  // lambda^{1-alpha}
  FormCheck c;
  for (Eigen::Index j = 0; j < rule.points.cols(); ++j) {
    const Vec x = rule.points.col(j);
    const double w = rule.weights(j);
    c.pointwise += w * apply_generator(phi, x, m) * psi(x, m);
    c.gradient_form -= 0.5 * w * (w1.array() * phi.gradient(x, m).array() * psi.gradient(x, m).array()).sum();
  }
  const Vec a = phi.to_dense(op.basis()), b = psi.to_dense(op.basis());
  c.galerkin = (op.l_alpha_diag().array() * a.array() * b.array()).sum();
  for (const auto& [g, v] : phi.coeffs()) c.coefficient_form += l_alpha_eigenvalue(g, m) * v * psi.get(g);
  c.residual = std::max({std::abs(c.pointwise - c.gradient_form), std::abs(c.galerkin - c.gradient_form),
                         std::abs(c.coefficient_form - c.gradient_form)});
  return c;
}

FormCheck energy_identity_check(const GalerkinOperator& op, const ChaosVector& phi) {
  return dirichlet_form_check(op, phi, phi);
}

namespace {

// increments may stall on a coarse basis before contracting; growth beyond this is flagged
constexpr double kCauchySlack = 1.1;

void validate_ladder(const std::vector<double>& eps) {
  if (eps.empty()) throw std::invalid_argument("eps ladder is empty");
  for (std::size_t j = 0; j < eps.size(); ++j) {
    if (!(eps[j] > 0.0)) throw std::invalid_argument("eps ladder must be positive");
    if (j > 0 && !(eps[j] < eps[j - 1])) throw std::invalid_argument("eps ladder must be strictly decreasing");
  }
}

// Polynomial extrapolation to eps = 0 in s = eps^{1/3}; second value uses the last n-1 points.
template <class T>
std::pair<T, T> extrapolate(const std::vector<double>& eps, const std::vector<T>& vals) {
  std::vector<double> s;
  for (double e : eps) s.push_back(std::cbrt(e));
  const auto w = lagrange_at_zero(s);
  T full = w[0] * vals[0];
  for (std::size_t j = 1; j < vals.size(); ++j) full = full + w[j] * vals[j];
  if (vals.size() < 2) return {full, full};
  const std::vector<double> s2(s.begin() + 1, s.end());
  const auto w2 = lagrange_at_zero(s2);
  T lower = w2[0] * vals[1];
  for (std::size_t j = 2; j < vals.size(); ++j) lower = lower + w2[j - 1] * vals[j];
  return {full, lower};
}

}  // namespace

DirichletLimit dirichlet_limit(const SpectralModel& model, const DomainSpec& domain, double lambda, const Field& f,
                               const std::vector<double>& eps_ladder, const DirichletLimitOptions& opt) {
  validate_ladder(eps_ladder);
  const GalerkinOperator op = assemble(model, domain, opt.degree_cap, eps_ladder.front(), opt.assembly);
  const Vec fc = opt.f_coeffs ? *opt.f_coeffs
                              : project_field(f, op.basis(), model,
                                              opt.projection_order > 0 ? opt.projection_order : opt.degree_cap + 2);
  if (static_cast<std::size_t>(fc.size()) != op.size()) throw std::invalid_argument("dirichlet_limit: f size mismatch");

  DirichletLimit out{eps_ladder, {}, ChaosVector(model.dim(), opt.degree_cap), ChaosVector(model.dim(), opt.degree_cap),
                     0.0, {}, {}, {}, {}, 0.0, {}};
  const Mat outside = Mat::Identity(op.size(), op.size()) - op.k_gram();
  Eigen::SelfAdjointEigenSolver<Mat> ves(op.v_matrix());
  const double vmax = std::max(ves.eigenvalues().maxCoeff(), 1e-300);
  std::vector<Eigen::Index> quiet;
  for (Eigen::Index i = 0; i < ves.eigenvalues().size(); ++i)
    if (ves.eigenvalues()(i) <= 1e-6 * vmax) quiet.push_back(i);
  Mat Z(op.size(), static_cast<Eigen::Index>(quiet.size()));
  for (std::size_t i = 0; i < quiet.size(); ++i) Z.col(static_cast<Eigen::Index>(i)) = ves.eigenvectors().col(quiet[i]);

  std::vector<Vec> iterates;
  for (double e : eps_ladder) {
    const auto s = solve_penalized(op.with_eps(e), lambda, fc);
    const Vec& c = s.coeffs;
    out.outside_mass.push_back(c.dot(outside * c));
    out.w12_norm.push_back(sobolev_norm(s.phi_eps, 1, model));
    Vec r = lambda * c - op.l_alpha_diag().cwiseProduct(c) - fc;
    out.weak_residual.push_back(Z.cols() > 0 ? (Z.transpose() * r).cwiseAbs().maxCoeff() : 0.0);
    iterates.push_back(c);
    out.solves.push_back(s);
  }
  for (std::size_t j = 1; j < iterates.size(); ++j) out.increments.push_back((iterates[j] - iterates[j - 1]).norm());
  for (std::size_t j = 1; j < out.increments.size(); ++j)
    if (out.increments[j] > out.increments[j - 1] * kCauchySlack + 1e-13)
      throw NumericalError("dirichlet_limit: non-Cauchy iterates along the eps ladder");
  const std::size_t ni = out.increments.size();
  if (ni >= 2 && out.increments[ni - 1] > 0.0)
    out.observed_rate = std::log(out.increments[ni - 2] / out.increments[ni - 1]) /
                        std::log(eps_ladder[ni - 2] / eps_ladder[ni - 1]);
  const auto [full, lower] = extrapolate(eps_ladder, iterates);
  out.last = out.solves.back().phi_eps;
  out.phi_k = ChaosVector::from_dense(op.basis(), full);
  out.extrapolation_error = (full - lower).norm();
  const auto lower_phi = ChaosVector::from_dense(op.basis(), lower);

  for (const Vec& x : opt.probes) {
    ProbeComparison p;
    p.x = x;
    p.galerkin = out.phi_k(x, model);
    p.mc = resolvent_mc(f, lambda, x, domain, model, opt.probe_mc).estimate;
    p.tolerance = 3.0 * (p.mc.std_error + std::abs(p.galerkin - lower_phi(x, model)));
    p.pass = std::abs(p.galerkin - p.mc.value) <= p.tolerance;
    out.probes.push_back(p);
  }
  return out;
}

double poincare_ratio(const ChaosVector& phi, const SpectralModel& model) {
  double var = 0.0;
  for (const auto& [g, c] : phi.coeffs())
    if (g.degree() > 0) var += c * c;
  const double e = gradient_energy(phi, model);
  if (e == 0.0) throw std::invalid_argument("poincare_ratio: constant function");
  return var / e;
}

PoincareResult poincare_check(const SpectralModel& model, int degree_cap) {
  if (degree_cap < 1) throw std::invalid_argument("poincare_check: cap must be at least 1");
  const HermiteBasis basis(model.dim(), degree_cap);
  PoincareResult r;
  r.constant = std::pow(model.lambda(0), model.alpha());
  for (const auto& g : basis) {
    if (g.degree() == 0) continue;  // constants have no ratio
    const double ratio = -0.5 / l_alpha_eigenvalue(g, model);
    if (ratio > r.ratio_max) {
      r.ratio_max = ratio;
      r.maximizer = g;
    }
  }
  r.pass = r.ratio_max <= r.constant * (1.0 + 1e-12);
  return r;
}

SpectralGap spectral_gap_K(const SpectralModel& model, const DomainSpec& domain, const std::vector<double>& eps_ladder,
                           int degree_cap, const AssemblyOptions& opt, double tol) {
  validate_ladder(eps_ladder);
  const GalerkinOperator op = assemble(model, domain, degree_cap, eps_ladder.front(), opt);
  SpectralGap r;
  r.eps = eps_ladder;
  for (double e : eps_ladder) {
    Eigen::SelfAdjointEigenSolver<Mat> es(op.with_eps(e).matrix(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("spectral_gap_K: eigensolver failed");
    r.top.push_back(es.eigenvalues().maxCoeff());
  }
  const auto [full, lower] = extrapolate(eps_ladder, r.top);
  r.extrapolated = full;
  r.extrapolation_error = std::abs(full - lower);
  r.margin = -full;
  r.alpha_zero_warning = model.alpha() == 0.0;
  r.pass = r.alpha_zero_warning ? full <= tol : full < 0.0;
  return r;
}

Vec propagate(const GalerkinOperator& op, const Vec& f, double t) {
  if (t < 0.0) throw std::invalid_argument("propagate: t must be non-negative");
  Eigen::SelfAdjointEigenSolver<Mat> es(op.matrix());
  if (es.info() != Eigen::Success) throw NumericalError("propagate: eigensolver failed");
  const Vec decay = (t * es.eigenvalues().array()).exp();
  return es.eigenvectors() * decay.cwiseProduct(es.eigenvectors().transpose() * f);
}

GradientBound gradient_bound_check(const GalerkinOperator& op, const Vec& f, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("gradient_bound_check: t must be positive");
  const Vec c = op.k_gram() * f;  // projection of f 1_K
  const Vec u = propagate(op, c, t);
  GradientBound b;
  b.lhs = 2.0 * (-op.l_alpha_diag().array() * u.array().square()).sum();
  b.rhs = f.dot(op.k_gram() * f) / std::sqrt(t);
  b.pass = b.lhs <= b.rhs * (1.0 + kBoundRoundoff);
  return b;
}

}  // namespace oulab
