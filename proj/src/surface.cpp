#include "oulab/surface.hpp"

#include "oulab/numerics.hpp"
#include "oulab/random.hpp"
#include "oulab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oulab {

namespace {

struct Cloud {
  Mat x;
  Vec g;
  Vec q;  // |Q^{1/2} Dg|
  std::size_t n = 0;
  std::size_t rejected = 0;
  bool singular(std::size_t i) const { return q(static_cast<Eigen::Index>(i)) < kSingularGuard; }
};

Cloud make_cloud(const LevelFunction& lf, const SpectralModel& model, const McParams& mc) {
  if (model.dim() != lf.dim()) throw std::invalid_argument("surface: model and level function dimensions differ");
  if (mc.paths < 2) throw std::invalid_argument("surface: need at least two samples");
  Cloud c;
  c.n = mc.paths;
  c.x = sample_mu(model, c.n, mc.seed, mc.jobs);
  c.g.resize(static_cast<Eigen::Index>(c.n));
  c.q.resize(static_cast<Eigen::Index>(c.n));
  parallel_for(c.n, mc.jobs, [&](std::size_t i) {
    const auto j = static_cast<Eigen::Index>(i);
    const Vec xi = c.x.col(j);
    c.g(j) = lf.value(xi);
    c.q(j) = lf.qnorm_gradient(xi, model);
  });
  for (std::size_t i = 0; i < c.n; ++i)
    if (c.singular(i)) ++c.rejected;
  return c;
}

std::vector<double> per_sample(const Cloud& c, int jobs, const std::function<double(const Vec&, std::size_t)>& fn) {
  std::vector<double> out(c.n, 0.0);
  parallel_for(c.n, jobs, [&](std::size_t i) {
    if (c.singular(i)) return;
    out[i] = fn(c.x.col(static_cast<Eigen::Index>(i)), i);
  });
  return out;
}

double sample_sd(const Vec& v) {
  const double m = v.mean();
  return std::sqrt((v.array() - m).square().sum() / static_cast<double>(v.size() - 1));
}

double reference_bandwidth(const Vec& g) {
  const double sd = sample_sd(g);
  if (!(sd > 0.0)) throw NumericalError("density: level values have zero spread");
  return 1.06 * sd * std::pow(static_cast<double>(g.size()), -0.2);
}

double gauss_kernel(double u, double h) {
  return std::exp(-0.5 * (u / h) * (u / h)) / (h * std::sqrt(2.0 * std::numbers::pi));
}

MCEstimate combine(const std::vector<double>& a, const std::vector<double>& b, double sign, std::uint64_t seed) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] + sign * b[i];
  return summarize(d, 0.0, seed);
}

double z_of(double diff, double err) {
  if (err > 0.0) return diff / err;
  return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

SurfaceIntegral shell_integral(const Cloud& c, const std::vector<double>& fq, double r, const McParams& mc,
                               const ShellOptions& opt) {
  SurfaceIntegral out;
  out.r = r;
  out.rejected = c.rejected;
  if (c.n < opt.min_shell) throw NumericalError("surface_integral: too few shell samples");

  double w = opt.width;
  if (w <= 0.0) {
    std::vector<double> dist(c.n);
    for (std::size_t i = 0; i < c.n; ++i) dist[i] = std::abs(c.g(static_cast<Eigen::Index>(i)) - r);
    const auto kth = dist.begin() + static_cast<std::ptrdiff_t>(opt.min_shell - 1);
    std::nth_element(dist.begin(), kth, dist.end());
    w = std::max(0.2 * sample_sd(c.g), 4.0 * (*kth) * (1.0 + 1e-12));
  }
  out.widths = {w, w / 2.0, w / 4.0};

  std::vector<double> nodes;
  for (double wj : out.widths) nodes.push_back(wj * wj);
  const std::vector<double> w3 = lagrange_at_zero(nodes);
  const std::vector<double> w2 = lagrange_at_zero(std::span<const double>(nodes).subspan(1));

  std::vector<std::vector<double>> lvl(3, std::vector<double>(c.n, 0.0));
  std::vector<double> ex3(c.n, 0.0), ex2(c.n, 0.0);
  out.counts.assign(3, 0);
  for (std::size_t i = 0; i < c.n; ++i) {
    const double d = std::abs(c.g(static_cast<Eigen::Index>(i)) - r);
    for (int j = 0; j < 3; ++j) {
      if (d > out.widths[j]) continue;
      ++out.counts[j];
      lvl[j][i] = fq[i] / (2.0 * out.widths[j]);
    }
    ex3[i] = w3[0] * lvl[0][i] + w3[1] * lvl[1][i] + w3[2] * lvl[2][i];
    ex2[i] = w2[0] * lvl[1][i] + w2[1] * lvl[2][i];
  }
  if (out.counts[2] < opt.min_shell) throw NumericalError("surface_integral: too few shell samples");
  for (int j = 0; j < 3; ++j) out.levels.push_back(summarize(lvl[j], 0.0, mc.seed));
  out.thin_shell = summarize(ex3, 0.0, mc.seed);
  out.extrapolation_error = std::abs(out.thin_shell.value - summarize(ex2, 0.0, mc.seed).value);

  if (opt.density_route) {
    const double h = opt.density.bandwidth > 0.0 ? opt.density.bandwidth : reference_bandwidth(c.g);
    std::vector<double> kv(c.n);
    for (std::size_t i = 0; i < c.n; ++i) kv[i] = fq[i] * gauss_kernel(r - c.g(static_cast<Eigen::Index>(i)), h);
    const MCEstimate k = summarize(kv, 0.0, mc.seed);
    out.density_route = k.value;
    out.density_std_error = k.std_error;
    out.bandwidth = h;
  }
  return out;
}

}  // namespace

LevelFunction::LevelFunction(DomainSpec domain) : domain_(std::move(domain)) {}

double LevelFunction::qnorm_gradient(const Vec& x, const SpectralModel& model) const {
  const Vec dg = gradient(x);
  double s = 0.0;
  for (int k = 0; k < dim(); ++k) s += model.lambda(k) * dg(k) * dg(k);
  return std::sqrt(s);
}

double LevelFunction::qdot_gradient(const Vec& x, const Vec& dr, const SpectralModel& model) const {
  const Vec dg = gradient(x);
  double s = 0.0;
  for (int k = 0; k < dim(); ++k) s += model.lambda(k) * dg(k) * dr(k);
  return s;
}

double LevelFunction::half_trace(const SpectralModel& model) const {
  double s = 0.0;
  for (int k = 0; k < dim(); ++k) s += model.lambda(k) * domain_.quad_diag()(k);
  return s;
}

double LevelFunction::range_lower() const {
  const Vec& b = domain_.linear();
  const Vec& t = domain_.quad_diag();
  double lo = 0.0;
  for (int k = 0; k < dim(); ++k) {
    if (t(k) < 0.0 || (t(k) == 0.0 && b(k) != 0.0)) return -std::numeric_limits<double>::infinity();
    if (t(k) > 0.0) lo -= b(k) * b(k) / (4.0 * t(k));
  }
  return lo;
}

double LevelFunction::l0(const Vec& x, const SpectralModel& model) const {
  return half_trace(model) - 0.5 * x.dot(gradient(x));
}

LevelHypotheses LevelFunction::hypotheses() const {
  LevelHypotheses h;
  const Vec& t = domain_.quad_diag();
  int nonzero = 0;
  bool definite = true;
  for (int k = 0; k < dim(); ++k) {
    if (t(k) != 0.0) ++nonzero;
    if (t(k) < 0.0) definite = false;
  }
  switch (kind()) {
    case DomainKind::WholeSpace:
      h.note = "g is constant; no level sets";
      break;
    case DomainKind::HalfSpace:
      h.gradient_bounded_on_K = true;
      h.l0_linear_on_K = true;
      h.inverse_gradient_p = std::numeric_limits<double>::infinity();
      h.rem1_conditions = true;
      h.note = "Dg = b constant, L_0 g = -g/2";
      break;
    case DomainKind::Quadratic:
    case DomainKind::BallOfModes:
      // |Q^{1/2}Dg|^{-1} ~ |x|^{-1} on the span of the active modes, D psi ~ |x|^{-3}
      h.gradient_bounded_on_K = definite && nonzero == dim();
      h.l0_linear_on_K = h.gradient_bounded_on_K;
      h.inverse_gradient_p = static_cast<double>(nonzero);
      h.rem1_conditions = nonzero > 12;
      h.note = "|Q^{1/2}Dg|^{-1} in L^p iff p < " + std::to_string(nonzero);
      break;
  }
  return h;
}

double psi_unchecked(const LevelFunction& g, const Vec& x, const SpectralModel& model) {
  const Vec dg = g.gradient(x);
  const Vec& t = g.domain().quad_diag();
  double q2 = 0.0;
  double hess = 0.0;
  for (int k = 0; k < g.dim(); ++k) {
    const double lk = model.lambda(k);
    q2 += lk * dg(k) * dg(k);
    hess += 2.0 * t(k) * lk * lk * dg(k) * dg(k);
  }
  if (std::sqrt(q2) < kSingularGuard) return std::numeric_limits<double>::quiet_NaN();
  return g.l0(x, model) / q2 - hess / (q2 * q2);
}

double psi_eval(const LevelFunction& g, const Vec& x, const SpectralModel& model) {
  const double v = psi_unchecked(g, x, model);
  if (std::isnan(v)) throw NumericalError("psi_eval: |Q^{1/2}Dg| vanishes at x");
  return v;
}

Profile Profile::constant(double c) {
  return {"const", [c](double) { return c; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
}

Profile Profile::sine(double omega, double shift) {
  return {"sin",
          [=](double s) { return std::sin(omega * s + shift); },
          [=](double s) { return omega * std::cos(omega * s + shift); },
          [=](double s) { return -omega * omega * std::sin(omega * s + shift); }};
}

Profile Profile::tanh_profile(double scale) {
  return {"tanh",
          [=](double s) { return std::tanh(scale * s); },
          [=](double s) {
            const double c = std::cosh(scale * s);
            return scale / (c * c);
          },
          [=](double s) {
            const double c = std::cosh(scale * s);
            return -2.0 * scale * scale * std::tanh(scale * s) / (c * c);
          }};
}

SurfaceWeight SurfaceWeight::unit(int dim) {
  return {{[](const Vec&) { return 1.0; }, [dim](const Vec&) { return Vec(Vec::Zero(dim)); }}};
}

SurfaceWeight SurfaceWeight::hermite_square(int k, const SpectralModel& model) {
  if (k < 0 || k >= model.dim()) throw std::out_of_range("SurfaceWeight::hermite_square: bad coordinate");
  const double lk = model.lambda(k);
  const int d = model.dim();
  return {{[=](const Vec& x) { return x(k) * x(k) / lk; },
           [=](const Vec& x) {
             Vec gr = Vec::Zero(d);
             gr(k) = 2.0 * x(k) / lk;
             return gr;
           }}};
}

double SurfaceWeight::rho_1(const LevelFunction& g, const Vec& x, const SpectralModel& model) const {
  const double q = g.qnorm_gradient(x, model);
  return 2.0 * psi_eval(g, x, model) * rho.value(x) + g.qdot_gradient(x, rho.gradient(x), model) / (q * q);
}

bool IdentityCheck::pass(double zmax) const { return std::abs(z) < zmax && !singular_flag; }

IdentityCheck pushforward_ibp_check(const LevelFunction& g, const Profile& phi, int order, const SpectralModel& model,
                                    const McParams& mc, const std::optional<SurfaceWeight>& weight) {
  if (order != 1 && order != 2) throw std::invalid_argument("pushforward_ibp_check: order must be 1 or 2");
  const Cloud c = make_cloud(g, model, mc);
  const auto& outer = order == 1 ? phi.df : phi.d2f;
  const auto& inner = order == 1 ? phi.f : phi.df;

  std::vector<double> lhs = per_sample(c, mc.jobs, [&](const Vec& x, std::size_t i) {
    const double rho = weight ? weight->rho.value(x) : 1.0;
    return outer(c.g(static_cast<Eigen::Index>(i))) * rho;
  });
  std::vector<double> rhs = per_sample(c, mc.jobs, [&](const Vec& x, std::size_t i) {
    const double r1 = weight ? weight->rho_1(g, x, model) : 2.0 * psi_unchecked(g, x, model);
    return -inner(c.g(static_cast<Eigen::Index>(i))) * r1;
  });

  IdentityCheck out;
  out.name = phi.name + (order == 1 ? "'" : "''") + (weight ? " weighted" : "");
  out.lhs = summarize(lhs, 0.0, mc.seed);
  out.rhs = summarize(rhs, 0.0, mc.seed);
  out.difference = combine(lhs, rhs, -1.0, mc.seed);
  out.z = z_of(out.difference.value, out.difference.std_error);
  out.rejected = c.rejected;
  out.singular_flag = static_cast<double>(c.rejected) > kSingularFlagFraction * static_cast<double>(c.n);
  return out;
}

DensityCurve density_estimate(const LevelFunction& g, const SpectralModel& model, const McParams& mc,
                              const std::vector<double>& grid, const std::optional<SurfaceWeight>& weight,
                              const DensityOptions& opt) {
  if (grid.empty()) throw std::invalid_argument("density_estimate: empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("density_estimate: grid must increase");
  const Cloud c = make_cloud(g, model, mc);

  std::vector<double> rho = per_sample(c, mc.jobs, [&](const Vec& x, std::size_t) {
    return weight ? weight->rho.value(x) : 1.0;
  });
  std::vector<double> rho1 = per_sample(c, mc.jobs, [&](const Vec& x, std::size_t) {
    return weight ? weight->rho_1(g, x, model) : 2.0 * psi_unchecked(g, x, model);
  });

  DensityCurve out;
  out.grid = grid;
  out.samples = c.n;
  out.rejected = c.rejected;
  const double h = opt.bandwidth > 0.0 ? opt.bandwidth : reference_bandwidth(c.g);
  out.bandwidth = h;

  const double lo = c.g.minCoeff();
  const double hi = c.g.maxCoeff();
  const double delta = h / opt.bins_per_bandwidth;
  const auto nb = static_cast<std::size_t>(std::floor((hi - lo) / delta)) + 1;
  std::vector<double> cnt(nb, 0.0), w1(nb, 0.0), w2(nb, 0.0), p1(nb, 0.0);
  for (std::size_t i = 0; i < c.n; ++i) {
    if (c.singular(i)) continue;
    const auto b = std::min(nb - 1, static_cast<std::size_t>((c.g(static_cast<Eigen::Index>(i)) - lo) / delta));
    cnt[b] += 1.0;
    w1[b] += rho[i];
    w2[b] += rho[i] * rho[i];
    p1[b] += rho1[i];
  }

  const double floor_g = opt.reflect ? g.range_lower() : -std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(c.n);
  const auto reach = static_cast<long>(std::ceil(8.0 * opt.bins_per_bandwidth));
  for (double r : grid) {
    const long center = static_cast<long>(std::floor((r - lo) / delta));
    double k = 0.0, k2 = 0.0, kp = 0.0, local = 0.0;
    for (long b = center - reach; b <= center + reach; ++b) {
      if (b < 0 || b >= static_cast<long>(nb)) continue;
      const double cb = lo + (static_cast<double>(b) + 0.5) * delta;
      const double kern = gauss_kernel(r - cb, h);
      double kk = kern;
      if (std::isfinite(floor_g)) kk += gauss_kernel(r - (2.0 * floor_g - cb), h);
      k += w1[b] * kk;
      k2 += w2[b] * kk * kk;
      kp += p1[b] * kern;
      if (std::abs(r - cb) <= h) local += cnt[b];
    }
    if (local < static_cast<double>(opt.min_local))
      throw NumericalError("density_estimate: empty bins near r = " + std::to_string(r));
    k /= n;
    out.k_values.push_back(k);
    out.k_std_error.push_back(std::sqrt(std::max(0.0, k2 / n - k * k) / n));
    out.k_prime.push_back(kp / n);
  }
  for (std::size_t i = 1; i < grid.size(); ++i)
    out.mass += 0.5 * (grid[i] - grid[i - 1]) * (out.k_values[i] + out.k_values[i - 1]);
  return out;
}

bool SurfaceIntegral::routes_agree(double factor) const {
  return std::abs(thin_shell.value - density_route) <= factor * combined_error();
}

SurfaceIntegral surface_integral_weighted(const Field& f_times_qnorm, const LevelFunction& g, double r,
                                          const SpectralModel& model, const McParams& mc, const ShellOptions& opt) {
  const Cloud c = make_cloud(g, model, mc);
  const std::vector<double> fq = per_sample(c, mc.jobs, [&](const Vec& x, std::size_t) { return f_times_qnorm(x); });
  return shell_integral(c, fq, r, mc, opt);
}

SurfaceIntegral surface_integral(const Field& f, const LevelFunction& g, double r, const SpectralModel& model,
                                 const McParams& mc, const ShellOptions& opt) {
  const Cloud c = make_cloud(g, model, mc);
  const std::vector<double> fq =
      per_sample(c, mc.jobs, [&](const Vec& x, std::size_t i) { return f(x) * c.q(static_cast<Eigen::Index>(i)); });
  return shell_integral(c, fq, r, mc, opt);
}

bool BoundaryIbp::pass(double zmax) const { return std::abs(z) < zmax; }

BoundaryIbp boundary_ibp_check(const SmoothField& phi, int k, const LevelFunction& g, const SpectralModel& model,
                               const McParams& mc, const ShellOptions& opt) {
  if (k < 0 || k >= model.dim()) throw std::out_of_range("boundary_ibp_check: bad coordinate");
  const Cloud c = make_cloud(g, model, mc);
  const double lk = model.lambda(k);
  std::vector<double> lhs = per_sample(c, mc.jobs, [&](const Vec& x, std::size_t i) {
    return c.g(static_cast<Eigen::Index>(i)) <= 1.0 ? phi.gradient(x)(k) : 0.0;
  });
  std::vector<double> vol = per_sample(c, mc.jobs, [&](const Vec& x, std::size_t i) {
    return c.g(static_cast<Eigen::Index>(i)) <= 1.0 ? x(k) * phi.value(x) / lk : 0.0;
  });
  // (D_k g / |Q^{1/2}Dg|) phi times |Q^{1/2}Dg|
  const std::vector<double> fq =
      per_sample(c, mc.jobs, [&](const Vec& x, std::size_t) { return g.gradient(x)(k) * phi.value(x); });

  BoundaryIbp out;
  out.lhs = summarize(lhs, 0.0, mc.seed);
  out.volume = summarize(vol, 0.0, mc.seed);
  out.surface = shell_integral(c, fq, 1.0, mc, opt);
  const MCEstimate paired = combine(lhs, vol, -1.0, mc.seed);
  out.residual = paired.value - out.surface.thin_shell.value;
  out.error = std::hypot(paired.std_error, out.surface.thin_shell.std_error) + out.surface.extrapolation_error;
  out.z = z_of(out.residual, out.error);
  return out;
}

bool BoundaryEnergy::pass(double zmax) const { return std::abs(z_K) < zmax && std::abs(z_Kc) < zmax; }

BoundaryEnergy boundary_energy_check(const SmoothField& phi, const LevelFunction& g, const SpectralModel& model,
                                     const McParams& mc, const ShellOptions& opt) {
  const Cloud c = make_cloud(g, model, mc);
  const std::vector<double> integrand = per_sample(c, mc.jobs, [&](const Vec& x, std::size_t) {
    const double p = phi.value(x);
    return p * g.qdot_gradient(x, phi.gradient(x), model) + g.l0(x, model) * p * p;
  });
  std::vector<double> in_k(c.n), in_kc(c.n);
  for (std::size_t i = 0; i < c.n; ++i) {
    const bool inside = c.g(static_cast<Eigen::Index>(i)) <= 1.0;
    in_k[i] = inside ? 2.0 * integrand[i] : 0.0;
    in_kc[i] = inside ? 0.0 : -2.0 * integrand[i];
  }
  const std::vector<double> fq = per_sample(c, mc.jobs, [&](const Vec& x, std::size_t i) {
    const double q = c.q(static_cast<Eigen::Index>(i));
    const double p = phi.value(x);
    return p * p * q * q;
  });

  BoundaryEnergy out;
  out.surface = shell_integral(c, fq, 1.0, mc, opt);
  out.via_K = summarize(in_k, 0.0, mc.seed);
  out.via_Kc = summarize(in_kc, 0.0, mc.seed);
  out.whole_space = summarize(integrand, 0.0, mc.seed);
  const double se = out.surface.thin_shell.std_error + out.surface.extrapolation_error;
  out.z_K = z_of(out.surface.thin_shell.value - out.via_K.value, std::hypot(se, out.via_K.std_error));
  out.z_Kc = z_of(out.surface.thin_shell.value - out.via_Kc.value, std::hypot(se, out.via_Kc.std_error));
  return out;
}

SurfaceIntegral trace_estimate(const Field& phi, const LevelFunction& g, const SpectralModel& model,
                               const McParams& mc, double r, const ShellOptions& opt) {
  ShellOptions o = opt;
  o.density_route = false;
  return surface_integral([&](const Vec& x) { return std::abs(phi(x)); }, g, r, model, mc, o);
}

std::vector<InverseMoment> inverse_gradient_moments(const LevelFunction& g, const SpectralModel& model,
                                                    const std::vector<double>& powers, const McParams& mc) {
  const Cloud c = make_cloud(g, model, mc);
  const double pmax = g.hypotheses().inverse_gradient_p;
  std::vector<InverseMoment> out;
  for (double p : powers) {
    std::vector<double> v(c.n, 0.0);
    for (std::size_t i = 0; i < c.n; ++i)
      if (!c.singular(i)) v[i] = std::pow(c.q(static_cast<Eigen::Index>(i)), -p);
    InverseMoment m;
    m.p = p;
    m.full = summarize(v, 0.0, mc.seed);
    m.quarter = summarize(std::span<const double>(v).first(std::max<std::size_t>(2, c.n / 4)), 0.0, mc.seed);
    m.growth = m.full.value / m.quarter.value;
    m.finite_expected = p < pmax;
    out.push_back(m);
  }
  return out;
}

}  // namespace oulab
