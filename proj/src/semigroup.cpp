#include "oulab/semigroup.hpp"

#include "oulab/numerics.hpp"
#include "oulab/ou_process.hpp"
#include "oulab/random.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace oulab {

namespace {

struct Walk {
  Vec final;
  double v_integral = 0.0;
  std::array<bool, 3> alive{true, true, true};
};

struct Stepper {
  TimeGrid grid;
  TransitionKernel full;
  TransitionKernel last;
  Stepper(const SpectralModel& model, double t, double dt)
      : grid(make_time_grid(t, dt)), full(model, grid.dt), last(model, grid.last_dt) {}
};

// Strides index the grid points at which each level checks membership; the
// final point is always checked. Stops early when nothing else is needed.
Walk walk(const Vec& x, const Stepper& st, const DomainSpec& domain, Rng& rng, const std::array<std::size_t, 3>& strides,
          bool need_path) {
  Walk w;
  w.final = x;
  double v_prev = domain.penalty(x);
  const std::size_t steps = st.grid.steps;
  for (std::size_t i = 1; i <= steps; ++i) {
    const bool is_last = i == steps;
    (is_last ? st.last : st.full).step(w.final, rng);
    const double gv = domain(w.final);
    if (need_path) {
      const double v = domain.penalty_of_level(gv);
      w.v_integral += 0.5 * (v_prev + v) * (is_last ? st.grid.last_dt : st.grid.dt);
      v_prev = v;
    }
    if (gv > 1.0)
      for (std::size_t s = 0; s < 3; ++s)
        if (w.alive[s] && (is_last || i % strides[s] == 0)) w.alive[s] = false;
    if (!need_path && !w.alive[0] && !w.alive[1] && !w.alive[2]) break;
  }
  return w;
}

void require_inside(const DomainSpec& domain, const Vec& x, const char* who) {
  if (!domain.contains(x)) throw std::domain_error(std::string(who) + ": starting point outside K");
}

void check_common(const Vec& x, double t, const DomainSpec& domain, const SpectralModel& model, const McParams& mc) {
  if (x.size() != model.dim() || domain.dim() != model.dim()) throw std::invalid_argument("dimension mismatch");
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  if (mc.paths < 2 || !(mc.dt > 0.0)) throw std::invalid_argument("need at least 2 paths and dt > 0");
}

constexpr std::array<std::size_t, 3> kFine{1, 1, 1};

}  // namespace

MCEstimate stopped_apply(const Field& phi, double t, const Vec& x, const DomainSpec& domain,
                         const SpectralModel& model, const McParams& mc) {
  check_common(x, t, domain, model, mc);
  require_inside(domain, x, "stopped_apply");
  const Stepper st(model, t, mc.dt);
  std::vector<double> v(mc.paths);
  parallel_for(mc.paths, mc.jobs, [&](std::size_t i) {
    Rng rng = substream(mc.seed, i);
    const Walk w = walk(x, st, domain, rng, kFine, false);
    v[i] = w.alive[2] ? phi(w.final) : 0.0;
  });
  return summarize(v, mc.dt, mc.seed);
}

MCEstimate feynman_kac_apply(const Field& phi, double t, const Vec& x, double eps, const DomainSpec& domain,
                             const SpectralModel& model, const McParams& mc) {
  check_common(x, t, domain, model, mc);
  if (!(eps > 0.0)) throw std::invalid_argument("feynman_kac_apply: eps must be positive");
  const Stepper st(model, t, mc.dt);
  std::vector<double> v(mc.paths);
  parallel_for(mc.paths, mc.jobs, [&](std::size_t i) {
    Rng rng = substream(mc.seed, i);
    const Walk w = walk(x, st, domain, rng, kFine, true);
    v[i] = phi(w.final) * std::exp(-w.v_integral / eps);
  });
  return summarize(v, mc.dt, mc.seed);
}

MCEstimate plain_apply(const Field& phi, double t, const Vec& x, const SpectralModel& model, const McParams& mc) {
  const auto whole = DomainSpec::whole_space(model.dim());
  check_common(x, t, whole, model, mc);
  const Stepper st(model, t, mc.dt);
  std::vector<double> v(mc.paths);
  parallel_for(mc.paths, mc.jobs, [&](std::size_t i) {
    Rng rng = substream(mc.seed, i);
    v[i] = phi(walk(x, st, whole, rng, kFine, true).final);
  });
  return summarize(v, mc.dt, mc.seed);
}

PenalizationLadder penalization_ladder(const Field& phi, double t, const Vec& x, const std::vector<double>& eps,
                                       const DomainSpec& domain, const SpectralModel& model, const McParams& mc) {
  check_common(x, t, domain, model, mc);
  require_inside(domain, x, "penalization_ladder");
  if (eps.empty()) throw std::invalid_argument("penalization_ladder: empty ladder");
  for (std::size_t j = 0; j < eps.size(); ++j) {
    if (!(eps[j] > 0.0)) throw std::invalid_argument("penalization_ladder: eps must be positive");
    if (j > 0 && !(eps[j] < eps[j - 1])) throw std::invalid_argument("penalization_ladder: ladder not decreasing");
  }
  const std::size_t L = eps.size(), n = mc.paths;
  const Stepper st(model, t, mc.dt);
  std::vector<double> plain(n), stopped(n);
  std::vector<std::vector<double>> pen(L, std::vector<double>(n));
  std::vector<char> violated(n, 0);
  parallel_for(n, mc.jobs, [&](std::size_t i) {
    Rng rng = substream(mc.seed, i);
    const Walk w = walk(x, st, domain, rng, kFine, true);
    const double p = phi(w.final);
    plain[i] = p;
    stopped[i] = w.alive[2] ? p : 0.0;
    for (std::size_t j = 0; j < L; ++j) pen[j][i] = p * std::exp(-w.v_integral / eps[j]);
    if (p >= 0.0) {
      bool ok = stopped[i] <= pen[L - 1][i] && pen[0][i] <= plain[i];
      for (std::size_t j = 0; j + 1 < L; ++j) ok = ok && pen[j + 1][i] <= pen[j][i];
      violated[i] = ok ? 0 : 1;
    }
  });
  PenalizationLadder out;
  out.eps = eps;
  out.plain = summarize(plain, mc.dt, mc.seed);
  out.stopped = summarize(stopped, mc.dt, mc.seed);
  std::vector<double> diff(n);
  for (std::size_t j = 0; j < L; ++j) {
    out.penalized.push_back(summarize(pen[j], mc.dt, mc.seed));
    for (std::size_t i = 0; i < n; ++i) diff[i] = pen[j][i] - stopped[i];
    out.gap.push_back(summarize(diff, mc.dt, mc.seed));
    if (j + 1 < L) {
      for (std::size_t i = 0; i < n; ++i) diff[i] = pen[j][i] - pen[j + 1][i];
      out.increment.push_back(summarize(diff, mc.dt, mc.seed));
    }
  }
  for (char c : violated) out.domination_violations += c;
  out.gap_monotone = true;
  for (std::size_t j = 1; j < L; ++j)
    out.gap_monotone = out.gap_monotone && std::abs(out.gap[j].value) < std::abs(out.gap[j - 1].value);
  out.cauchy = true;
  for (std::size_t j = 1; j < out.increment.size(); ++j)
    out.cauchy = out.cauchy && std::abs(out.increment[j].value) < std::abs(out.increment[j - 1].value);
  return out;
}

DtRefinement stopped_apply_refined(const Field& phi, double t, const Vec& x, const DomainSpec& domain,
                                   const SpectralModel& model, const McParams& mc) {
  check_common(x, t, domain, model, mc);
  require_inside(domain, x, "stopped_apply_refined");
  const Stepper st(model, t, mc.dt);
  const std::size_t n = mc.paths;
  std::vector<std::vector<double>> lv(3, std::vector<double>(n));
  parallel_for(n, mc.jobs, [&](std::size_t i) {
    Rng rng = substream(mc.seed, i);
    const Walk w = walk(x, st, domain, rng, {4, 2, 1}, false);
    const double p = w.alive[0] ? phi(w.final) : 0.0;
    for (std::size_t s = 0; s < 3; ++s) lv[s][i] = w.alive[s] ? p : 0.0;
  });
  DtRefinement out;
  out.dts = {4 * mc.dt, 2 * mc.dt, mc.dt};
  const std::vector<double> nodes{std::sqrt(out.dts[0]), std::sqrt(out.dts[1]), std::sqrt(out.dts[2])};
  const auto wts = lagrange_at_zero(nodes);
  std::vector<double> ex(n);
  for (std::size_t i = 0; i < n; ++i) ex[i] = wts[0] * lv[0][i] + wts[1] * lv[1][i] + wts[2] * lv[2][i];
  for (std::size_t s = 0; s < 3; ++s) out.levels.push_back(summarize(lv[s], out.dts[s], mc.seed));
  out.extrapolated = summarize(ex, 0.0, mc.seed);
  return out;
}

ContractionCheck l2_contraction_check(const Field& phi, double t, const DomainSpec& domain,
                                      const SpectralModel& model, const McParams& mc, std::size_t outer) {
  if (outer < 2) throw std::invalid_argument("l2_contraction_check: need at least 2 outer samples");
  if (mc.paths < 2) throw std::invalid_argument("l2_contraction_check: need at least 2 inner paths");
  constexpr std::size_t kMaxTrials = 100000;
  const std::uint64_t outer_seed = derive_seed(mc.seed, 0);
  std::vector<Vec> points(outer);
  std::vector<std::size_t> trials(outer, 0);
  parallel_for(outer, mc.jobs, [&](std::size_t j) {
    Rng rng = substream(outer_seed, j);
    Vec y(model.dim());
    do {
      if (++trials[j] > kMaxTrials) throw NumericalError("l2_contraction_check: rejection sampling of mu|K stalled");
      std::normal_distribution<double> n01;
      for (int k = 0; k < model.dim(); ++k) y(k) = std::sqrt(model.lambda(k)) * n01(rng);
    } while (!domain.contains(y));
    points[j] = y;
  });
  std::size_t total = 0;
  for (auto c : trials) total += c;
  const double acc = double(outer) / double(total);
  if (acc < 0.01) throw NumericalError("l2_contraction_check: acceptance rate below 1%");

  const std::size_t half = mc.paths / 2;
  std::vector<double> lhs(outer), rhs(outer), diff(outer);
  const Stepper st(model, t, mc.dt);
  parallel_for(outer, mc.jobs, [&](std::size_t j) {
    const std::uint64_t s = derive_seed(mc.seed, j + 1);
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < 2 * half; ++i) {
      Rng rng = substream(s, i);
      const Walk w = walk(points[j], st, domain, rng, kFine, false);
      const double v = w.alive[2] ? phi(w.final) : 0.0;
      (i < half ? a : b) += v;
    }
    // product of independent halves is unbiased for (T^K phi)^2
    lhs[j] = (a / half) * (b / half);
    const double p = phi(points[j]);
    rhs[j] = p * p;
    diff[j] = lhs[j] - rhs[j];
  });
  ContractionCheck out;
  out.outer = outer;
  out.acceptance_rate = acc;
  out.lhs = acc * summarize(lhs).value;
  out.rhs = acc * summarize(rhs).value;
  out.std_error = acc * summarize(diff).std_error;
  out.pass = out.lhs <= out.rhs + 3.0 * out.std_error;
  return out;
}

ResolventEstimate resolvent_mc(const Field& f, double lambda, const Vec& x, const DomainSpec& domain,
                               const SpectralModel& model, const McParams& mc, const ResolventOptions& opt) {
  if (!(lambda > 0.0)) throw std::invalid_argument("resolvent_mc: lambda must be positive");
  ResolventEstimate out;
  out.t_max = opt.t_max > 0.0 ? opt.t_max : std::log(1.0 / opt.tail_tolerance) / lambda;
  check_common(x, out.t_max, domain, model, mc);
  require_inside(domain, x, "resolvent_mc");
  const double h = mc.dt;
  std::size_t steps = static_cast<std::size_t>(std::ceil(out.t_max / h));
  steps = (steps + 3) / 4 * 4;
  out.t_max = steps * h;
  out.tail_bound = std::exp(-lambda * out.t_max) * opt.f_bound / lambda;
  const TransitionKernel kernel(model, h);
  const std::array<std::size_t, 3> strides{4, 2, 1};
  const std::size_t n = mc.paths;
  std::vector<std::vector<double>> lv(3, std::vector<double>(n));
  parallel_for(n, mc.jobs, [&](std::size_t p) {
    Rng rng = substream(mc.seed, p);
    Vec cur = x;
    std::array<bool, 3> alive{true, true, true};
    std::array<double, 3> acc{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < steps; ++i) {
      if (i > 0) {
        kernel.step(cur, rng);
        if (domain(cur) > 1.0)
          for (std::size_t s = 0; s < 3; ++s)
            if (i % strides[s] == 0) alive[s] = false;
      }
      if (!alive[0]) break;
      bool any = false;
      for (std::size_t s = 0; s < 3; ++s) any = any || (alive[s] && i % strides[s] == 0);
      if (!any) continue;
      const double val = std::exp(-lambda * i * h) * f(cur);
      for (std::size_t s = 0; s < 3; ++s)
        if (alive[s] && i % strides[s] == 0) acc[s] += val * strides[s] * h;
    }
    for (std::size_t s = 0; s < 3; ++s) lv[s][p] = acc[s];
  });
  const std::vector<double> nodes{std::sqrt(4 * h), std::sqrt(2 * h), std::sqrt(h)};
  const auto wts = lagrange_at_zero(nodes);
  std::vector<double> ex(n);
  for (std::size_t i = 0; i < n; ++i) ex[i] = wts[0] * lv[0][i] + wts[1] * lv[1][i] + wts[2] * lv[2][i];
  for (std::size_t s = 0; s < 3; ++s) out.levels.push_back(summarize(lv[s], strides[s] * h, mc.seed));
  out.estimate = summarize(ex, 0.0, mc.seed);
  return out;
}

SemigroupPropertyCheck semigroup_property_check(const Field& phi, double t, double s, const Vec& x,
                                                const DomainSpec& domain, const SpectralModel& model,
                                                const McParams& mc, std::size_t inner) {
  if (inner < 1) throw std::invalid_argument("semigroup_property_check: inner must be positive");
  SemigroupPropertyCheck out;
  McParams direct = mc;
  direct.seed = derive_seed(mc.seed, 1);
  out.direct = stopped_apply(phi, t + s, x, domain, model, direct);
  check_common(x, t, domain, model, mc);
  const Stepper outer_st(model, t, mc.dt);
  const Stepper inner_st(model, s, mc.dt);
  const std::uint64_t outer_seed = derive_seed(mc.seed, 2);
  std::vector<double> v(mc.paths);
  parallel_for(mc.paths, mc.jobs, [&](std::size_t i) {
    Rng rng = substream(outer_seed, i);
    const Walk w = walk(x, outer_st, domain, rng, kFine, false);
    if (!w.alive[2]) {
      v[i] = 0.0;
      return;
    }
    const std::uint64_t inner_seed = derive_seed(mc.seed, 3 + i);
    double acc = 0.0;
    for (std::size_t m = 0; m < inner; ++m) {
      Rng r2 = substream(inner_seed, m);
      const Walk w2 = walk(w.final, inner_st, domain, r2, kFine, false);
      if (w2.alive[2]) acc += phi(w2.final);
    }
    v[i] = acc / double(inner);
  });
  out.composed = summarize(v, mc.dt, outer_seed);
  const double se = std::hypot(out.direct.std_error, out.composed.std_error);
  out.z = se > 0.0 ? (out.direct.value - out.composed.value) / se : 0.0;
  return out;
}

}  // namespace oulab
