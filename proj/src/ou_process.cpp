#include "oulab/ou_process.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace oulab {

TransitionKernel::TransitionKernel(const SpectralModel& model, double t) : t_(t) {
  if (!(t > 0.0)) throw std::invalid_argument("TransitionKernel: t must be positive");
  const Vec a = model.rates();
  mean_factor_ = (-0.5 * t * a.array()).exp();
  stddev_.resize(model.dim());
  // -expm1 keeps small-t variances accurate
  for (int k = 0; k < model.dim(); ++k) stddev_(k) = std::sqrt(-model.lambda(k) * std::expm1(-t * a(k)));
}

Vec transition_sample(const Vec& x, double t, const SpectralModel& model, Rng& rng) {
  if (x.size() != model.dim()) throw std::invalid_argument("transition_sample: dimension mismatch");
  TransitionKernel kernel(model, t);
  Vec y = x;
  kernel.step(y, rng);
  return y;
}

TimeGrid make_time_grid(double t_end, double dt) {
  if (!(dt > 0.0) || !(t_end > 0.0)) throw std::invalid_argument("make_time_grid: t_end and dt must be positive");
  TimeGrid g;
  g.dt = dt;
  const double n = t_end / dt;
  auto full = static_cast<std::size_t>(std::floor(n + 1e-9));
  const double rest = t_end - full * dt;
  if (rest > 1e-9 * dt) {
    g.steps = full + 1;
    g.last_dt = rest;
  } else {
    g.steps = full;
    g.last_dt = dt;
  }
  return g;
}

PathSample simulate_path(const Vec& x, double t_end, double dt, const DomainSpec& domain,
                         const SpectralModel& model, Rng& rng) {
  if (x.size() != model.dim() || domain.dim() != model.dim())
    throw std::invalid_argument("simulate_path: dimension mismatch");
  const TimeGrid grid = make_time_grid(t_end, dt);
  TransitionKernel full(model, grid.dt);
  TransitionKernel last(model, grid.last_dt);
  PathSample p;
  p.times.resize(grid.steps + 1);
  p.states.resize(model.dim(), grid.steps + 1);
  p.times(0) = 0.0;
  p.states.col(0) = x;
  auto record = [&](std::size_t i) {
    const double gv = domain(p.states.col(i));
    if (gv == 1.0) ++p.boundary_ties;
    if (!p.hit_index && gv > 1.0) p.hit_index = i;
  };
  record(0);
  Vec cur = x;
  for (std::size_t i = 1; i <= grid.steps; ++i) {
    (i == grid.steps ? last : full).step(cur, rng);
    p.times(i) = grid.time(i);
    p.states.col(i) = cur;
    record(i);
  }
  return p;
}

double l_alpha_eigenvalue(const MultiIndex& gamma, const SpectralModel& model) {
  double s = 0.0;
  for (int k = 0; k < model.dim(); ++k) s += gamma[k] * model.rate(k);
  return -0.5 * s;
}

ChaosVector mehler_apply(const ChaosVector& phi, double t, const SpectralModel& model) {
  if (t < 0.0) throw std::invalid_argument("mehler_apply: t must be non-negative");
  if (phi.dim() != model.dim()) throw std::invalid_argument("mehler_apply: dimension mismatch");
  ChaosVector out(phi.dim(), phi.degree_cap());
  for (const auto& [g, c] : phi.coeffs()) out.set(g, std::exp(t * l_alpha_eigenvalue(g, model)) * c);
  return out;
}

void write_paths_csv(std::ostream& os, const std::vector<PathSample>& paths, const DomainSpec& domain) {
  os << "path_id,t";
  for (int k = 0; k < domain.dim(); ++k) os << ",x" << (k + 1);
  os << ",in_K\n" << std::setprecision(12);
  for (std::size_t id = 0; id < paths.size(); ++id) {
    const auto& p = paths[id];
    for (Eigen::Index i = 0; i < p.times.size(); ++i) {
      os << id << ',' << p.times(i);
      for (int k = 0; k < domain.dim(); ++k) os << ',' << p.states(k, i);
      os << ',' << (domain.contains(p.states.col(i)) ? 1 : 0) << '\n';
    }
  }
}

}  // namespace oulab
