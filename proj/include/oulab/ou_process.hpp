#pragma once

#include "oulab/chaos.hpp"
#include "oulab/domain.hpp"
#include "oulab/random.hpp"
#include "oulab/spectral_model.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>

namespace oulab {

// Exact law of X(t) given X(0) = x: mean e^{-t a_k/2} x_k, variance lambda_k (1 - e^{-t a_k}),
// with a_k = lambda_k^{-alpha}.
class TransitionKernel {
 public:
  TransitionKernel(const SpectralModel& model, double t);

  double t() const { return t_; }
  const Vec& mean_factor() const { return mean_factor_; }
  const Vec& stddev() const { return stddev_; }
  Vec variance() const { return stddev_.array().square(); }

  template <class Gen>
  void step(Eigen::Ref<Vec> x, Gen& rng) const {
    std::normal_distribution<double> n01;
    for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = mean_factor_(k) * x(k) + stddev_(k) * n01(rng);
  }

 private:
  double t_;
  Vec mean_factor_;
  Vec stddev_;
};

Vec transition_sample(const Vec& x, double t, const SpectralModel& model, Rng& rng);

// Uniform grid 0 = t_0 < ... < t_M = t_end; the last step may be shorter.
struct TimeGrid {
  std::size_t steps = 0;
  double dt = 0.0;
  double last_dt = 0.0;
  double time(std::size_t i) const { return i < steps ? i * dt : (steps - 1) * dt + last_dt; }
};

TimeGrid make_time_grid(double t_end, double dt);

struct PathSample {
  Vec times;
  Mat states;  // d x (M+1)
  std::optional<std::size_t> hit_index;
  std::size_t boundary_ties = 0;  // grid states with g exactly 1
};

PathSample simulate_path(const Vec& x, double t_end, double dt, const DomainSpec& domain,
                         const SpectralModel& model, Rng& rng);

// Coefficient-wise e^{-(t/2) sum_k gamma_k lambda_k^{-alpha}}.
ChaosVector mehler_apply(const ChaosVector& phi, double t, const SpectralModel& model);

// -(1/2) sum_k gamma_k lambda_k^{-alpha}
double l_alpha_eigenvalue(const MultiIndex& gamma, const SpectralModel& model);

// Rows "path_id,t,x1..xd,in_K".
void write_paths_csv(std::ostream& os, const std::vector<PathSample>& paths, const DomainSpec& domain);

}  // namespace oulab
