#pragma once

#include "oulab/domain.hpp"
#include "oulab/mc_estimate.hpp"
#include "oulab/spectral_model.hpp"
#include "oulab/types.hpp"

#include <vector>

namespace oulab {

// E[phi(X_t) 1{no grid state in K^c on (0, t]}]. Requires x in K.
MCEstimate stopped_apply(const Field& phi, double t, const Vec& x, const DomainSpec& domain,
                         const SpectralModel& model, const McParams& mc);

// E[phi(X_t) exp(-(1/eps) int_0^t V(X_s) ds)], trapezoid on the grid.
MCEstimate feynman_kac_apply(const Field& phi, double t, const Vec& x, double eps, const DomainSpec& domain,
                             const SpectralModel& model, const McParams& mc);

// Plain E[phi(X_t)] on the same paths.
MCEstimate plain_apply(const Field& phi, double t, const Vec& x, const SpectralModel& model, const McParams& mc);

struct PenalizationLadder {
  std::vector<double> eps;
  MCEstimate plain;
  MCEstimate stopped;
  std::vector<MCEstimate> penalized;
  std::vector<MCEstimate> gap;       // paired P^eps - T^K
  std::vector<MCEstimate> increment; // paired P^eps_i - P^eps_{i+1}
  std::size_t domination_violations = 0;  // paths breaking T^K <= P^eps <= P^eps' <= plain (phi >= 0)
  bool gap_monotone = false;
  bool cauchy = false;
};

// All estimators on common paths. eps must be strictly decreasing.
PenalizationLadder penalization_ladder(const Field& phi, double t, const Vec& x, const std::vector<double>& eps,
                                       const DomainSpec& domain, const SpectralModel& model, const McParams& mc);

struct DtRefinement {
  std::vector<double> dts;           // 4h, 2h, h
  std::vector<MCEstimate> levels;
  MCEstimate extrapolated;           // polynomial in sqrt(dt) through the three levels
};

// stopped_apply on dt = 4h, 2h, h (h = mc.dt) with shared paths.
DtRefinement stopped_apply_refined(const Field& phi, double t, const Vec& x, const DomainSpec& domain,
                                   const SpectralModel& model, const McParams& mc);

struct ContractionCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double std_error = 0.0;  // of the paired difference
  double acceptance_rate = 0.0;
  std::size_t outer = 0;
  bool pass = false;
};

// int_K (T^K phi)^2 dmu <= int_K phi^2 dmu. mc.paths inner paths per outer point.
ContractionCheck l2_contraction_check(const Field& phi, double t, const DomainSpec& domain,
                                      const SpectralModel& model, const McParams& mc, std::size_t outer = 400);

struct ResolventOptions {
  double tail_tolerance = 1e-4;  // sets t_max = ln(1/tol)/lambda when t_max <= 0
  double t_max = 0.0;
  double f_bound = 1.0;          // sup |f| used for the tail bound
};

struct ResolventEstimate {
  MCEstimate estimate;               // extrapolated in sqrt(dt)
  std::vector<MCEstimate> levels;    // dt = 4h, 2h, h
  double t_max = 0.0;
  double tail_bound = 0.0;
};

// int_0^inf e^{-lambda t} T^K(t) f(x) dt. Each path accumulates e^{-lambda t_i} f(X_i) dt
// while alive, on three nested grids.
ResolventEstimate resolvent_mc(const Field& f, double lambda, const Vec& x, const DomainSpec& domain,
                               const SpectralModel& model, const McParams& mc, const ResolventOptions& opt = {});

struct SemigroupPropertyCheck {
  MCEstimate direct;    // T^K(t+s) phi(x)
  MCEstimate composed;  // T^K(t) [T^K(s) phi](x), nested
  double z = 0.0;
};

SemigroupPropertyCheck semigroup_property_check(const Field& phi, double t, double s, const Vec& x,
                                                const DomainSpec& domain, const SpectralModel& model,
                                                const McParams& mc, std::size_t inner = 64);

}  // namespace oulab
