#pragma once

#include "oulab/chaos.hpp"
#include "oulab/domain.hpp"
#include "oulab/level_gram.hpp"
#include "oulab/mc_estimate.hpp"
#include "oulab/multi_index.hpp"
#include "oulab/spectral_model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace oulab {

struct AssemblyOptions {
  std::size_t max_basis = 20000;
  GramOptions gram;
};

// Hermite-Galerkin matrices of L_alpha and V in the orthonormal chaos basis.
class GalerkinOperator {
 public:
  GalerkinOperator(HermiteBasis basis, SpectralModel model, DomainSpec domain, Vec l_diag, Mat v, Mat k_gram,
                   std::optional<double> eps, AssemblyInfo info);

  const HermiteBasis& basis() const { return basis_; }
  const SpectralModel& model() const { return model_; }
  const DomainSpec& domain() const { return domain_; }
  const Vec& l_alpha_diag() const { return l_; }
  const Mat& v_matrix() const { return v_; }
  const Mat& k_gram() const { return k_gram_; }  // int_K H_gamma H_delta dmu
  std::optional<double> eps() const { return eps_; }
  const AssemblyInfo& assembly() const { return info_; }
  std::size_t size() const { return basis_.size(); }

  // diag(l) - V/eps (or diag(l) without eps)
  Mat matrix() const;

  GalerkinOperator with_eps(std::optional<double> eps) const;

 private:
  HermiteBasis basis_;
  SpectralModel model_;
  DomainSpec domain_;
  Vec l_;
  Mat v_;
  Mat k_gram_;
  std::optional<double> eps_;
  AssemblyInfo info_;
};

GalerkinOperator assemble(const SpectralModel& model, const DomainSpec& domain, int degree_cap,
                          std::optional<double> eps, const AssemblyOptions& opt = {});

// Coefficients of f by tensor Gauss-Hermite quadrature of the given order.
Vec project_field(const Field& f, const HermiteBasis& basis, const SpectralModel& model, int order);

// Coefficients of 1_K.
Vec project_indicator(const GalerkinOperator& op);

struct Bound {
  std::string name;
  double estimate = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct SolveReport {
  ChaosVector phi_eps;
  Vec coeffs;
  double lambda = 0.0;
  double eps = 0.0;
  double f_norm_sq = 0.0;
  Bound l2;       // int phi^2 <= |f|^2 / lambda^2
  Bound grad;     // int |Q^{(1-a)/2} D phi|^2 <= 2 |f|^2 / lambda
  Bound penalty;  // int V phi^2 <= eps |f|^2 / lambda
  double weak_residual = 0.0;
  double condition_number = 0.0;
  bool all_pass() const { return l2.pass && grad.pass && penalty.pass; }
};

inline constexpr double kBoundRoundoff = 1e-10;

SolveReport solve_penalized(const GalerkinOperator& op, double lambda, const Vec& f);
SolveReport solve_penalized(const GalerkinOperator& op, double lambda, const ChaosVector& f);

// Pointwise L_alpha phi from the chaos derivatives.
double apply_generator(const ChaosVector& phi, const Vec& x, const SpectralModel& model);

struct FormCheck {
  double pointwise = 0.0;      // int (L_alpha phi) psi dmu, quadrature of the pointwise operator
  double galerkin = 0.0;       // <diag(l) phi, psi>
  double gradient_form = 0.0;  // -(1/2) int <Q^{(1-a)/2} D phi, Q^{(1-a)/2} D psi> dmu by quadrature
  double coefficient_form = 0.0;  // -(1/2) sum gamma_h lambda_h^{-a} phi_gamma psi_gamma
  double residual = 0.0;
};

FormCheck dirichlet_form_check(const GalerkinOperator& op, const ChaosVector& phi, const ChaosVector& psi);

// phi = psi case of the Dirichlet form identity.
FormCheck energy_identity_check(const GalerkinOperator& op, const ChaosVector& phi);

struct ProbeComparison {
  Vec x;
  double galerkin = 0.0;
  MCEstimate mc;
  double tolerance = 0.0;  // 3 (stderr + extrapolation error at the point)
  bool pass = false;
};

struct DirichletLimitOptions {
  int degree_cap = 10;
  AssemblyOptions assembly;
  std::optional<Vec> f_coeffs;  // Galerkin right-hand side; projected from f when absent
  int projection_order = 0;     // Gauss-Hermite order for projecting f (0: cap + 2)
  std::vector<Vec> probes;   // resolvent_mc comparison points
  McParams probe_mc{20000, 1.0 / 1024, 7, 1};
};

struct DirichletLimit {
  std::vector<double> eps;
  std::vector<SolveReport> solves;
  ChaosVector last;
  ChaosVector phi_k;                  // polynomial extrapolation in eps^{1/3}
  double extrapolation_error = 0.0;   // L2 distance to the one-order-lower extrapolant
  std::vector<double> outside_mass;   // int_{K^c} phi_eps^2 dmu
  std::vector<double> w12_norm;       // squared W^{1,2}_alpha norm
  std::vector<double> weak_residual;  // against basis directions V does not see
  std::vector<double> increments;     // |phi_{j+1} - phi_j|
  double observed_rate = 0.0;         // from the last three iterates
  std::vector<ProbeComparison> probes;
};

DirichletLimit dirichlet_limit(const SpectralModel& model, const DomainSpec& domain, double lambda, const Field& f,
                               const std::vector<double>& eps_ladder, const DirichletLimitOptions& opt = {});


struct PoincareResult {
  double ratio_max = 0.0;
  double constant = 0.0;  // lambda_1^alpha
  MultiIndex maximizer;
  bool pass = false;
};

PoincareResult poincare_check(const SpectralModel& model, int degree_cap);

// Variance / energy of phi; constants have no ratio.
double poincare_ratio(const ChaosVector& phi, const SpectralModel& model);

struct SpectralGap {
  std::vector<double> eps;
  std::vector<double> top;   // largest eigenvalue of diag(l) - V/eps
  double extrapolated = 0.0; // polynomial in eps^{1/3}
  double extrapolation_error = 0.0;
  double margin = 0.0;       // -extrapolated
  bool alpha_zero_warning = false;
  bool pass = false;         // extrapolated < 0 (alpha > 0) or <= tol (alpha = 0)
};

SpectralGap spectral_gap_K(const SpectralModel& model, const DomainSpec& domain, const std::vector<double>& eps_ladder,
                           int degree_cap, const AssemblyOptions& opt = {}, double tol = 1e-8);

// exp(t (diag(l) - V/eps)) applied to coefficients.
Vec propagate(const GalerkinOperator& op, const Vec& f, double t);

struct GradientBound {
  double lhs = 0.0;  // energy of the propagated K-projection of f
  double rhs = 0.0;  // t^{-1/2} int_K f^2 dmu
  bool pass = false;
};

GradientBound gradient_bound_check(const GalerkinOperator& op, const Vec& f, double t);

}  // namespace oulab
