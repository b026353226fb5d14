#pragma once

#include "oulab/domain.hpp"
#include "oulab/mc_estimate.hpp"
#include "oulab/spectral_model.hpp"
#include "oulab/types.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace oulab {

inline constexpr double kSingularGuard = 1e-8;
inline constexpr double kSingularFlagFraction = 1e-4;

// Symbolic facts about g, read off the variant.
struct LevelHypotheses {
  bool gradient_bounded_on_K = false;  // sup_K |Q^{1/2} Dg| < inf
  bool l0_linear_on_K = false;         // L_0 g at most linear on K
  double inverse_gradient_p = 0.0;     // |Q^{1/2}Dg|^{-1} in L^p for p below this
  bool rem1_conditions = false;        // |.|^{-1} in L^4, psi in W^{1,4}, Hessian ratios in L^2
  std::string note;
};

// g, Dg, D^2 g, |Q^{1/2} Dg| and L_0 g for the level function of a domain.
class LevelFunction {
 public:
  explicit LevelFunction(DomainSpec domain);

  DomainKind kind() const { return domain_.kind(); }
  const DomainSpec& domain() const { return domain_; }
  int dim() const { return domain_.dim(); }

  double value(const Vec& x) const { return domain_(x); }
  Vec gradient(const Vec& x) const { return domain_.gradient(x); }
  Mat hessian() const { return domain_.hessian(); }
  double qnorm_gradient(const Vec& x, const SpectralModel& model) const;
  // <Q^{1/2} Dg, Q^{1/2} Dr>
  double qdot_gradient(const Vec& x, const Vec& dr, const SpectralModel& model) const;
  double l0(const Vec& x, const SpectralModel& model) const;
  // Tr[Q D^2 g] / 2
  double half_trace(const SpectralModel& model) const;
  // inf g, or -infinity
  double range_lower() const;

  LevelHypotheses hypotheses() const;

 private:
  DomainSpec domain_;
};

// NaN at a singular point.
double psi_unchecked(const LevelFunction& g, const Vec& x, const SpectralModel& model);

// L_0 g / |Q^{1/2}Dg|^2 - <Q^{1/2}D^2g Q^{1/2} Q^{1/2}Dg, Q^{1/2}Dg> / |Q^{1/2}Dg|^4.
// Throws NumericalError when |Q^{1/2}Dg| < kSingularGuard.
double psi_eval(const LevelFunction& g, const Vec& x, const SpectralModel& model);

// 1-D profile phi with two derivatives.
struct Profile {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> d2f;

  static Profile constant(double c);
  static Profile sine(double omega = 1.0, double shift = 0.0);
  static Profile tanh_profile(double scale = 1.0);
};

// rho and rho_1 = 2 psi rho + <Q^{1/2}Dg, Q^{1/2}D rho> / |Q^{1/2}Dg|^2.
struct SurfaceWeight {
  SmoothField rho;

  static SurfaceWeight unit(int dim);
  // H_{e_k}^2 = x_k^2 / lambda_k
  static SurfaceWeight hermite_square(int k, const SpectralModel& model);

  double rho_1(const LevelFunction& g, const Vec& x, const SpectralModel& model) const;
};

struct IdentityCheck {
  std::string name;
  MCEstimate lhs;
  MCEstimate rhs;
  MCEstimate difference;  // paired, common samples
  double z = 0.0;
  std::size_t rejected = 0;
  bool singular_flag = false;  // rejected fraction above kSingularFlagFraction
  bool pass(double zmax = 3.0) const;
};

// order 1: int (phi' o g) rho dmu = - int (phi o g) rho_1 dmu
// order 2: int (phi'' o g) rho dmu = - int (phi' o g) rho_1 dmu
// With rho = 1 these read E phi'(g) = -2 E phi(g) psi and E phi''(g) = -2 E phi'(g) psi.
IdentityCheck pushforward_ibp_check(const LevelFunction& g, const Profile& phi, int order, const SpectralModel& model,
                                    const McParams& mc, const std::optional<SurfaceWeight>& weight = std::nullopt);

struct DensityCurve {
  std::vector<double> grid;
  std::vector<double> k_values;
  std::vector<double> k_std_error;
  std::vector<double> k_prime;  // from the rho_1 moment identity
  std::string method = "smoothed";
  double bandwidth = 0.0;
  double mass = 0.0;  // trapezoid of k_values over grid
  std::size_t samples = 0;
  std::size_t rejected = 0;
};

struct DensityOptions {
  double bandwidth = 0.0;    // 0: 1.06 sd n^{-1/5}
  int bins_per_bandwidth = 8;
  std::size_t min_local = 10; // samples within one bandwidth of each grid point
  bool reflect = true;        // mirror k (not k_prime) at a finite inf g
};

// Kernel-smoothed histogram of g under rho mu (rho = 1 by default). k_prime is the
// smoothed histogram of rho_1, which is the derivative of k_rho.
DensityCurve density_estimate(const LevelFunction& g, const SpectralModel& model, const McParams& mc,
                              const std::vector<double>& grid, const std::optional<SurfaceWeight>& weight = std::nullopt,
                              const DensityOptions& opt = {});

struct ShellOptions {
  double width = 0.0;            // largest shell half-width; 0 picks it from the samples
  std::size_t min_shell = 1000;  // samples required in the thinnest shell
  bool density_route = true;
  DensityOptions density;
};

struct SurfaceIntegral {
  double r = 0.0;
  std::vector<double> widths;          // eps, eps/2, eps/4
  std::vector<MCEstimate> levels;      // (1/2w) int_{|g-r|<=w} f |Q^{1/2}Dg| dmu
  std::vector<std::size_t> counts;
  MCEstimate thin_shell;               // polynomial in w^2 through the three levels
  double extrapolation_error = 0.0;    // distance to the two-level value
  double density_route = 0.0;          // k_{f |Q^{1/2}Dg|}(r)
  double density_std_error = 0.0;
  double bandwidth = 0.0;
  std::size_t rejected = 0;

  double combined_error() const { return thin_shell.std_error + extrapolation_error + density_std_error; }
  bool routes_agree(double factor = 3.0) const;
};

// int_{Sigma_r} f dsigma_r.
SurfaceIntegral surface_integral(const Field& f, const LevelFunction& g, double r, const SpectralModel& model,
                                 const McParams& mc, const ShellOptions& opt = {});

// Same with the integrand already multiplied by |Q^{1/2}Dg|.
SurfaceIntegral surface_integral_weighted(const Field& f_times_qnorm, const LevelFunction& g, double r,
                                          const SpectralModel& model, const McParams& mc, const ShellOptions& opt = {});

struct BoundaryIbp {
  MCEstimate lhs;      // int_K D_k phi dmu
  MCEstimate volume;   // (1/lambda_k) int_K x_k phi dmu
  SurfaceIntegral surface;  // int_Sigma (D_k g / |Q^{1/2}Dg|) phi dsigma
  double residual = 0.0;    // lhs - volume - surface
  double error = 0.0;
  double z = 0.0;
  bool pass(double zmax = 3.0) const;
};

// int_K D_k phi = (1/lambda_k) int_K x_k phi + int_Sigma (D_k g/|Q^{1/2}Dg|) phi dsigma, Sigma = {g = 1}.
BoundaryIbp boundary_ibp_check(const SmoothField& phi, int k, const LevelFunction& g, const SpectralModel& model,
                               const McParams& mc, const ShellOptions& opt = {});

struct BoundaryEnergy {
  SurfaceIntegral surface;  // int_Sigma phi^2 |Q^{1/2}Dg| dsigma
  MCEstimate via_K;         // 2 int_K (phi <Q^{1/2}Dphi, Q^{1/2}Dg> + L_0g phi^2)
  MCEstimate via_Kc;        // -2 int_{K^c} (same integrand)
  MCEstimate whole_space;   // int_H of the integrand, zero by the Dirichlet form identity
  double z_K = 0.0;
  double z_Kc = 0.0;
  bool pass(double zmax = 3.0) const;
};

BoundaryEnergy boundary_energy_check(const SmoothField& phi, const LevelFunction& g, const SpectralModel& model,
                                     const McParams& mc, const ShellOptions& opt = {});

// int_{Sigma_r} |phi| dsigma as a thin-shell limit.
SurfaceIntegral trace_estimate(const Field& phi, const LevelFunction& g, const SpectralModel& model,
                               const McParams& mc, double r = 1.0, const ShellOptions& opt = {});

struct InverseMoment {
  double p = 0.0;
  MCEstimate full;     // E |Q^{1/2}Dg|^{-p} on n samples
  MCEstimate quarter;  // on the first n/4
  double growth = 0.0; // full / quarter
  bool finite_expected = false;
};

// Diagnostic for the integrability of |Q^{1/2}Dg|^{-1}.
std::vector<InverseMoment> inverse_gradient_moments(const LevelFunction& g, const SpectralModel& model,
                                                    const std::vector<double>& powers, const McParams& mc);

}  // namespace oulab
