#pragma once

#include "oulab/chaos.hpp"
#include "oulab/domain.hpp"
#include "oulab/galerkin.hpp"

#include <cstdint>
#include <vector>

namespace oulab {

enum class ExpPart { Cos, Sin };

// beta(x) = cos(<h, x>) or sin(<h, x>)
struct ExponentialTestFunction {
  Vec h;
  ExpPart part = ExpPart::Cos;

  template <typename Scalar>
  Scalar value(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x) const {
    using std::cos;
    using std::sin;
    Scalar s(0.0);
    for (Eigen::Index k = 0; k < h.size(); ++k) s = s + h(k) * x(k);
    return part == ExpPart::Cos ? Scalar(cos(s)) : Scalar(sin(s));
  }
  Vec gradient(const Vec& x) const;
  // L_alpha beta in closed form
  double generator(const Vec& x, const SpectralModel& model) const;
};

// max over a tensor Gauss-Hermite grid of
// |L(phi beta) - beta L phi - phi L beta - <Q^{1-a} D phi, D beta>|,
// with L(phi beta) from automatic second derivatives of the product.
double product_rule_check(const ChaosVector& phi, const ExponentialTestFunction& beta, const SpectralModel& model,
                          int grid_order = 6);

// theta(x) = rho(|x - y|^2); rho = 1 below r^2, 0 above r1^2, quintic smoothstep between.
struct RadialCutoff {
  Vec y;
  double r = 0.5;
  double r1 = 1.0;

  RadialCutoff(Vec center, double r, double r1);
  double rho(double s) const;
  double rho1(double s) const;
  double rho2(double s) const;
  double theta(const Vec& x) const { return rho((x - y).squaredNorm()); }
};

// L_alpha theta at the columns of `points`.
Vec radial_cutoff_generator(const RadialCutoff& cutoff, const Mat& points, const SpectralModel& model);

// max of g over the closed ball B(y, r)
double max_level_on_ball(const DomainSpec& domain, const Vec& y, double r);

struct InteriorW22 {
  std::vector<double> eps;
  std::vector<double> norms;  // int_B sum lambda_h^{1-a} lambda_k^{1-a} (D_hk phi_eps)^2 dmu
  double max_growth = 0.0;    // max ratio of consecutive norms
  double max_level = 0.0;     // max g on the ball
  bool bounded = false;       // max_growth <= 2
};

struct InteriorW22Options {
  int degree_cap = 8;
  AssemblyOptions assembly;
  std::size_t samples = 20000;
  std::uint64_t seed = 31;
};

InteriorW22 interior_w22_monitor(const DomainSpec& domain, double lambda, const Vec& f_coeffs, const Vec& y, double r,
                                 const std::vector<double>& eps_ladder, const SpectralModel& model,
                                 const InteriorW22Options& opt = {});

}  // namespace oulab
