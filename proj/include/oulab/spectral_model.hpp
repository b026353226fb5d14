#pragma once

#include "oulab/types.hpp"

namespace oulab {

// Diagonal covariance Q = diag(lambda_k) together with the exponent alpha.
class SpectralModel {
 public:
  SpectralModel(Vec lambdas, double alpha);

  // lambda_k = c * k^{-p}, k = 1..d
  static SpectralModel power_law(int d, double c, double p, double alpha);

  int dim() const { return static_cast<int>(lambdas_.size()); }
  const Vec& lambdas() const { return lambdas_; }
  double lambda(int k) const { return lambdas_(k); }
  double alpha() const { return alpha_; }

  // lambda_k^{-alpha}
  const Vec& rates() const { return rates_; }
  double rate(int k) const { return rates_(k); }

  double trace() const { return lambdas_.sum(); }
  double trace_pow(double p) const { return lambdas_.array().pow(p).sum(); }
  double trace_q_one_minus_alpha() const { return trace_pow(1.0 - alpha_); }

  SpectralModel with_alpha(double alpha) const { return SpectralModel(lambdas_, alpha); }

 private:
  Vec lambdas_;
  double alpha_;
  Vec rates_;
};

}  // namespace oulab
