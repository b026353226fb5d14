#include "oulab/spectral_model.hpp"

#include <cmath>
#include <stdexcept>

namespace oulab {

SpectralModel::SpectralModel(Vec lambdas, double alpha) : lambdas_(std::move(lambdas)), alpha_(alpha) {
  if (lambdas_.size() < 1) throw std::invalid_argument("SpectralModel: empty spectrum");
  if (!(alpha_ >= 0.0 && alpha_ <= 1.0)) throw std::invalid_argument("SpectralModel: alpha must lie in [0,1]");
  for (Eigen::Index k = 0; k < lambdas_.size(); ++k) {
    if (!std::isfinite(lambdas_(k)) || lambdas_(k) <= 0.0)
      throw std::invalid_argument("SpectralModel: eigenvalues must be positive and finite");
    if (k > 0 && lambdas_(k) > lambdas_(k - 1))
      throw std::invalid_argument("SpectralModel: eigenvalues must be non-increasing");
  }
  rates_ = lambdas_.array().pow(-alpha_);
}

SpectralModel SpectralModel::power_law(int d, double c, double p, double alpha) {
  if (d < 1 || c <= 0.0 || p < 0.0) throw std::invalid_argument("SpectralModel::power_law: bad parameters");
  Vec l(d);
  for (int k = 0; k < d; ++k) l(k) = c * std::pow(double(k + 1), -p);
  return SpectralModel(l, alpha);
}

}  // namespace oulab
