#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>

namespace oulab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Raised when a numerical procedure cannot deliver a trustworthy answer.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Field = std::function<double(const Vec&)>;

// Scalar field with an analytic gradient.
struct SmoothField {
  Field value;
  std::function<Vec(const Vec&)> gradient;
};

}  // namespace oulab
