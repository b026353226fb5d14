#pragma once

#include "oulab/hermite.hpp"
#include "oulab/multi_index.hpp"
#include "oulab/spectral_model.hpp"
#include "oulab/types.hpp"

#include <iosfwd>
#include <map>

namespace oulab {

// Finite Hermite expansion phi = sum_gamma phi_gamma H_gamma.
class ChaosVector {
 public:
  ChaosVector(int dim, int degree_cap);

  static ChaosVector basis_element(int dim, int degree_cap, const MultiIndex& gamma, double c = 1.0);
  static ChaosVector from_dense(const HermiteBasis& basis, const Vec& coeffs);

  int dim() const { return dim_; }
  int degree_cap() const { return cap_; }
  int max_degree() const;

  void set(const MultiIndex& gamma, double value);
  double get(const MultiIndex& gamma) const;
  const std::map<MultiIndex, double>& coeffs() const { return coeffs_; }

  Vec to_dense(const HermiteBasis& basis) const;

  double l2_norm_sq() const;

  template <typename Scalar>
  Scalar evaluate(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x, const SpectralModel& model) const;

  double operator()(const Vec& x, const SpectralModel& model) const { return evaluate<double>(x, model); }
  Vec gradient(const Vec& x, const SpectralModel& model) const;
  Mat hessian(const Vec& x, const SpectralModel& model) const;

 private:
  void check_index(const MultiIndex& gamma) const;

  int dim_;
  int cap_;
  std::map<MultiIndex, double> coeffs_;
};

ChaosVector operator+(const ChaosVector& a, const ChaosVector& b);
ChaosVector operator*(double s, const ChaosVector& a);

// Rows "g1,...,gd,coefficient".
void write_csv(std::ostream& os, const ChaosVector& phi);
ChaosVector read_csv(std::istream& is, int degree_cap);

SmoothField as_field(const ChaosVector& phi, const SpectralModel& model);

template <typename Scalar>
Scalar ChaosVector::evaluate(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x,
                             const SpectralModel& model) const {
  if (x.size() != dim_ || model.dim() != dim_)
    throw std::invalid_argument("ChaosVector::evaluate: dimension mismatch");
  const int top = max_degree();
  std::vector<std::vector<Scalar>> tables;
  tables.reserve(dim_);
  for (int k = 0; k < dim_; ++k)
    tables.push_back(hermite_table<Scalar>(top, Scalar(x(k) / std::sqrt(model.lambda(k)))));
  Scalar sum(0.0);
  for (const auto& [gamma, c] : coeffs_) {
    Scalar term(c);
    for (int k = 0; k < dim_; ++k)
      if (gamma[k] > 0) term = term * tables[k][gamma[k]];
    sum = sum + term;
  }
  return sum;
}

}  // namespace oulab
