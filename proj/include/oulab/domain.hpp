#pragma once

#include "oulab/types.hpp"

#include <string>
#include <vector>

namespace oulab {

enum class DomainKind { WholeSpace, HalfSpace, Quadratic, BallOfModes };

std::string to_string(DomainKind k);

// K = {g <= 1} with g(x) = <b, x> + sum_k t_k x_k^2. WholeSpace uses g == 0.
class DomainSpec {
 public:
  static constexpr double kDefaultPenaltyCap = 10.0;

  static DomainSpec whole_space(int dim);
  static DomainSpec half_space(Vec b, double penalty_cap = kDefaultPenaltyCap);
  static DomainSpec quadratic(Vec t, double penalty_cap = kDefaultPenaltyCap);
  static DomainSpec ball_of_modes(int dim, int m, double penalty_cap = kDefaultPenaltyCap);

  DomainKind kind() const { return kind_; }
  int dim() const { return static_cast<int>(b_.size()); }
  double penalty_cap() const { return cap_; }
  int modes() const { return modes_; }
  const Vec& linear() const { return b_; }
  const Vec& quad_diag() const { return t_; }

  template <typename Scalar>
  Scalar g(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x) const {
    Scalar s(0.0);
    for (int k = 0; k < dim(); ++k) {
      if (b_(k) != 0.0) s = s + b_(k) * x(k);
      if (t_(k) != 0.0) s = s + t_(k) * x(k) * x(k);
    }
    return s;
  }
  double operator()(const Vec& x) const { return g<double>(x); }

  Vec gradient(const Vec& x) const { return b_ + 2.0 * t_.cwiseProduct(x); }
  Mat hessian() const { return Mat(2.0 * t_.asDiagonal()); }

  // boundary g = 1 counts as inside
  bool contains(const Vec& x) const { return g<double>(x) <= 1.0; }
  double penalty_of_level(double gv) const;
  double penalty(const Vec& x) const { return penalty_of_level(g<double>(x)); }

  // coordinates on which g depends
  std::vector<int> active_coordinates() const;

  std::string describe() const;

 private:
  DomainSpec(DomainKind kind, Vec b, Vec t, double cap, int modes);

  DomainKind kind_;
  Vec b_;
  Vec t_;
  double cap_;
  int modes_;
};

}  // namespace oulab
