#include "oulab/domain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace oulab {

std::string to_string(DomainKind k) {
  switch (k) {
    case DomainKind::WholeSpace: return "whole";
    case DomainKind::HalfSpace: return "halfspace";
    case DomainKind::Quadratic: return "quadratic";
    case DomainKind::BallOfModes: return "ball";
  }
  return "unknown";
}

DomainSpec::DomainSpec(DomainKind kind, Vec b, Vec t, double cap, int modes)
    : kind_(kind), b_(std::move(b)), t_(std::move(t)), cap_(cap), modes_(modes) {
  if (b_.size() < 1) throw std::invalid_argument("DomainSpec: empty dimension");
  if (!(cap_ > 0.0)) throw std::invalid_argument("DomainSpec: penalty_cap must be positive");
}

DomainSpec DomainSpec::whole_space(int dim) {
  return DomainSpec(DomainKind::WholeSpace, Vec::Zero(dim), Vec::Zero(dim), kDefaultPenaltyCap, 0);
}

DomainSpec DomainSpec::half_space(Vec b, double penalty_cap) {
  if (std::abs(b.norm() - 1.0) > 1e-12) throw std::invalid_argument("DomainSpec::half_space: |b| must be 1");
  const auto d = b.size();
  return DomainSpec(DomainKind::HalfSpace, std::move(b), Vec::Zero(d), penalty_cap, 0);
}

DomainSpec DomainSpec::quadratic(Vec t, double penalty_cap) {
  if (t.cwiseAbs().maxCoeff() == 0.0) throw std::invalid_argument("DomainSpec::quadratic: T must be nonzero");
  const auto d = t.size();
  return DomainSpec(DomainKind::Quadratic, Vec::Zero(d), std::move(t), penalty_cap, 0);
}

DomainSpec DomainSpec::ball_of_modes(int dim, int m, double penalty_cap) {
  if (m < 1 || m > dim) throw std::invalid_argument("DomainSpec::ball_of_modes: need 1 <= m <= d");
  Vec t = Vec::Zero(dim);
  t.head(m).setOnes();
  return DomainSpec(DomainKind::BallOfModes, Vec::Zero(dim), std::move(t), penalty_cap, m);
}

double DomainSpec::penalty_of_level(double gv) const { return std::min(cap_, std::max(0.0, gv - 1.0)); }

std::vector<int> DomainSpec::active_coordinates() const {
  std::vector<int> a;
  for (int k = 0; k < dim(); ++k)
    if (b_(k) != 0.0 || t_(k) != 0.0) a.push_back(k);
  return a;
}

std::string DomainSpec::describe() const {
  std::ostringstream os;
  os << to_string(kind_) << "(d=" << dim();
  if (kind_ == DomainKind::HalfSpace) os << ", b=[" << b_.transpose() << "]";
  if (kind_ == DomainKind::Quadratic) os << ", t=[" << t_.transpose() << "]";
  if (kind_ == DomainKind::BallOfModes) os << ", m=" << modes_;
  os << ", cap=" << cap_ << ")";
  return os.str();
}

}  // namespace oulab
