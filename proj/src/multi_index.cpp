#include "oulab/multi_index.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace oulab {

MultiIndex::MultiIndex(std::vector<int> exponents) : exps_(std::move(exponents)) {
  for (int e : exps_)
    if (e < 0) throw std::invalid_argument("MultiIndex: negative exponent");
  degree_ = std::accumulate(exps_.begin(), exps_.end(), 0);
}

MultiIndex MultiIndex::unit(int dim, int k, int power) {
  if (k < 0 || k >= dim) throw std::invalid_argument("MultiIndex::unit: coordinate out of range");
  std::vector<int> e(dim, 0);
  e[k] = power;
  return MultiIndex(std::move(e));
}

std::string MultiIndex::to_string() const {
  std::string s = "(";
  for (std::size_t k = 0; k < exps_.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(exps_[k]);
  }
  return s + ")";
}

std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
  if (auto c = a.degree_ <=> b.degree_; c != 0) return c;
  if (auto c = a.exps_.size() <=> b.exps_.size(); c != 0) return c;
  for (std::size_t k = 0; k < a.exps_.size(); ++k)
    if (a.exps_[k] != b.exps_[k]) return a.exps_[k] > b.exps_[k] ? std::strong_ordering::less
                                                                : std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::size_t basis_size(int dim, int degree_cap) {
  // C(d + cap, d), saturating
  long double r = 1.0L;
  for (int i = 1; i <= dim; ++i) r = r * (degree_cap + i) / i;
  return r > 1e18L ? static_cast<std::size_t>(-1) : static_cast<std::size_t>(r + 0.5L);
}

namespace {

void enumerate(int k, int remaining, std::vector<int>& cur, std::vector<MultiIndex>& out) {
  if (k == static_cast<int>(cur.size())) {
    out.emplace_back(cur);
    return;
  }
  for (int e = 0; e <= remaining; ++e) {
    cur[k] = e;
    enumerate(k + 1, remaining - e, cur, out);
  }
  cur[k] = 0;
}

}  // namespace

HermiteBasis::HermiteBasis(int dim, int degree_cap, std::size_t max_size) : dim_(dim), cap_(degree_cap) {
  if (dim < 1 || degree_cap < 0) throw std::invalid_argument("HermiteBasis: bad dimension or cap");
  if (basis_size(dim, degree_cap) > max_size)
    throw std::length_error("HermiteBasis: basis overflow (" + std::to_string(basis_size(dim, degree_cap)) +
                            " > " + std::to_string(max_size) + ")");
  std::vector<int> cur(dim, 0);
  enumerate(0, degree_cap, cur, elems_);
  std::sort(elems_.begin(), elems_.end());
  for (std::size_t i = 0; i < elems_.size(); ++i) index_.emplace(elems_[i], i);
}

std::optional<std::size_t> HermiteBasis::index_of(const MultiIndex& g) const {
  auto it = index_.find(g);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace oulab
