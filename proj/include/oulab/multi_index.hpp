#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace oulab {

class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents);

  static MultiIndex zero(int dim) { return MultiIndex(std::vector<int>(dim, 0)); }
  static MultiIndex unit(int dim, int k, int power = 1);

  int dim() const { return static_cast<int>(exps_.size()); }
  int degree() const { return degree_; }
  int operator[](int k) const { return exps_[k]; }
  std::span<const int> exponents() const { return exps_; }

  std::string to_string() const;

  // graded lexicographic: lower degree first, then e_1 before e_2
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b);
  friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.exps_ == b.exps_; }

 private:
  std::vector<int> exps_;
  int degree_ = 0;
};

// All multi-indices of total degree <= cap, in graded-lex order.
class HermiteBasis {
 public:
  static constexpr std::size_t kDefaultMaxSize = 200000;

  HermiteBasis(int dim, int degree_cap, std::size_t max_size = kDefaultMaxSize);

  int dim() const { return dim_; }
  int degree_cap() const { return cap_; }
  std::size_t size() const { return elems_.size(); }
  const MultiIndex& operator[](std::size_t i) const { return elems_[i]; }
  std::optional<std::size_t> index_of(const MultiIndex& g) const;

  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }

 private:
  int dim_;
  int cap_;
  std::vector<MultiIndex> elems_;
  std::map<MultiIndex, std::size_t> index_;
};

// Number of multi-indices in d variables with degree <= cap.
std::size_t basis_size(int dim, int degree_cap);

}  // namespace oulab
