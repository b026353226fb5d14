#include "oulab/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace oulab {

ChaosVector::ChaosVector(int dim, int degree_cap) : dim_(dim), cap_(degree_cap) {
  if (dim < 1 || degree_cap < 0) throw std::invalid_argument("ChaosVector: bad dimension or cap");
}

ChaosVector ChaosVector::basis_element(int dim, int degree_cap, const MultiIndex& gamma, double c) {
  ChaosVector v(dim, degree_cap);
  v.set(gamma, c);
  return v;
}

ChaosVector ChaosVector::from_dense(const HermiteBasis& basis, const Vec& coeffs) {
  if (static_cast<std::size_t>(coeffs.size()) != basis.size())
    throw std::invalid_argument("ChaosVector::from_dense: size mismatch");
  ChaosVector v(basis.dim(), basis.degree_cap());
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (coeffs(i) != 0.0) v.coeffs_[basis[i]] = coeffs(i);
  return v;
}

void ChaosVector::check_index(const MultiIndex& gamma) const {
  if (gamma.dim() != dim_) throw std::invalid_argument("ChaosVector: multi-index dimension mismatch");
  if (gamma.degree() > cap_) throw std::invalid_argument("ChaosVector: degree exceeds cap");
}

void ChaosVector::set(const MultiIndex& gamma, double value) {
  check_index(gamma);
  if (value == 0.0)
    coeffs_.erase(gamma);
  else
    coeffs_[gamma] = value;
}

double ChaosVector::get(const MultiIndex& gamma) const {
  check_index(gamma);
  auto it = coeffs_.find(gamma);
  return it == coeffs_.end() ? 0.0 : it->second;
}

int ChaosVector::max_degree() const {
  int m = 0;
  for (const auto& [g, c] : coeffs_) {
    for (int k = 0; k < dim_; ++k) m = std::max(m, g[k]);
  }
  return m;
}

Vec ChaosVector::to_dense(const HermiteBasis& basis) const {
  if (basis.dim() != dim_) throw std::invalid_argument("ChaosVector::to_dense: dimension mismatch");
  Vec out = Vec::Zero(static_cast<Eigen::Index>(basis.size()));
  for (const auto& [g, c] : coeffs_) {
    auto i = basis.index_of(g);
    if (!i) throw std::invalid_argument("ChaosVector::to_dense: coefficient outside basis");
    out(*i) = c;
  }
  return out;
}

double ChaosVector::l2_norm_sq() const {
  double s = 0.0;
  for (const auto& [g, c] : coeffs_) s += c * c;
  return s;
}

namespace {

// d^o/dx^o H_n(x / sqrt(lambda)) from a table of H_j(x / sqrt(lambda)).
double dhermite(const std::vector<double>& t, int n, int o, double lambda) {
  if (n < o) return 0.0;
  double f = 1.0;
  for (int j = 0; j < o; ++j) f *= std::sqrt(double(n - j));
  return f * t[n - o] / std::pow(lambda, 0.5 * o);
}

std::vector<std::vector<double>> tables_at(const Vec& x, const SpectralModel& model, int top) {
  std::vector<std::vector<double>> t;
  t.reserve(model.dim());
  for (int k = 0; k < model.dim(); ++k) t.push_back(hermite_table<double>(top, x(k) / std::sqrt(model.lambda(k))));
  return t;
}

}  // namespace

Vec ChaosVector::gradient(const Vec& x, const SpectralModel& model) const {
  if (x.size() != dim_ || model.dim() != dim_) throw std::invalid_argument("ChaosVector::gradient: dimension mismatch");
  const auto t = tables_at(x, model, max_degree());
  Vec g = Vec::Zero(dim_);
  for (const auto& [gamma, c] : coeffs_) {
    for (int k = 0; k < dim_; ++k) {
      if (gamma[k] == 0) continue;
      double term = c;
      for (int j = 0; j < dim_; ++j) term *= dhermite(t[j], gamma[j], j == k ? 1 : 0, model.lambda(j));
      g(k) += term;
    }
  }
  return g;
}

Mat ChaosVector::hessian(const Vec& x, const SpectralModel& model) const {
  if (x.size() != dim_ || model.dim() != dim_) throw std::invalid_argument("ChaosVector::hessian: dimension mismatch");
  const auto t = tables_at(x, model, max_degree());
  Mat h = Mat::Zero(dim_, dim_);
  std::vector<int> ord(dim_, 0);
  for (const auto& [gamma, c] : coeffs_) {
    for (int a = 0; a < dim_; ++a) {
      for (int b = a; b < dim_; ++b) {
        std::fill(ord.begin(), ord.end(), 0);
        ++ord[a];
        ++ord[b];
        if (gamma[a] < ord[a] || gamma[b] < ord[b]) continue;
        double term = c;
        for (int j = 0; j < dim_; ++j) term *= dhermite(t[j], gamma[j], ord[j], model.lambda(j));
        h(a, b) += term;
        if (a != b) h(b, a) += term;
      }
    }
  }
  return h;
}

ChaosVector operator+(const ChaosVector& a, const ChaosVector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("ChaosVector: dimension mismatch");
  ChaosVector out(a.dim(), std::max(a.degree_cap(), b.degree_cap()));
  for (const auto& [g, c] : a.coeffs()) out.set(g, c);
  for (const auto& [g, c] : b.coeffs()) out.set(g, out.get(g) + c);
  return out;
}

ChaosVector operator*(double s, const ChaosVector& a) {
  ChaosVector out(a.dim(), a.degree_cap());
  for (const auto& [g, c] : a.coeffs()) out.set(g, s * c);
  return out;
}

void write_csv(std::ostream& os, const ChaosVector& phi) {
  for (int k = 0; k < phi.dim(); ++k) os << 'g' << (k + 1) << ',';
  os << "coefficient\n";
  os << std::setprecision(17);
  for (const auto& [g, c] : phi.coeffs()) {
    for (int k = 0; k < phi.dim(); ++k) os << g[k] << ',';
    os << c << '\n';
  }
}

ChaosVector read_csv(std::istream& is, int degree_cap) {
  std::string line;
  while (std::getline(is, line) && (line.empty() || line[0] == '#')) {
  }
  const int dim = static_cast<int>(std::count(line.begin(), line.end(), ','));
  if (dim < 1 || line.find("coefficient") == std::string::npos)
    throw std::invalid_argument("read_csv: missing header");
  ChaosVector out(dim, degree_cap);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<int> e;
    for (int k = 0; k < dim; ++k) {
      if (!std::getline(ss, cell, ',')) throw std::invalid_argument("read_csv: short row");
      e.push_back(std::stoi(cell));
    }
    if (!std::getline(ss, cell)) throw std::invalid_argument("read_csv: missing coefficient");
    out.set(MultiIndex(e), std::stod(cell));
  }
  return out;
}

SmoothField as_field(const ChaosVector& phi, const SpectralModel& model) {
  return {[phi, model](const Vec& x) { return phi(x, model); },
          [phi, model](const Vec& x) { return phi.gradient(x, model); }};
}

}  // namespace oulab
