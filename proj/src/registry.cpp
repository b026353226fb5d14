#include "oulab/registry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oulab {

namespace {

constexpr double kExpCap = 10.0;

const std::vector<TestFunctionInfo>& table() {
  static const std::vector<TestFunctionInfo> t = {
      {"H0", "phi", "constant 1", true, true},
      {"x1", "phi", "H_{e_1} = x_1 / sqrt(lambda_1)", false, false},
      {"x2", "phi", "H_{e_2} = x_2 / sqrt(lambda_2)", false, false},
      {"h2_1", "phi", "H_{2e_1} = (x_1^2/lambda_1 - 1)/sqrt(2)", false, false},
      {"exp_cap", "phi", "min(exp(x_1), 10)", true, true},
      {"gauss_bump", "phi", "exp(-|x|^2 / 2)", true, true},
      {"ind_x1_neg", "phi", "1{x_1 <= 0}", true, true},
      {"ind_K", "phi", "1_K for the configured domain", true, true},
      {"sin_g", "phi", "sin(g(x)), g the level function of the domain", false, true},
      {"rho_h1sq", "rho", "H_{e_1}^2 = x_1^2 / lambda_1", true, false},
  };
  return t;
}

void need_dim(const std::string& name, const SpectralModel& model, int k) {
  if (model.dim() <= k) throw std::invalid_argument("test function " + name + ": needs dimension > " + std::to_string(k));
}

}  // namespace

std::vector<TestFunctionInfo> list_testfunctions() { return table(); }

bool has_testfunction(const std::string& name) {
  const auto& t = table();
  return std::any_of(t.begin(), t.end(), [&](const TestFunctionInfo& i) { return i.name == name; });
}

const TestFunctionInfo& testfunction_info(const std::string& name) {
  for (const auto& i : table())
    if (i.name == name) return i;
  throw std::invalid_argument("unknown test function: " + name);
}

SmoothField make_testfunction(const std::string& name, const SpectralModel& model, const DomainSpec& domain) {
  const int d = model.dim();
  if (domain.dim() != d) throw std::invalid_argument("make_testfunction: domain and model dimensions differ");
  auto zero = [d](const Vec&) { return Vec(Vec::Zero(d)); };

  if (name == "H0") return {[](const Vec&) { return 1.0; }, zero};
  if (name == "x1" || name == "x2") {
    const int k = name == "x1" ? 0 : 1;
    need_dim(name, model, k);
    const double s = 1.0 / std::sqrt(model.lambda(k));
    return {[k, s](const Vec& x) { return s * x(k); },
            [k, s, d](const Vec&) {
              Vec g = Vec::Zero(d);
              g(k) = s;
              return g;
            }};
  }
  if (name == "h2_1") {
    const double l = model.lambda(0);
    return {[l](const Vec& x) { return (x(0) * x(0) / l - 1.0) / std::sqrt(2.0); },
            [l, d](const Vec& x) {
              Vec g = Vec::Zero(d);
              g(0) = std::sqrt(2.0) * x(0) / l;
              return g;
            }};
  }
  if (name == "exp_cap") {
    const double top = std::log(kExpCap);
    return {[top](const Vec& x) { return std::exp(std::min(x(0), top)); },
            [top, d](const Vec& x) {
              Vec g = Vec::Zero(d);
              if (x(0) < top) g(0) = std::exp(x(0));
              return g;
            }};
  }
  if (name == "gauss_bump")
    return {[](const Vec& x) { return std::exp(-0.5 * x.squaredNorm()); },
            [](const Vec& x) { return Vec(-std::exp(-0.5 * x.squaredNorm()) * x); }};
  if (name == "ind_x1_neg") return {[](const Vec& x) { return x(0) <= 0.0 ? 1.0 : 0.0; }, zero};
  if (name == "ind_K") return {[domain](const Vec& x) { return domain.contains(x) ? 1.0 : 0.0; }, zero};
  if (name == "sin_g")
    return {[domain](const Vec& x) { return std::sin(domain(x)); },
            [domain](const Vec& x) { return Vec(std::cos(domain(x)) * domain.gradient(x)); }};
  if (name == "rho_h1sq") {
    const double l = model.lambda(0);
    return {[l](const Vec& x) { return x(0) * x(0) / l; },
            [l, d](const Vec& x) {
              Vec g = Vec::Zero(d);
              g(0) = 2.0 * x(0) / l;
              return g;
            }};
  }
  throw std::invalid_argument("unknown test function: " + name);
}

}  // namespace oulab
