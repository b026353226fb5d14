#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oulab/chaos.hpp"
#include "oulab/hermite.hpp"
#include "oulab/quadrature.hpp"
#include "oulab/sampling.hpp"
#include "oulab/sobolev.hpp"
#include "support/oracles.hpp"

#include <random>
#include <sstream>

using namespace oulab;

TEST_CASE("hermite_1d matches Rodrigues formula") {
  CHECK(hermite_1d(0, 1.7) == 1.0);
  CHECK(hermite_1d(1, 0.5) == doctest::Approx(0.5));
  for (int n = 0; n <= 4; ++n)
    for (double x : {-2.3, -0.4, 0.0, 0.9, 3.1})
      CHECK(hermite_1d(n, x) == doctest::Approx(oracle::rodrigues_hermite(n, x)).epsilon(1e-13));
  CHECK_THROWS_AS(hermite_1d(-1, 0.0), std::invalid_argument);
}

TEST_CASE("gauss_hermite reproduces Gaussian moments") {
  const auto q3 = gauss_hermite(3);
  CHECK(q3.nodes_1d(2) == doctest::Approx(std::sqrt(3.0)));
  CHECK(q3.weights_1d(1) == doctest::Approx(2.0 / 3.0));
  const auto q = gauss_hermite(8);
  CHECK(q.weights_1d.sum() == doctest::Approx(1.0));
  double dfact = 1.0;
  for (int k = 0; k <= 7; ++k) {
    // E xi^{2k} = (2k-1)!!, exact up to degree 15
    double m = 0.0;
    for (int i = 0; i < 8; ++i) m += q.weights_1d(i) * std::pow(q.nodes_1d(i), 2 * k);
    CHECK(m == doctest::Approx(dfact).epsilon(1e-11));
    dfact *= 2 * k + 1;
  }
  const auto gl = gauss_legendre(5);
  double m4 = 0.0;
  for (int i = 0; i < 5; ++i) m4 += gl.weights_1d(i) * std::pow(gl.nodes_1d(i), 4);
  CHECK(m4 == doctest::Approx(2.0 / 5.0));
}

TEST_CASE("one-dimensional orthonormality") {
  const auto q = gauss_hermite(6);
  double s = 0.0;
  for (int i = 0; i < 6; ++i) s += q.weights_1d(i) * std::pow(hermite_1d(2, q.nodes_1d(i)), 2);
  CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("multi-index ordering and basis") {
  const HermiteBasis b(2, 3);
  CHECK(b.size() == 10);
  CHECK(b[0] == MultiIndex::zero(2));
  CHECK(b[1] == MultiIndex::unit(2, 0));
  CHECK(b[2] == MultiIndex::unit(2, 1));
  CHECK(b[3] == MultiIndex({2, 0}));
  CHECK(b.index_of(MultiIndex({1, 2})).value() == 8);
  CHECK_FALSE(b.index_of(MultiIndex({4, 0})).has_value());
  CHECK_THROWS_AS(HermiteBasis(10, 10, 1000), std::length_error);
  CHECK_THROWS_AS(MultiIndex({1, -1}), std::invalid_argument);
  CHECK(basis_size(4, 8) == 495);
}

TEST_CASE("hermite_tensor") {
  const SpectralModel m(Vec::Constant(1, 4.0), 1.0);
  Vec x(1);
  x << 2.0;
  CHECK(hermite_tensor(MultiIndex::unit(1, 0), x, m) == doctest::Approx(1.0));
  CHECK(hermite_tensor(MultiIndex::zero(1), x, m) == 1.0);
  CHECK_THROWS_AS(hermite_tensor(MultiIndex::zero(2), x, m), std::invalid_argument);
}

TEST_CASE("tensor orthonormality in d = 2 up to degree 3") {
  Vec l(2);
  l << 1.0, 0.25;
  const SpectralModel m(l, 0.5);
  const HermiteBasis b(2, 3);
  const auto rule = tensor_rule(gauss_hermite(5), m);
  for (const auto& g : b)
    for (const auto& h : b) {
      double s = 0.0;
      for (Eigen::Index j = 0; j < rule.points.cols(); ++j)
        s += rule.weights(j) * hermite_tensor<double>(g, rule.points.col(j), m) *
             hermite_tensor<double>(h, rule.points.col(j), m);
      CHECK(s == doctest::Approx(g == h ? 1.0 : 0.0).epsilon(1e-12));
    }
}

TEST_CASE("Parseval against quadrature") {
  Vec l(2);
  l << 2.0, 0.5;
  const SpectralModel m(l, 1.0);
  const HermiteBasis b(2, 4);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n01;
  Vec c(b.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = n01(rng);
  const auto phi = ChaosVector::from_dense(b, c);
  const auto rule = tensor_rule(gauss_hermite(6), m);
  const double q = integrate(rule, [&](const Vec& x) { return std::pow(phi(x, m), 2); });
  CHECK(q == doctest::Approx(phi.l2_norm_sq()).epsilon(1e-12));
}

TEST_CASE("chaos derivatives agree with finite differences") {
  Vec l(3);
  l << 1.5, 0.7, 0.2;
  const SpectralModel m(l, 0.3);
  const HermiteBasis b(3, 4);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n01;
  Vec c(b.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = n01(rng);
  const auto phi = ChaosVector::from_dense(b, c);
  Vec x(3);
  x << 0.3, -0.8, 0.15;
  auto f = [&](const Vec& y) { return phi(y, m); };
  CHECK((phi.gradient(x, m) - oracle::fd_gradient(f, x)).norm() < 1e-6);
  CHECK((phi.hessian(x, m) - oracle::fd_hessian(f, x)).norm() < 1e-4);
}

TEST_CASE("chaos CSV round trip") {
  ChaosVector v(2, 4);
  v.set(MultiIndex({1, 2}), -0.25);
  v.set(MultiIndex({0, 0}), 1.0 / 3.0);
  std::stringstream ss;
  write_csv(ss, v);
  CHECK(ss.str().rfind("g1,g2,coefficient\n", 0) == 0);
  const auto w = read_csv(ss, 4);
  CHECK(w.get(MultiIndex({1, 2})) == -0.25);
  CHECK(w.get(MultiIndex({0, 0})) == 1.0 / 3.0);
  CHECK_THROWS_AS(v.set(MultiIndex({5, 0}), 1.0), std::invalid_argument);
}

TEST_CASE("sample_mu moments and determinism") {
  Vec l(2);
  l << 2.0, 0.5;
  const SpectralModel m(l, 1.0);
  const std::size_t n = 200000;
  const Mat s = sample_mu(m, n, 42);
  const Mat s2 = sample_mu(m, n, 42, 4);
  CHECK((s - s2).cwiseAbs().maxCoeff() == 0.0);
  for (int k = 0; k < 2; ++k) {
    const double mean = s.row(k).mean();
    CHECK(std::abs(mean) < 4.0 * std::sqrt(l(k) / n));
    const double var = s.row(k).array().square().mean();
    // Var of x^2 is 2 lambda^2
    CHECK(std::abs(var - l(k)) < 4.0 * std::sqrt(2.0 / n) * l(k));
  }
  const double cov = (s.row(0).array() * s.row(1).array()).mean();
  CHECK(std::abs(cov) < 4.0 * std::sqrt(l(0) * l(1) / n));
}

TEST_CASE("Sobolev functionals") {
  const SpectralModel m1(Vec::Constant(1, 3.0), 1.0);
  const auto h0 = ChaosVector::basis_element(1, 4, MultiIndex::zero(1));
  const auto h1 = ChaosVector::basis_element(1, 4, MultiIndex::unit(1, 0));
  CHECK(sobolev_norm(h0, 1, m1) == 1.0);
  CHECK(gradient_energy(h1, m1) == doctest::Approx(1.0 / 3.0));
  CHECK(gradient_energy(h1, m1.with_alpha(0.0)) == doctest::Approx(1.0));

  // quadrature oracle: int |Q^{(1-a)/2} D phi|^2 and second order sums
  Vec l(2);
  l << 0.9, 0.3;
  const SpectralModel m(l, 0.6);
  const HermiteBasis b(2, 4);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n01;
  Vec c(b.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = n01(rng);
  const auto phi = ChaosVector::from_dense(b, c);
  const auto rule = tensor_rule(gauss_hermite(6), m);
  const Vec w1 = l.array().pow(1.0 - m.alpha());
  const double g1 = integrate(rule, [&](const Vec& x) {
    const Vec g = phi.gradient(x, m);
    return (w1.array() * g.array().square()).sum();
  });
  const double g2 = integrate(rule, [&](const Vec& x) {
    const Mat H = phi.hessian(x, m);
    return (w1 * w1.transpose()).cwiseProduct(H.cwiseAbs2()).sum();
  });
  CHECK(gradient_energy(phi, m) == doctest::Approx(g1).epsilon(1e-12));
  CHECK(second_order_energy(phi, m) == doctest::Approx(g2).epsilon(1e-12));
  CHECK(sobolev_norm(phi, 2, m) ==
        doctest::Approx(phi.l2_norm_sq() + g1 + g2).epsilon(1e-12));
  CHECK_THROWS_AS(sobolev_norm(phi, 3, m), std::invalid_argument);
}

TEST_CASE("gradient seminorm is monotone in alpha when lambda <= 1") {
  Vec l(3);
  l << 1.0, 0.5, 0.1;
  const HermiteBasis b(3, 3);
  Vec c = Vec::LinSpaced(b.size(), -1.0, 1.0);
  const auto phi = ChaosVector::from_dense(b, c);
  double prev = 0.0;
  for (double a : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double e = gradient_energy(phi, SpectralModel(l, a));
    CHECK(e >= prev);  // lambda^{-a} grows with a
    prev = e;
  }
}

TEST_CASE("Gaussian integration by parts") {
  Vec l(2);
  l << 1.3, 0.4;
  const SpectralModel m(l, 1.0);
  const auto h0 = ChaosVector::basis_element(2, 3, MultiIndex::zero(2));
  CHECK(gauss_ibp_check(h0, h0, 0, m) < 1e-14);
  const auto e1 = ChaosVector::basis_element(2, 3, MultiIndex::unit(2, 1));
  CHECK(gauss_ibp_check(e1, h0, 1, m) < 1e-13);
  // LHS is int D_k H_{e_k} dmu = 1/sqrt(lambda_k)
  const auto rule = tensor_rule(gauss_hermite(4), m);
  CHECK(integrate(rule, [&](const Vec& x) { return e1.gradient(x, m)(1); }) ==
        doctest::Approx(1.0 / std::sqrt(0.4)));
  const HermiteBasis b(2, 3);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n01;
  for (int rep = 0; rep < 5; ++rep) {
    Vec c1(b.size()), c2(b.size());
    for (Eigen::Index i = 0; i < c1.size(); ++i) {
      c1(i) = n01(rng);
      c2(i) = n01(rng);
    }
    const auto p = ChaosVector::from_dense(b, c1), q = ChaosVector::from_dense(b, c2);
    CHECK(gauss_ibp_check(p, q, 0, m) < 1e-10);
    CHECK(gauss_ibp_check(p, q, 1, m) < 1e-10);
  }
}

TEST_CASE("spectral model validation") {
  CHECK_THROWS_AS(SpectralModel(Vec::Constant(2, 1.0), 1.5), std::invalid_argument);
  Vec bad(2);
  bad << 0.5, 1.0;
  CHECK_THROWS_AS(SpectralModel(bad, 0.5), std::invalid_argument);
  const auto m = SpectralModel::power_law(3, 1.0, 2.0, 0.5);
  CHECK(m.lambda(2) == doctest::Approx(1.0 / 9.0));
  CHECK(m.trace() == doctest::Approx(1.0 + 0.25 + 1.0 / 9.0));
  CHECK(m.trace_q_one_minus_alpha() == doctest::Approx(1.0 + 0.5 + 1.0 / 3.0));
}
