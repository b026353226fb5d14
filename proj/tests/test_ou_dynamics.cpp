#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oulab/ou_process.hpp"
#include "oulab/quadrature.hpp"
#include "oulab/sampling.hpp"
#include "support/oracles.hpp"

#include <sstream>

using namespace oulab;

namespace {

// Mehler integral T(t)phi(x) = E phi(e^{-t a/2} x + sigma xi) by Gauss-Hermite, 1-D.
double mehler_integral(const ChaosVector& phi, double t, double x, const SpectralModel& m) {
  const auto q = gauss_hermite(20);
  const double a = m.rate(0);
  const double mean = std::exp(-0.5 * t * a) * x;
  const double sd = std::sqrt(m.lambda(0) * (1.0 - std::exp(-t * a)));
  double s = 0.0;
  for (int i = 0; i < q.order; ++i) s += q.weights_1d(i) * phi(Vec::Constant(1, mean + sd * q.nodes_1d(i)), m);
  return s;
}

// Project x -> T(t)phi(x) back onto H_n with quadrature against mu.
double reproject(const ChaosVector& phi, double t, int n, const SpectralModel& m) {
  const auto q = gauss_hermite(20);
  double s = 0.0;
  for (int i = 0; i < q.order; ++i) {
    const double x = std::sqrt(m.lambda(0)) * q.nodes_1d(i);
    s += q.weights_1d(i) * mehler_integral(phi, t, x, m) * hermite_1d(n, q.nodes_1d(i));
  }
  return s;
}

}  // namespace

TEST_CASE("transition law parameters") {
  const SpectralModel m(Vec::Constant(1, 1.0), 1.0);
  const TransitionKernel k(m, std::log(2.0));
  CHECK(k.mean_factor()(0) == doctest::Approx(std::sqrt(0.5)));
  CHECK(k.variance()(0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(TransitionKernel(m, 0.0), std::invalid_argument);
  const TransitionKernel big(m, 200.0);
  CHECK(big.mean_factor()(0) < 1e-40);
  CHECK(big.variance()(0) == doctest::Approx(1.0));
}

TEST_CASE("mu is invariant and steps compose exactly in law") {
  Vec l(2);
  l << 1.0, 0.3;
  const SpectralModel m(l, 0.5);
  const std::size_t n = 100000;
  const Mat x0 = sample_mu(m, n, 9);
  Mat one(2, n), two(2, n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng r = substream(10, i);
    one.col(i) = transition_sample(x0.col(i), 0.7, m, r);
    Rng r2 = substream(11, i);
    two.col(i) = transition_sample(transition_sample(x0.col(i), 0.3, m, r2), 0.4, m, r2);
  }
  for (int k = 0; k < 2; ++k) {
    // moments of N(0, lambda): 0, lambda, 0, 3 lambda^2
    const double lk = l(k);
    const double sd2 = std::sqrt(2.0 / n) * lk, sd4 = std::sqrt(96.0 / n) * lk * lk;
    for (const Mat* s : {&one, &two}) {
      const auto r = s->row(k).array();
      CHECK(std::abs(r.mean()) < 4.0 * std::sqrt(lk / n));
      CHECK(std::abs(r.square().mean() - lk) < 4.0 * sd2);
      CHECK(std::abs(r.cube().mean()) < 4.0 * std::sqrt(15.0 / n) * std::pow(lk, 1.5));
      CHECK(std::abs(r.square().square().mean() - 3 * lk * lk) < 4.0 * sd4);
    }
  }
}

TEST_CASE("composition from a fixed point matches one step") {
  const SpectralModel m(Vec::Constant(1, 2.0), 1.0);
  const std::size_t n = 200000;
  const Vec x = Vec::Constant(1, 1.5);
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng r = substream(1, i), r2 = substream(2, i);
    a[i] = transition_sample(x, 1.0, m, r)(0);
    b[i] = transition_sample(transition_sample(x, 0.25, m, r2), 0.75, m, r2)(0);
  }
  const TransitionKernel k(m, 1.0);
  const double mu = k.mean_factor()(0) * 1.5, var = k.variance()(0);
  for (const auto* v : {&a, &b}) {
    double m1 = 0, m2 = 0, m4 = 0;
    for (double y : *v) {
      const double c = y - mu;
      m1 += c;
      m2 += c * c;
      m4 += c * c * c * c;
    }
    m1 /= n;
    m2 /= n;
    m4 /= n;
    CHECK(std::abs(m1) < 4 * std::sqrt(var / n));
    CHECK(std::abs(m2 - var) < 4 * std::sqrt(2.0 / n) * var);
    CHECK(std::abs(m4 - 3 * var * var) < 4 * std::sqrt(96.0 / n) * var * var);
  }
}

TEST_CASE("simulate_path hitting") {
  const SpectralModel m(Vec::Constant(1, 1.0), 1.0);
  Rng rng = substream(3, 0);
  const auto whole = DomainSpec::whole_space(1);
  const auto p = simulate_path(Vec::Constant(1, 0.0), 1.0, 0.01, whole, m, rng);
  CHECK_FALSE(p.hit_index.has_value());
  CHECK(p.states.cols() == 101);
  CHECK(p.times(100) == doctest::Approx(1.0));
  const auto half = DomainSpec::half_space(Vec::Constant(1, 1.0));
  const auto q = simulate_path(Vec::Constant(1, 1.5), 0.1, 0.01, half, m, rng);
  CHECK(q.hit_index.value() == 0);
  // uneven final step
  const auto r = simulate_path(Vec::Constant(1, 0.0), 0.105, 0.01, whole, m, rng);
  CHECK(r.times.size() == 12);
  CHECK(r.times(11) == doctest::Approx(0.105));

  // far inside and short horizon: hit frequency decays with distance
  std::size_t near = 0, far = 0;
  for (std::size_t i = 0; i < 2000; ++i) {
    Rng a = substream(4, i), b = substream(4, i);
    near += simulate_path(Vec::Constant(1, 0.7), 0.05, 0.001, half, m, a).hit_index.has_value();
    far += simulate_path(Vec::Constant(1, -1.0), 0.05, 0.001, half, m, b).hit_index.has_value();
  }
  CHECK(near > 0);
  CHECK(far == 0);
}

TEST_CASE("path CSV") {
  const SpectralModel m(Vec::Constant(2, 1.0), 1.0);
  Rng rng = substream(3, 0);
  const auto dom = DomainSpec::ball_of_modes(2, 2);
  std::vector<PathSample> ps{simulate_path(Vec::Zero(2), 0.02, 0.01, dom, m, rng)};
  std::ostringstream os;
  write_paths_csv(os, ps, dom);
  CHECK(os.str().rfind("path_id,t,x1,x2,in_K\n0,0,0,0,1\n", 0) == 0);
}

TEST_CASE("Mehler scaling agrees with the Mehler integral") {
  const SpectralModel m(Vec::Constant(1, 1.0), 1.0);
  const auto h1 = ChaosVector::basis_element(1, 6, MultiIndex::unit(1, 0));
  CHECK(mehler_apply(h1, 2.0, m).get(MultiIndex::unit(1, 0)) == doctest::Approx(std::exp(-1.0)));
  CHECK(reproject(h1, 2.0, 1, m) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  const SpectralModel m2(Vec::Constant(1, 0.5), 0.7);
  ChaosVector phi(1, 6);
  for (int n = 0; n <= 6; ++n) phi.set(MultiIndex({n}), 1.0 / (n + 1));
  const auto out = mehler_apply(phi, 0.8, m2);
  for (int n = 0; n <= 6; ++n) CHECK(out.get(MultiIndex({n})) == doctest::Approx(reproject(phi, 0.8, n, m2)).epsilon(1e-10));

  const auto id = mehler_apply(phi, 0.0, m2);
  for (int n = 0; n <= 6; ++n) CHECK(id.get(MultiIndex({n})) == phi.get(MultiIndex({n})));
  const auto h0 = ChaosVector::basis_element(1, 6, MultiIndex::zero(1));
  CHECK(mehler_apply(h0, 5.0, m2).get(MultiIndex::zero(1)) == 1.0);
}

TEST_CASE("Mehler semigroup law, contraction and generator") {
  Vec l(2);
  l << 1.0, 0.4;
  const SpectralModel m(l, 0.8);
  const HermiteBasis b(2, 5);
  const auto phi = ChaosVector::from_dense(b, Vec::LinSpaced(b.size(), 1.0, -2.0));
  const auto ab = mehler_apply(mehler_apply(phi, 0.3, m), 0.5, m);
  const auto c = mehler_apply(phi, 0.8, m);
  for (const auto& g : b) CHECK(ab.get(g) == doctest::Approx(c.get(g)).epsilon(1e-14));
  for (double t : {0.0, 0.1, 1.0, 10.0}) CHECK(mehler_apply(phi, t, m).l2_norm_sq() <= phi.l2_norm_sq());

  // (T(h) - I)/h -> L with first-order error; Richardson removes it
  for (const auto& g : b) {
    const double c0 = phi.get(g);
    auto quotient = [&](double h) { return (mehler_apply(phi, h, m).get(g) - c0) / h; };
    const double q1 = quotient(1e-3), q2 = quotient(5e-4);
    const double exact = l_alpha_eigenvalue(g, m) * c0;
    CHECK(std::abs(2 * q2 - q1 - exact) < 1e-5 * (1 + std::abs(exact)));
    CHECK(std::abs(q2 - exact) < std::abs(q1 - exact) * 0.6 + 1e-12);
  }
}

TEST_CASE("generator eigenvalue from the finite-difference oracle") {
  const SpectralModel m(Vec::Constant(1, 1.0), 1.0);
  const auto h2 = ChaosVector::basis_element(1, 4, MultiIndex({2}));
  auto quotient = [&](double h) { return (reproject(h2, h, 2, m) - 1.0) / h; };
  const double q1 = quotient(1e-3), q2 = quotient(5e-4);
  CHECK(2 * q2 - q1 == doctest::Approx(-1.0).epsilon(1e-5));
  CHECK(l_alpha_eigenvalue(MultiIndex({2}), m) == -1.0);
}

TEST_CASE("domain specifications") {
  Vec b(2);
  b << 1.0, 1.0;
  CHECK_THROWS_AS(DomainSpec::half_space(b), std::invalid_argument);
  CHECK_THROWS_AS(DomainSpec::quadratic(Vec::Zero(2)), std::invalid_argument);
  CHECK_THROWS_AS(DomainSpec::ball_of_modes(2, 3), std::invalid_argument);
  const auto ball = DomainSpec::ball_of_modes(3, 2, 0.5);
  Vec x(3);
  x << 1.0, 0.0, 5.0;
  CHECK(ball.contains(x));  // boundary belongs to K
  CHECK(ball.penalty(x) == 0.0);
  x(1) = 0.5;
  CHECK(ball.penalty(x) == doctest::Approx(0.25));
  x(1) = 3.0;
  CHECK(ball.penalty(x) == 0.5);
  CHECK(ball.active_coordinates() == std::vector<int>{0, 1});
  auto g = [&](const Vec& y) { return ball(y); };
  CHECK((ball.gradient(x) - oracle::fd_gradient(g, x)).norm() < 1e-7);
}
