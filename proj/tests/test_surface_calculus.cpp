#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oulab/surface.hpp"
#include "support/oracles.hpp"

#include <cmath>
#include <numbers>

using namespace oulab;

namespace {

SpectralModel model2() {
  Vec l(2);
  l << 1.0, 0.5;
  return SpectralModel(l, 0.5);
}

LevelFunction half_e1(int d) {
  Vec b = Vec::Zero(d);
  b(0) = 1.0;
  return LevelFunction(DomainSpec::half_space(b));
}

const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

}  // namespace

TEST_CASE("psi on the half-space") {
  const auto m = model2();
  const auto g = half_e1(2);
  Vec x(2);
  x << 0.4, -1.3;
  CHECK(psi_eval(g, x, m) == doctest::Approx(-0.2).epsilon(1e-14));
  CHECK(g.l0(x, m) == doctest::Approx(-0.5 * g.value(x)));
}

TEST_CASE("psi on a quadratic matches the plug-in form") {
  Vec l(3);
  l << 1.0, 0.6, 0.3;
  const SpectralModel m(l, 1.0);
  const LevelFunction g(DomainSpec::quadratic(Vec::Ones(3)));
  Vec x(3);
  x << 0.6, -0.7, 0.2;
  x /= x.norm();
  // Dg = 2x, D^2 g = 2I
  const double trqt = l.sum();
  const double qtx2 = (l.array() * x.array().square()).sum();
  const double q2t3 = (l.array().square() * x.array().square()).sum();
  const double expect = (trqt - x.squaredNorm()) / (4.0 * qtx2) - q2t3 / (2.0 * qtx2 * qtx2);
  CHECK(psi_eval(g, x, m) == doctest::Approx(expect).epsilon(1e-13));
  CHECK(g.l0(x, m) == doctest::Approx(trqt - g.value(x)));
}

TEST_CASE("psi on a ball of modes against finite differences") {
  Vec l(4);
  l << 1.0, 0.5, 0.25, 0.125;
  const SpectralModel m(l, 0.3);
  const LevelFunction g(DomainSpec::ball_of_modes(4, 3));
  auto raw = [](const Eigen::VectorXd& y) { return y(0) * y(0) + y(1) * y(1) + y(2) * y(2); };
  Vec x(4);
  x << 0.3, -0.8, 1.1, 0.7;
  const auto dg = oracle::fd_gradient(raw, x);
  const auto d2g = oracle::fd_hessian(raw, x);
  const Eigen::VectorXd sq = l.array().sqrt();
  const Eigen::VectorXd qdg = sq.cwiseProduct(dg);
  const double l0 = 0.5 * (l.asDiagonal() * d2g).trace() - 0.5 * x.dot(dg);
  const double n2 = qdg.squaredNorm();
  const double expect = l0 / n2 - qdg.dot(sq.asDiagonal() * d2g * sq.asDiagonal() * qdg) / (n2 * n2);
  CHECK(psi_eval(g, x, m) == doctest::Approx(expect).epsilon(1e-7));
  CHECK_THROWS_AS(psi_eval(g, Vec::Zero(4), m), NumericalError);
  CHECK(std::isnan(psi_unchecked(g, Vec::Zero(4), m)));
}

TEST_CASE("symbolic hypotheses per variant") {
  const auto h = half_e1(3).hypotheses();
  CHECK(h.gradient_bounded_on_K);
  CHECK(h.l0_linear_on_K);
  CHECK(h.rem1_conditions);
  CHECK(std::isinf(h.inverse_gradient_p));
  const auto b = LevelFunction(DomainSpec::ball_of_modes(6, 4)).hypotheses();
  CHECK(b.inverse_gradient_p == 4.0);
  CHECK_FALSE(b.rem1_conditions);
  CHECK_FALSE(b.gradient_bounded_on_K);
  const auto q = LevelFunction(DomainSpec::quadratic(Vec::Ones(13))).hypotheses();
  CHECK(q.rem1_conditions);
  CHECK(q.gradient_bounded_on_K);
  CHECK(LevelFunction(DomainSpec::ball_of_modes(3, 2)).range_lower() == 0.0);
  CHECK(std::isinf(half_e1(2).range_lower()));
}

TEST_CASE("pushforward identity, constant profile") {
  const auto m = model2();
  const auto c = pushforward_ibp_check(half_e1(2), Profile::constant(2.0), 1, m, {1000, 0, 3, 1});
  CHECK(c.lhs.value == 0.0);
  // E psi = 0
  CHECK(std::abs(c.rhs.value) < 3 * c.rhs.std_error);
}

TEST_CASE("pushforward identity on the half-space with a quadrature oracle") {
  Vec l(2);
  l << 0.8, 0.5;
  const SpectralModel m(l, 1.0);
  Vec b(2);
  b << 0.6, 0.8;
  const LevelFunction g(DomainSpec::half_space(b));
  const double var = (l.array() * b.array().square()).sum();
  const auto phi = Profile::sine();
  const McParams mc{50000, 0, 11, 2};
  const auto c1 = pushforward_ibp_check(g, phi, 1, m, mc);
  CHECK(c1.pass());
  // E cos(g) for g ~ N(0, var)
  const double e_cos = oracle::simpson([&](double s) { return std::cos(s) * oracle::normal_pdf(s, var); }, -12, 12);
  CHECK(std::abs(c1.lhs.value - e_cos) < 3 * c1.lhs.std_error);
  CHECK(std::abs(c1.rhs.value - e_cos) < 3 * c1.rhs.std_error);
  const auto c2 = pushforward_ibp_check(g, phi, 2, m, mc);
  CHECK(c2.pass());
  CHECK_THROWS_AS(pushforward_ibp_check(g, phi, 3, m, mc), std::invalid_argument);
}

TEST_CASE("weighted pushforward identities on the three variants") {
  Vec l(6);
  l << 1.0, 0.8, 0.6, 0.5, 0.4, 0.3;
  const SpectralModel m(l, 0.5);
  Vec b = Vec::Zero(6);
  b(0) = 1.0;
  Vec t(6);
  t << 1.0, 0.5, 2.0, 1.0, 1.5, 0.7;
  const std::vector<LevelFunction> gs{LevelFunction(DomainSpec::half_space(b)),
                                      LevelFunction(DomainSpec::quadratic(t)),
                                      LevelFunction(DomainSpec::ball_of_modes(6, 6))};
  const auto w = SurfaceWeight::hermite_square(0, m);
  const McParams mc{40000, 0, 17, 2};
  for (const auto& g : gs) {
    for (int order : {1, 2}) {
      const auto c = pushforward_ibp_check(g, Profile::sine(), order, m, mc, w);
      INFO(to_string(g.kind()), " order ", order, " z ", c.z);
      CHECK(c.pass());
      CHECK(c.rejected == 0);
    }
  }
}

TEST_CASE("rho_1 of the unit weight is 2 psi") {
  const auto m = model2();
  const LevelFunction g(DomainSpec::quadratic(Vec::Constant(2, 0.5)));
  Vec x(2);
  x << 0.2, 0.9;
  CHECK(SurfaceWeight::unit(2).rho_1(g, x, m) == doctest::Approx(2.0 * psi_eval(g, x, m)));
}

TEST_CASE("density of the half-space level") {
  const auto m = model2();
  std::vector<double> grid;
  for (int i = -60; i <= 60; ++i) grid.push_back(0.1 * i);
  const auto k = density_estimate(half_e1(2), m, {100000, 0, 5, 2}, {-3.0, 0.0, 1.0, 3.0});
  CHECK(k.bandwidth > 0.0);
  // k(0) = (2 pi)^{-1/2}; kernel bias ~ h^2 k / 2
  const double bias = 0.5 * k.bandwidth * k.bandwidth * inv_sqrt_2pi;
  CHECK(std::abs(k.k_values[1] - inv_sqrt_2pi) < 3 * k.k_std_error[1] + bias);
  CHECK(k.k_prime[2] == doctest::Approx(-oracle::normal_pdf(1.0)).epsilon(0.05));
  const auto full = density_estimate(half_e1(2), m, {100000, 0, 5, 2}, grid, std::nullopt, {0.0, 8, 0, true});
  CHECK(std::abs(full.mass - 1.0) < 0.01);
  CHECK_THROWS_AS(density_estimate(half_e1(2), m, {100000, 0, 5, 2}, {0.0, 9.0}), NumericalError);
  CHECK_THROWS_AS(density_estimate(half_e1(2), m, {1000, 0, 5, 2}, {1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("density of a chi-square level") {
  const SpectralModel m(Vec::Ones(2), 1.0);
  const LevelFunction g(DomainSpec::quadratic(Vec::Ones(2)));
  std::vector<double> grid;
  for (int i = 0; i <= 400; ++i) grid.push_back(0.05 * i);
  const auto k = density_estimate(g, m, {200000, 0, 9, 2}, {1.0, 2.0, 3.0, 4.0});
  for (std::size_t i = 0; i < 4; ++i) {
    const double r = 1.0 + i;
    CHECK(k.k_values[i] == doctest::Approx(0.5 * std::exp(-r / 2)).epsilon(0.03));
    CHECK(k.k_prime[i] == doctest::Approx(-0.25 * std::exp(-r / 2)).epsilon(0.1));
  }
  const auto full = density_estimate(g, m, {200000, 0, 9, 2}, grid, std::nullopt, {0.0, 8, 0, true});
  CHECK(std::abs(full.mass - 1.0) < 0.01);
}

TEST_CASE("surface integral closed forms on the half-space") {
  const auto m = model2();
  const auto g = half_e1(2);
  const McParams mc{400000, 0, 21, 2};
  const auto one = surface_integral([](const Vec&) { return 1.0; }, g, 0.0, m, mc);
  CHECK(one.routes_agree());
  CHECK(std::abs(one.thin_shell.value - inv_sqrt_2pi) < 3 * (one.thin_shell.std_error + one.extrapolation_error));
  CHECK(one.density_route == doctest::Approx(inv_sqrt_2pi).epsilon(0.01));
  CHECK(one.counts[2] >= 1000);
  CHECK(one.widths[1] == doctest::Approx(one.widths[0] / 2));

  const auto zero = surface_integral([](const Vec&) { return 0.0; }, g, 0.0, m, mc);
  CHECK(zero.thin_shell.value == 0.0);
  CHECK(zero.density_route == 0.0);

  const auto x2 = surface_integral([](const Vec& x) { return x(1) * x(1); }, g, 0.0, m, mc);
  CHECK(x2.routes_agree());
  CHECK(x2.density_route == doctest::Approx(0.5 * inv_sqrt_2pi).epsilon(0.02));

  CHECK_THROWS_AS(surface_integral([](const Vec&) { return 1.0; }, g, 0.0, m, {500, 0, 1, 1}), NumericalError);
  ShellOptions narrow;
  narrow.width = 1e-4;
  CHECK_THROWS_AS(surface_integral([](const Vec&) { return 1.0; }, g, 0.0, m, {20000, 0, 1, 1}, narrow),
                  NumericalError);
}

TEST_CASE("boundary integration by parts") {
  const auto m = model2();
  const auto g = half_e1(2);
  const McParams mc{200000, 0, 8, 2};
  const SmoothField zero{[](const Vec&) { return 0.0; }, [](const Vec&) { return Vec(Vec::Zero(2)); }};
  const auto z = boundary_ibp_check(zero, 0, g, m, mc);
  CHECK(z.lhs.value == 0.0);
  CHECK(z.residual == 0.0);

  // k = 2: D_2 g = 0 and the identity is the Gaussian one restricted to K
  const SmoothField x2{[](const Vec& x) { return x(1); }, [](const Vec&) { return Vec(Vec::Unit(2, 1)); }};
  const auto c2 = boundary_ibp_check(x2, 1, g, m, mc);
  CHECK(c2.surface.thin_shell.value == 0.0);
  CHECK(std::abs(c2.lhs.value - oracle::normal_cdf(1.0)) < 3 * c2.lhs.std_error);
  CHECK(c2.pass());

  // k = 1, phi = 1: the surface term is k(1) = normal density at 1
  const SmoothField one{[](const Vec&) { return 1.0; }, [](const Vec&) { return Vec(Vec::Zero(2)); }};
  const auto c1 = boundary_ibp_check(one, 0, g, m, mc);
  CHECK(c1.lhs.value == 0.0);
  CHECK(c1.volume.value < 0.0);
  CHECK(c1.surface.thin_shell.value == doctest::Approx(oracle::normal_pdf(1.0)).epsilon(0.03));
  CHECK(c1.pass());
}

TEST_CASE("boundary energy routes agree") {
  const auto m = model2();
  const McParams mc{200000, 0, 12, 2};
  const SmoothField zero{[](const Vec&) { return 0.0; }, [](const Vec&) { return Vec(Vec::Zero(2)); }};
  const auto e0 = boundary_energy_check(zero, half_e1(2), m, mc);
  CHECK(e0.surface.thin_shell.value == 0.0);
  CHECK(e0.via_K.value == 0.0);
  CHECK(e0.via_Kc.value == 0.0);

  const SmoothField one{[](const Vec&) { return 1.0; }, [](const Vec&) { return Vec(Vec::Zero(2)); }};
  const auto e1 = boundary_energy_check(one, half_e1(2), m, mc);
  // -2 int_K L_0 g dmu = -E[x_1 1{x_1 <= 1}] = normal density at 1
  CHECK(e1.via_K.value == doctest::Approx(oracle::normal_pdf(1.0)).epsilon(0.03));
  CHECK(e1.pass());
  CHECK(std::abs(e1.whole_space.value) < 3 * e1.whole_space.std_error);

  const SmoothField wave{[](const Vec& x) { return 1.0 + 0.5 * std::sin(x(0) - x(1)); },
                         [](const Vec& x) {
                           Vec d(2);
                           const double c = 0.5 * std::cos(x(0) - x(1));
                           d << c, -c;
                           return d;
                         }};
  const auto e2 = boundary_energy_check(wave, LevelFunction(DomainSpec::quadratic(Vec::Ones(2))), m, mc);
  INFO("zK ", e2.z_K, " zKc ", e2.z_Kc);
  CHECK(e2.pass());
  CHECK(std::abs(e2.whole_space.value) < 3 * e2.whole_space.std_error);
}

TEST_CASE("trace estimates") {
  const auto m = model2();
  const auto g = half_e1(2);
  const McParams mc{200000, 0, 4, 2};
  CHECK(trace_estimate([](const Vec&) { return 0.0; }, g, m, mc).thin_shell.value == 0.0);
  const auto one = trace_estimate([](const Vec&) { return 1.0; }, g, m, mc);
  CHECK(one.thin_shell.value == doctest::Approx(oracle::normal_pdf(1.0)).epsilon(0.03));
  CHECK(one.density_route == 0.0);

  // closer functions in W^{1,2} have closer traces
  auto trace_of = [&](double delta) {
    return trace_estimate([delta](const Vec& x) { return 1.0 + delta * std::cos(x(0)); }, g, m, mc).thin_shell.value;
  };
  const double base = one.thin_shell.value;
  CHECK(std::abs(trace_of(0.01) - base) < std::abs(trace_of(0.1) - base));
  CHECK(std::abs(trace_of(0.1) - base) < std::abs(trace_of(0.5) - base));
}

TEST_CASE("inverse gradient moments") {
  Vec l = Vec::Ones(6);
  const SpectralModel m(l, 1.0);
  const LevelFunction g(DomainSpec::ball_of_modes(6, 6));
  const auto mom = inverse_gradient_moments(g, m, {2.0, 4.0, 8.0}, {40000, 0, 2, 2});
  REQUIRE(mom.size() == 3);
  CHECK(mom[0].finite_expected);
  CHECK(mom[1].finite_expected);
  CHECK_FALSE(mom[2].finite_expected);
  // |2x|^{-2} with x ~ N(0, I_6): E = 1/(4 (6 - 2)) = 1/16
  CHECK(std::abs(mom[0].full.value - 1.0 / 16.0) < 3 * mom[0].full.std_error);
}
