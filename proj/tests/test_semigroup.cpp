#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ns2d/semigroup.hpp"

using namespace ns2d;
using std::numbers::pi;

namespace {

SpectralVectorField mode_11(const Grid& g, double a) {
  // (sin(x + y), -sin(x + y)) / sqrt(2): divergence free, |k|^2 = 2
  SpectralVectorField f(g);
  const auto i = g.index(1, 1);
  const auto j = g.index(g.slot(-1), g.slot(-1));
  const cplx c{0.0, -0.5 * a / std::sqrt(2.0)};
  f.c1[i] = c;
  f.c2[i] = -c;
  f.c1[j] = std::conj(c);
  f.c2[j] = -std::conj(c);
  return f;
}

}  // namespace

TEST_CASE("single mode decays by exp(-|k|^2 t)") {
  const Grid g(16);
  const auto f = mode_11(g, 1.0);
  const auto w = heat_evolve(f, 0.5);
  const auto i = g.index(1, 1);
  CHECK(std::abs(w.c1[i]) / std::abs(f.c1[i]) == doctest::Approx(0.36787944117144233).epsilon(1e-15));
  const auto same = heat_evolve(f, 0.0);
  CHECK(same.c1 == f.c1);
  CHECK_THROWS_AS(heat_evolve(f, -1e-3), FieldError);
}

TEST_CASE("semigroup law") {
  const Grid g(32);
  const auto u = random_solenoidal(g, 4.0, 3);
  const auto a = heat_evolve(heat_evolve(u, 0.13), 0.29);
  const auto b = heat_evolve(u, 0.42);
  CHECK(norm_l2(a - b) <= 1e-12 * norm_l2(b));
}

TEST_CASE("energy identity for single-mode and random data") {
  const Grid g(16);
  // 1/2 e^{-2|k|^2 t} E0 + E0 (1 - e^{-2|k|^2 t}) / 2 = 1/2 E0 exactly.
  CHECK(linear_energy_residual(mode_11(g, 1.0), 1.0, 2000) <= 1e-10);
  CHECK(linear_energy_residual(random_solenoidal(Grid(32), 3.0, 1), 1.0, 4000) <= 1e-8);
}

TEST_CASE("time grids") {
  const auto t = geometric_times(0.01, 1.0, 3);
  REQUIRE(t.size() == 3);
  CHECK(t[1] == doctest::Approx(0.1));
  CHECK(t[2] == 1.0);
  const auto u = uniform_times(1.0, 4);
  CHECK(u.size() == 5);
  CHECK(u[2] == 0.5);
  CHECK_THROWS(geometric_times(1.0, 0.5, 4));
}

TEST_CASE("concentrated and gaussian data are admissible") {
  const Grid g(64, 4.0 * pi);
  const auto c = concentrated_datum(g, 2.0, 10.0);
  CHECK(norm_l2(c) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(solenoidal_defect(c) <= 1e-12);
  CHECK(std::abs(c.c1[0]) == 0.0);
  const Grid h(128);
  const auto b = gaussian_bump(h, 1.0, 4.0 * h.spacing());
  CHECK(solenoidal_defect(b) <= 1e-12);
  CHECK(std::abs(b.c1[0]) == 0.0);
}

TEST_CASE("decay audit on the heat semigroup at modest size") {
  const Grid g(128, 4.0 * pi);
  const auto u0 = concentrated_datum(g, 2.0, 10.0);
  const auto a = decay_audit(u0, 2.0, 4.0, 1.0 / 100.0, 0.25);
  CHECK(a.fit.samples == 16);
  CHECK(a.fit.exponent < 0.0);
  CHECK(a.envelope > 0.0);
  CHECK(std::isfinite(a.envelope));
  CHECK_THROWS_AS(decay_audit(u0, 0.5, 4.0, 0.01, 0.25), FieldError);
  CHECK_THROWS_AS(decay_audit(u0, 2.0, 4.0, 1e-6, 0.25), FieldError);
  CHECK_THROWS_AS(decay_audit(u0, 2.0, 4.0, 0.01, 100.0), FieldError);
}

TEST_CASE("l1 audit preconditions") {
  const Grid g(64);
  CHECK_THROWS_AS(l1_decay_audit(g, 1.0, g.spacing(), 2.0, 0.1, 0.5), FieldError);
  const double sigma = 4.0 * g.spacing();
  CHECK_THROWS_AS(l1_decay_audit(g, 1.0, sigma, 2.0, 0.5 * sigma * sigma, 0.5), FieldError);
  CHECK_THROWS_AS(l1_decay_audit(g, 1.0, sigma, 2.0, 0.1, 2.0), FieldError);
  CHECK_THROWS_AS(l1_decay_audit(g, 1.0, sigma, 1.0, 0.1, 0.5), FieldError);
}

TEST_CASE("linear sup integral scales exactly") {
  const Grid g(32);
  const auto u0 = random_solenoidal(g, 3.0, 8);
  const auto rep = linear_sup_integral_audit(u0, 8.0, 0.05, 800);
  CHECK(rep.status == Status::pass);
  REQUIRE(rep.fitted_constant.has_value());
  CHECK(*rep.fitted_constant > 0.0);
  // A horizon that leaves most of the integral in the tail is not decided.
  const auto short_run = linear_sup_integral_audit(u0, 0.01, 0.05, 50);
  CHECK(short_run.status == Status::inconclusive);
}

TEST_CASE("linear tail bound dominates the exact tail for a single mode") {
  const Grid g(16);
  const auto w = mode_11(g, 1.0);
  // ||w(T + s)||_inf = e^{-2 s} ||w(T)||_inf, so the tail is ||w(T)||^2 / 4.
  const double exact = norm_sup(w) * norm_sup(w) / 4.0;
  const double bound = linear_sup_tail(w);
  CHECK(bound >= exact * (1.0 - 1e-12));
}
