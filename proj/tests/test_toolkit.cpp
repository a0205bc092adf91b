#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "ns2d/toolkit.hpp"

using namespace ns2d;

namespace {

SampledFunction linear_ramp(double horizon, std::size_t nodes) {
  SampledFunction g;
  for (std::size_t i = 0; i < nodes; ++i) {
    const double t = horizon * double(i) / double(nodes - 1);
    g.times.push_back(t);
    g.values.push_back(t);
  }
  return g;
}

}  // namespace

TEST_CASE("sampled function interpolation") {
  SampledFunction f{{0.0, 1.0, 3.0}, {0.0, 2.0, 0.0}};
  CHECK(f(0.5) == 1.0);
  CHECK(f(2.0) == 1.0);
  CHECK(f(4.0) == 0.0);
  CHECK_THROWS_AS((SampledFunction{{0.0, 0.0}, {1.0, 1.0}}), ToolkitError);
}

TEST_CASE("power-law fit") {
  std::vector<double> t, v;
  for (int i = 0; i < 12; ++i) {
    t.push_back(std::pow(10.0, -2.0 + 0.2 * i));
    v.push_back(3.0 * std::pow(t.back(), -0.75));
  }
  const auto fit = powerlaw_fit(t, v, 1e-3, 1e9);
  CHECK(fit.exponent == doctest::Approx(-0.75).epsilon(1e-12));
  CHECK(fit.constant == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(fit.residual <= 1e-12);
  CHECK(fit.reliable);
  CHECK(fit.samples == 12);

  std::vector<double> te, ve;
  for (int i = 0; i < 16; ++i) {
    te.push_back(2.0 + 0.2 * i);
    ve.push_back(std::exp(-te.back()));
  }
  CHECK_FALSE(powerlaw_fit(te, ve, 2.0, 5.0).reliable);

  CHECK_THROWS_AS(powerlaw_fit(t, v, 0.5, 1.0), ToolkitError);
  v[3] = -1.0;
  CHECK_THROWS_AS(powerlaw_fit(t, v, 1e-3, 1e9), ToolkitError);
}

TEST_CASE("hls parameters") {
  const auto p = HlsParams::from_alpha_r(0.25, 8.0 / 7.0);
  CHECK(p.q == doctest::Approx(1.6));
  CHECK(p.relation_defect() <= 1e-15);
  CHECK_THROWS_AS(HlsParams::from_alpha_r(0.0, 2.0), ToolkitError);
  CHECK_THROWS_AS(HlsParams::from_alpha_r(0.5, 2.0), ToolkitError);
  CHECK_THROWS_AS(HlsParams::from_alpha_r(0.25, 1.0), ToolkitError);
  const auto c = HlsParams::for_lebesgue_exponent(6.0);
  CHECK(c.alpha == doctest::Approx(1.0 / 6.0));
  CHECK(c.r == doctest::Approx(1.5));
  CHECK(c.q == 2.0);
  CHECK(c.relation_defect() <= 1e-15);
}

TEST_CASE("hls operator closed forms") {
  SUBCASE("indicator, alpha = 1/4") {
    const double alpha = 0.25;
    const auto g = indicator_function(1.0, 4.0, 4000);
    double worst = 0.0;
    for (double t : {0.1, 0.5, 0.999, 1.5, 2.0, 3.7}) {
      const double exact = (std::pow(t, alpha) - (t > 1.0 ? std::pow(t - 1.0, alpha) : 0.0)) / alpha;
      worst = std::max(worst, std::abs(hls_evaluate(g, alpha, t) - exact));
    }
    CHECK(worst <= 1e-6);
  }
  SUBCASE("g = t, alpha = 1/2") {
    const auto g = linear_ramp(1.0, 200);
    const auto f = hls_operator(g, 0.5);
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      worst = std::max(worst, std::abs(f.values[i] - 4.0 / 3.0 * std::pow(f.times[i], 1.5)));
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("hls ratio invariance and the negative control") {
  const auto params = HlsParams::from_alpha_r(0.25, 8.0 / 7.0);
  const auto g = indicator_function(1.0, 8.0, 4000);
  const auto base = hls_ratio(g, params.alpha, params.r, params.q);
  const auto amp = hls_ratio(rescale(g, 3.0, 1.0), params.alpha, params.r, params.q);
  const auto dil = hls_ratio(rescale(g, 1.0, 2.0), params.alpha, params.r, params.q);
  CHECK(std::abs(amp.ratio / base.ratio - 1.0) <= 1e-12);
  CHECK(std::abs(dil.ratio / base.ratio - 1.0) <= 1e-6);

  const auto rep = hls_bound_audit({g}, params);
  CHECK(rep.status == Status::pass);

  HlsParams broken = params;
  broken.q += 0.05;
  const auto b0 = hls_ratio(g, broken.alpha, broken.r, broken.q);
  const auto b1 = hls_ratio(rescale(g, 1.0, 2.0), broken.alpha, broken.r, broken.q);
  CHECK(std::abs(b1.ratio / b0.ratio - 1.0) >= 10.0 * 1e-6);
  CHECK_THROWS(hls_bound_audit({g}, broken));
}

TEST_CASE("gagliardo-nirenberg") {
  CHECK(gn_relation_defect(6.0, 2.0, 2.0, 2.0 / 3.0) <= 1e-15);
  const Grid grid(32);
  const auto u = random_solenoidal(grid, 3.0, 1);
  const double r1 = gn_ratio(u, 6.0, 2.0, 2.0, 2.0 / 3.0);
  const double r2 = gn_ratio(5.0 * u, 6.0, 2.0, 2.0, 2.0 / 3.0);
  CHECK(std::abs(r2 / r1 - 1.0) <= 1e-12);
  const auto rep = gn_audit({u, random_solenoidal(Grid(64), 4.0, 2)}, 6.0, 2.0, 2.0, 2.0 / 3.0);
  CHECK(rep.status == Status::pass);

  CHECK_THROWS_AS(gn_audit({u}, 6.0, 2.0, 2.0, 1.5), ToolkitError);
  CHECK_THROWS_AS(gn_audit({u}, 6.0, 2.0, 2.0, 0.5), ToolkitError);
  // theta = 1 with 1 - 2/r = 0, a nonnegative integer.
  CHECK_THROWS_AS(gn_audit({u}, INFINITY, 2.0, 2.0, 1.0), ToolkitError);
  SpectralVectorField mean(grid);
  mean.c1[0] = 1.0;
  CHECK_THROWS_AS(gn_audit({mean}, 6.0, 2.0, 2.0, 2.0 / 3.0), ToolkitError);
}

TEST_CASE("time integrals with tails") {
  SampledFunction s{{0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}};
  const auto a = time_integral_sq_sup(s, 0.01);
  CHECK(a.truncated == 2.0);
  CHECK(a.value == 2.01);
  CHECK_FALSE(a.flagged);
  const auto b = time_integral_sq_sup(s, 1.0);
  CHECK(b.flagged);
  CHECK(trapezoid({0.0, 1.0, 3.0}, {0.0, 2.0, 2.0}) == 5.0);
}

TEST_CASE("csv round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "ns2d_toolkit_test";
  std::filesystem::create_directories(dir);
  SampledFunction f{{0.0, 0.1, 0.30000000000000004}, {1.0 / 3.0, -2.5e-300, 7.0}};
  write_csv(dir / "f.csv", f);
  const auto g = read_csv(dir / "f.csv");
  CHECK(g.times == f.times);
  CHECK(g.values == f.values);
  write_csv(dir / "n.csv", std::vector<NormSeries>{{"u:sup", {0.0, 1.0}, {2.0, 1.0}}});
  std::ifstream in(dir / "n.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,norm_kind,value");
}
