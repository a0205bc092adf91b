#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "ns2d/experiment.hpp"
#include "ns2d/solver.hpp"

using namespace ns2d;
using std::numbers::pi;

namespace {

SolverConfig small_config(double horizon, double dt = 1e-3) {
  SolverConfig c;
  c.n = 32;
  c.dt = dt;
  c.horizon = horizon;
  c.stride = 10;
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  SolverConfig c = small_config(0.1, 0.03);
  CHECK_THROWS_AS(c.steps(), SolverError);
  c.dt = 0.01;
  CHECK(c.steps() == 10);
  c.stride = 0;
  CHECK_THROWS_AS(c.validate(), SolverError);
  c.stride = 1;
  c.dt = -1.0;
  CHECK_THROWS_AS(c.validate(), SolverError);
}

TEST_CASE("taylor-green nonlinearity is projected away") {
  const Grid g(32);
  const auto u = taylor_green(g);
  CHECK(norm_l2(nonlinear_term(u)) <= 1e-14);
  // The convective form is the gradient of -(cos 2x + cos 2y)/4.
  CHECK(norm_l2(convective_term(u)) > 1.0);
}

TEST_CASE("taylor-green follows the exact solution") {
  const auto traj = integrate(taylor_green(Grid(32)), small_config(0.5));
  const auto exact = taylor_green_exact(traj.grid, 1.0, 0.5);
  CHECK(norm_sup(traj.snapshots.back() - exact) <= 1e-12);
  CHECK(traj.times.size() == 51);
  CHECK(traj.times.back() == doctest::Approx(0.5));
}

TEST_CASE("pressure for taylor-green") {
  const Grid g(32);
  const auto p = recover_pressure(taylor_green(g));
  const auto vals = inverse_transform_scalar(p);
  double err = 0.0;
  for (int i = 0; i < g.n(); ++i) {
    for (int j = 0; j < g.n(); ++j) {
      const double x = i * g.spacing(), y = j * g.spacing();
      err = std::max(err, std::abs(vals[g.index(i, j)] - 0.25 * (std::cos(2 * x) + std::cos(2 * y))));
    }
  }
  CHECK(err <= 1e-14);
  CHECK(momentum_divergence_residual(random_solenoidal(g, 4.0, 2)) <= 1e-12);
}

TEST_CASE("energy identity on random data") {
  const auto u0 = random_solenoidal(Grid(32), 3.0, 6, 2.0);
  const auto traj = integrate(u0, small_config(0.5));
  const auto rep = energy_identity_audit(traj);
  CHECK(rep.status == Status::pass);
  CHECK(rep.details.at("max_residual").get<double>() <= 1e-8);
  CHECK(traj.max_energy_increase <= 0.0);
  CHECK(traj.max_solenoidal_defect <= 1e-12);
  CHECK(traj.max_l2_jump <= traj.l2_jump_bound * (1.0 + 1e-9));
}

TEST_CASE("linear mode integrates the stokes flow exactly") {
  const auto u0 = random_solenoidal(Grid(32), 3.0, 6);
  SolverConfig c = small_config(0.3);
  c.nonlinear = false;
  const auto traj = integrate(u0, c);
  double err = 0.0;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    SpectralVectorField exact = u0;
    const auto k2 = traj.grid.k_squared();
    for (std::size_t m = 0; m < traj.grid.size(); ++m) {
      exact.c1[m] *= std::exp(-k2[m] * traj.times[i]);
      exact.c2[m] *= std::exp(-k2[m] * traj.times[i]);
    }
    err = std::max(err, norm_l2(traj.snapshots[i] - exact));
  }
  CHECK(err <= 1e-13);
}

TEST_CASE("bad initial data and unstable steps are rejected") {
  const Grid g(32);
  SpectralVectorField mean(g);
  mean.c1[0] = 1.0;
  CHECK_THROWS_AS(integrate(mean, small_config(0.1)), SolverError);

  SpectralVectorField grad(g);
  grad.c1[g.index(1, 0)] = {0.0, -0.5};
  grad.c1[g.index(g.slot(-1), 0)] = {0.0, 0.5};
  CHECK_THROWS_AS(integrate(grad, small_config(0.1)), SolverError);

  CHECK_THROWS_AS(integrate(taylor_green(Grid(16)), small_config(0.1)), SolverError);

  const auto big = random_solenoidal(g, 4.0, 1, 500.0);
  try {
    integrate(big, small_config(0.1, 1e-2));
    FAIL("expected a CFL failure");
  } catch (const SolverError& e) {
    CHECK(std::string(e.what()).find("step") != std::string::npos);
  }
}

TEST_CASE("temporal order on perturbed taylor-green") {
  const auto rep = temporal_order_audit(32, 0.5, {0.05, 0.025}, 12.0);
  CHECK(rep.status == Status::pass);
  CHECK(*rep.fitted_exponent > 3.6);
}

TEST_CASE("trajectory manifest and snapshots") {
  const auto traj = integrate(taylor_green(Grid(32)), small_config(0.02));
  const auto dir = std::filesystem::temp_directory_path() / "ns2d_traj_test";
  std::filesystem::remove_all(dir);
  write_trajectory(dir, traj);
  std::ifstream in(dir / "manifest.json");
  const auto j = Json::parse(in);
  CHECK(j.at("times").size() == traj.times.size());
  CHECK(j.at("snapshots").size() == traj.snapshots.size());
  CHECK(j.at("dissipation").size() == traj.times.size());
  CHECK(std::filesystem::exists(dir / j.at("snapshots")[0].get<std::string>()));
}
