// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

#include "ns2d/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>

#include "ns2d/kernels.hpp"
#include "ns2d/snapshot_io.hpp"
#include "ns2d/toolkit.hpp"

namespace ns2d {
namespace {

struct Factors {
  std::vector<double> full;  // exp(-|k|^2 dt)
  std::vector<double> half;  // exp(-|k|^2 dt / 2)
};

Factors make_factors(const Grid& g, double dt) {
  Factors f;
  const auto k2 = g.k_squared();
  f.full.resize(k2.size());
  f.half.resize(k2.size());
  for (std::size_t i = 0; i < k2.size(); ++i) {
    f.full[i] = std::exp(-k2[i] * dt);
    f.half[i] = std::exp(-k2[i] * dt * 0.5);
  }
  return f;
}

double grad_sq(const SpectralVectorField& u) {
  const double g = norm_grad_l2(u);
  return g * g;
}

// N(u) and, optionally, max |u| on the collocation grid.
SpectralVectorField rotational_nonlinearity(const SpectralVectorField& u, double* max_speed) {
  const PhysicalVectorField phys = inverse_transform(u);
  const std::vector<double> omega = inverse_transform_scalar(vorticity(u));
  PhysicalVectorField prod(u.grid);
  kernels::active().rotational_product(prod.x.data(), prod.y.data(), omega.data(), phys.x.data(), phys.y.data(),
                                       u.grid.size());
  if (max_speed != nullptr) *max_speed = std::sqrt(kernels::max_magnitude_sq(phys.x, phys.y));
  SpectralVectorField out = forward_transform(prod);
  dealias_inplace(out);
  leray_project_inplace(out);
  return out;
}

void scale_field(SpectralVectorField& f, const std::vector<double>& factor) {
  kernels::scale(f.c1, factor);
  kernels::scale(f.c2, factor);
}

StepResult step_with(const SpectralVectorField& u, double dt, bool nonlinear, const Factors& fac) {
  StepResult res{u, 0.0, 0.0};
  const Grid& g = u.grid;
  auto minus_n = [&](const SpectralVectorField& x, double* speed) {
    if (!nonlinear) {
      if (speed != nullptr) *speed = 0.0;
      return SpectralVectorField(g);
    }
    SpectralVectorField n = rotational_nonlinearity(x, speed);
    n *= -1.0;
    return n;
  };

  const SpectralVectorField a = minus_n(u, &res.max_speed);
  // u_a = E2 (u + dt/2 a)
  SpectralVectorField ua = u;
  kernels::axpy(ua.c1, 0.5 * dt, a.c1);
  kernels::axpy(ua.c2, 0.5 * dt, a.c2);
  scale_field(ua, fac.half);
  const SpectralVectorField b = minus_n(ua, nullptr);
  // u_b = E2 u + dt/2 b
  SpectralVectorField e2u = u;
  scale_field(e2u, fac.half);
  SpectralVectorField ub = e2u;
  kernels::axpy(ub.c1, 0.5 * dt, b.c1);
  kernels::axpy(ub.c2, 0.5 * dt, b.c2);
  const SpectralVectorField c = minus_n(ub, nullptr);
  // u_c = E u + dt E2 c
  SpectralVectorField uc = u;
  scale_field(uc, fac.full);
  SpectralVectorField e2c = c;
  scale_field(e2c, fac.half);
  kernels::axpy(uc.c1, dt, e2c.c1);
  kernels::axpy(uc.c2, dt, e2c.c2);
  const SpectralVectorField d = minus_n(uc, nullptr);

  // u' = E u + dt/6 (E a + 2 E2 (b + c) + d)
  SpectralVectorField ea = a;
  scale_field(ea, fac.full);
  SpectralVectorField bc = b;
  bc += c;
  scale_field(bc, fac.half);
  SpectralVectorField& out = res.u;
  scale_field(out, fac.full);
  kernels::axpy(out.c1, dt / 6.0, ea.c1);
  kernels::axpy(out.c2, dt / 6.0, ea.c2);
  kernels::axpy(out.c1, dt / 3.0, bc.c1);
  kernels::axpy(out.c2, dt / 3.0, bc.c2);
  kernels::axpy(out.c1, dt / 6.0, d.c1);
  kernels::axpy(out.c2, dt / 6.0, d.c2);

  res.dissipation = dt / 6.0 * (grad_sq(u) + 2.0 * grad_sq(ua) + 2.0 * grad_sq(ub) + grad_sq(uc));
  return res;
}

bool all_finite(const SpectralVectorField& f) {
  for (std::size_t i = 0; i < f.c1.size(); ++i) {
    if (!std::isfinite(f.c1[i].real()) || !std::isfinite(f.c1[i].imag()) || !std::isfinite(f.c2[i].real()) ||
        !std::isfinite(f.c2[i].imag())) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::size_t SolverConfig::steps() const {
  const double ratio = horizon / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw SolverError("solver: horizon must be an integer multiple of dt");
  }
  return static_cast<std::size_t>(rounded);
}

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw SolverError("solver: dt must be positive");
  if (!(horizon >= 0.0)) throw SolverError("solver: horizon must be >= 0");
  if (stride == 0) throw SolverError("solver: stride must be >= 1");
  if (!(cfl_safety > 0.0)) throw SolverError("solver: cfl_safety must be positive");
  (void)grid();
  (void)steps();
}

Json SolverConfig::to_json() const {
  return {{"dt", dt},         {"horizon", horizon},       {"n", n},
          {"length", length}, {"dealias_fraction", dealias_fraction}, {"stride", stride},
          {"cfl_safety", cfl_safety}, {"nonlinear", nonlinear}};
}

SpectralVectorField nonlinear_term(const SpectralVectorField& u) { return rotational_nonlinearity(u, nullptr); }

SpectralVectorField convective_term(const SpectralVectorField& u) {
  const PhysicalVectorField phys = inverse_transform(u);
  const SpectralTensorField grad = gradient(u);
  std::array<std::vector<double>, 4> d;
  for (int c = 0; c < 4; ++c) {
    SpectralScalarField s(u.grid);
    s.c = grad.c[c];
    d[c] = inverse_transform_scalar(s);
  }
  PhysicalVectorField f(u.grid);
  for (std::size_t i = 0; i < u.grid.size(); ++i) {
    // components ordered d1u1, d2u1, d1u2, d2u2
    f.x[i] = phys.x[i] * d[0][i] + phys.y[i] * d[1][i];
    f.y[i] = phys.x[i] * d[2][i] + phys.y[i] * d[3][i];
  }
  SpectralVectorField out = forward_transform(f);
  dealias_inplace(out);
  return out;
}

StepResult step(const SpectralVectorField& u, double dt, bool nonlinear) {
  if (!(dt > 0.0)) throw SolverError("step: dt must be positive");
  return step_with(u, dt, nonlinear, make_factors(u.grid, dt));
}

Trajectory integrate(const SpectralVectorField& u0, const SolverConfig& config) {
  config.validate();
  const Grid grid = config.grid();
  if (!(u0.grid == grid)) throw SolverError("integrate: initial data grid does not match the configuration");
  if (std::abs(u0.c1[0]) != 0.0 || std::abs(u0.c2[0]) != 0.0) throw SolverError("integrate: initial data must be mean-zero");
  if (!is_solenoidal(u0)) throw SolverError("integrate: initial data must be solenoidal");

  Trajectory traj(grid);
  traj.dt = config.dt;
  traj.config = config;
  const std::size_t steps = config.steps();
  const Factors fac = make_factors(grid, config.dt);

  SpectralVectorField u = dealias(u0);
  double dissipation = 0.0;
  double energy = 0.5 * norm_l2(u) * norm_l2(u);
  double max_rate = 0.0;
  traj.times.push_back(0.0);
  traj.snapshots.push_back(u);
  traj.dissipation.push_back(0.0);
  const double h = grid.spacing();
  for (std::size_t s = 1; s <= steps; ++s) {
    std::optional<StepResult> result;
    try {
      result.emplace(step_with(u, config.dt, config.nonlinear, fac));
    } catch (const FieldError&) {
      throw SolverError("integrate: non-finite state at step " + std::to_string(s));
    }
    StepResult& r = *result;
    if (r.max_speed * config.dt > config.cfl_safety * h) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "integrate: CFL violated at step %zu (max speed %.6g, dt %.6g, h %.6g, safety %.3g)",
                    s, r.max_speed, config.dt, h, config.cfl_safety);
      throw SolverError(buf);
    }
    if (!all_finite(r.u) || !std::isfinite(r.dissipation)) {
      throw SolverError("integrate: non-finite state at step " + std::to_string(s));
    }
    const double l2_old = norm_l2(u);
    const double l2_new = norm_l2(r.u);
    if (l2_old > 0.0) max_rate = std::max(max_rate, grad_sq(u) / l2_old);
    traj.max_l2_jump = std::max(traj.max_l2_jump, std::abs(l2_new - l2_old));
    const double new_energy = 0.5 * l2_new * l2_new;
    traj.max_energy_increase = std::max(traj.max_energy_increase, new_energy - energy);
    energy = new_energy;
    dissipation += r.dissipation;
    u = std::move(r.u);
    if (s % config.stride == 0 || s == steps) {
      traj.times.push_back(config.dt * static_cast<double>(s));
      traj.snapshots.push_back(u);
      traj.dissipation.push_back(dissipation);
      traj.max_solenoidal_defect = std::max(traj.max_solenoidal_defect, solenoidal_defect(u));
    }
  }
  traj.l2_jump_bound = config.dt * max_rate;
  return traj;
}

AuditReport energy_identity_audit(const Trajectory& traj, double tol) {
  AuditReport rep;
  rep.name = "energy_identity";
  rep.params = {{"n", traj.grid.n()}, {"dt", traj.dt}, {"samples", traj.times.size()}, {"tol", tol}};
  if (traj.snapshots.empty()) throw SolverError("energy_identity_audit: empty trajectory");
  const double l0 = norm_l2(traj.snapshots.front());
  const double e0 = 0.5 * l0 * l0;
  double worst = 0.0;
  Json residuals = Json::array();
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    const double l = norm_l2(traj.snapshots[i]);
    const double res = e0 > 0.0 ? std::abs(0.5 * l * l + traj.dissipation[i] - e0) / e0 : 0.0;
    worst = std::max(worst, res);
    residuals.push_back(res);
  }
  const double total = traj.dissipation.back();
  rep.lhs = 0.5 * std::pow(norm_l2(traj.snapshots.back()), 2) + total;
  rep.rhs = e0;
  rep.details["max_residual"] = worst;
  rep.details["residuals"] = std::move(residuals);
  rep.details["dissipation_total"] = total;
  rep.details["dissipation_bounded"] = total <= e0 * (1.0 + tol);
  rep.details["max_energy_increase"] = traj.max_energy_increase;
  rep.status = (worst <= tol && total <= e0 * (1.0 + tol)) ? Status::pass : Status::fail;
  return rep;
}

SpectralScalarField recover_pressure(const SpectralVectorField& u) {
  const SpectralVectorField f = convective_term(u);
  SpectralScalarField p(u.grid);
  const auto kx = u.grid.kx_eff();
  const auto ky = u.grid.ky_eff();
  const auto k2 = u.grid.k_eff_squared();
  for (std::size_t i = 0; i < u.grid.size(); ++i) {
    if (k2[i] == 0.0) continue;
    p.c[i] = cplx{0.0, 1.0} * (kx[i] * f.c1[i] + ky[i] * f.c2[i]) / k2[i];
  }
  return p;
}

double momentum_divergence_residual(const SpectralVectorField& u) {
  const SpectralVectorField f = convective_term(u);
  const SpectralScalarField p = recover_pressure(u);
  const auto kx = u.grid.kx_eff();
  const auto ky = u.grid.ky_eff();
  const auto k2 = u.grid.k_eff_squared();
  double worst = 0.0;
  double scale = 0.0;
  const cplx i1{0.0, 1.0};
  for (std::size_t i = 0; i < u.grid.size(); ++i) {
    // u_t = Lap u - F - grad p
    const cplx r1 = -k2[i] * u.c1[i] - f.c1[i] - i1 * kx[i] * p.c[i];
    const cplx r2 = -k2[i] * u.c2[i] - f.c2[i] - i1 * ky[i] * p.c[i];
    const cplx div = i1 * (kx[i] * r1 + ky[i] * r2);
    const cplx divf = i1 * (kx[i] * f.c1[i] + ky[i] * f.c2[i]);
    worst = std::max(worst, std::abs(div));
    scale = std::max(scale, std::abs(divf));
  }
  return scale > 0.0 ? worst / scale : worst;
}

void write_trajectory(const std::filesystem::path& dir, const Trajectory& traj) {
  std::filesystem::create_directories(dir);
  Json manifest;
  manifest["config"] = traj.config.to_json();
  manifest["integrator"] = traj.integrator;
  manifest["times"] = traj.times;
  Json files = Json::array();
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "snap_%05zu.ns2f", i);
    write_snapshot(dir / name, traj.snapshots[i], infer_flags(traj.snapshots[i]));
    files.push_back(name);
  }
  manifest["snapshots"] = std::move(files);
  manifest["dissipation"] = traj.dissipation;
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  out << manifest.dump(2) << '\n';
}

}  // namespace ns2d
