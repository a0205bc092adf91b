// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "ns2d/audit_report.hpp"
#include "ns2d/spectral.hpp"

namespace ns2d {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverConfig {
  double dt = 1e-3;
  double horizon = 1.0;
  int n = 64;
  double length = 2.0 * std::numbers::pi;
  double dealias_fraction = 2.0 / 3.0;
  // Keep every stride-th step (t = 0 is always kept).
  std::size_t stride = 10;
  double cfl_safety = 0.5;
  // false integrates the Stokes system only.
  bool nonlinear = true;

  Grid grid() const { return Grid(n, length, dealias_fraction); }
  // Number of steps; the horizon must be an integer multiple of dt (to 1e-9).
  std::size_t steps() const;
  void validate() const;
  Json to_json() const;
};

struct Trajectory {
  explicit Trajectory(Grid g) : grid(std::move(g)) {}

  Grid grid;
  std::vector<double> times;
  std::vector<SpectralVectorField> snapshots;
  // int_0^t ||grad u||^2 at each sample time.
  std::vector<double> dissipation;
  double dt = 0.0;
  std::string integrator = "if-rk4";
  SolverConfig config;
  // Largest one-step increase of 1/2 ||u||^2 (should be <= 0 up to rounding).
  double max_energy_increase = 0.0;
  // Largest |d ||u||_2| per step and the bound dt * max ||grad u||^2 / ||u||.
  double max_l2_jump = 0.0;
  double l2_jump_bound = 0.0;
  // Worst solenoidal defect over the stored snapshots.
  double max_solenoidal_defect = 0.0;
};

// P dealias(omega u_perp) with omega = d1 u2 - d2 u1 and u_perp = (-u2, u1).
SpectralVectorField nonlinear_term(const SpectralVectorField& u);

// Convective u . grad u, dealiased but not projected.
SpectralVectorField convective_term(const SpectralVectorField& u);

struct StepResult {
  SpectralVectorField u;
  // dt/6 (G(u) + 2 G(u_a) + 2 G(u_b) + G(u_c)) with G = ||grad u||^2.
  double dissipation;
  // max |u| on the collocation grid at the start of the step.
  double max_speed;
};

// One integrating-factor RK4 step of u_t = Lap u - N(u).
StepResult step(const SpectralVectorField& u, double dt, bool nonlinear = true);

// Throws SolverError on CFL violation or non-finite state, naming the step.
Trajectory integrate(const SpectralVectorField& u0, const SolverConfig& config);

AuditReport energy_identity_audit(const Trajectory& traj, double tol = 1e-6);

// Mean-zero p with -Lap p = div(u . grad u).
SpectralScalarField recover_pressure(const SpectralVectorField& u);
// max |div(Lap u - u.grad u - grad p)| over modes, relative to max |div(u.grad u)|.
double momentum_divergence_residual(const SpectralVectorField& u);

// manifest.json plus one NS2F file per sample.
void write_trajectory(const std::filesystem::path& dir, const Trajectory& traj);

}  // namespace ns2d
