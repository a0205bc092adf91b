// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <memory>
#include <vector>

#include "ns2d/audit_report.hpp"
#include "ns2d/solver.hpp"
#include "ns2d/toolkit.hpp"

namespace ns2d {

// u = w + v with w the Stokes flow of u0 and v the perturbation, all norm
// series on the trajectory's sample grid.
struct DecompositionRecord {
  std::shared_ptr<const Trajectory> traj;
  std::vector<double> p_values;

  NormSeries u_sup, w_sup, v_sup;
  NormSeries u_l2, w_l2, v_l2;
  NormSeries grad_u_l2;
  // One per entry of p_values.
  std::vector<NormSeries> u_lp;

  // ||v(0)||_2 / max(||u0||_2, tiny)
  double v0_defect = 0.0;
  double max_v_solenoidal_defect = 0.0;
  // Coefficient l1 norms at the last sample.
  double wiener_u_end = 0.0;
  double wiener_w_end = 0.0;
  double wiener_v_end = 0.0;
  // max ||v||_inf <= 1e-10 max ||u||_inf: v is integrator roundoff and the
  // audits treat it as exactly zero.
  bool v_at_roundoff = false;

  const std::vector<double>& times() const { return traj->times; }
  const SpectralVectorField& u0() const { return traj->snapshots.front(); }
  SpectralVectorField w_at(std::size_t i) const;
  SpectralVectorField v_at(std::size_t i) const;
  const NormSeries& lp_series(double p) const;
};

// Throws SolverError if a snapshot lives on a different grid than the
// trajectory.
DecompositionRecord decompose(std::shared_ptr<const Trajectory> traj, std::vector<double> p_values = {5, 6, 8, 12});

// int_T^inf of the squared sup norm, bounded through the coefficient l1 norm
// A: for the Galerkin flow dA/dt <= -m A + K A^2 with m = k_min^2 and K the
// largest retained |k|. Infinite when K A(T) >= m.
double nonlinear_sup_tail(double wiener_at_T, const Grid& grid);
// Same for v, which is driven by the nonlinearity of u:
// A_v(T + s) <= (A_v(T) + K Abar^2 / m) exp(-m s), Abar = A_u(T)/(1 - K A_u(T)/m).
double perturbation_sup_tail(double wiener_v_at_T, double wiener_u_at_T, const Grid& grid);

struct SupIntegrals {
  TimeIntegral u, w, v;
  // 1/2 ||u(T)||^2 over 1/2 ||u0||^2
  double energy_fraction_end = 0.0;
  // energy_fraction_end <= 1e-6 and every tail finite
  bool certified = false;
};
SupIntegrals sup_integrals(const DecompositionRecord& rec);

// (v(t), phi0) against int_0^t int u_i u_j d_i phi_j(t - tau) dx dtau, the
// tau integral by the trapezoid rule on the sample grid. t must be a sample
// time. pass iff |lhs - rhs| <= tol (1 + |lhs|).
AuditReport duality_representation_check(const DecompositionRecord& rec, const SpectralVectorField& phi0, double t,
                                         double tol = 1e-4);

struct RefinementLevel {
  double dt;
  std::size_t stride;
  double lhs;
  double rhs;
  double error;
};
struct DualityRefinement {
  std::vector<RefinementLevel> levels;
  // log2 of successive error ratios, and their minimum.
  std::vector<double> orders;
  double min_order = 0.0;
};
// Runs the solver once per dt (sample spacing dt * stride shrinks with dt)
// and reports the duality discrepancy at t.
DualityRefinement duality_refinement_study(const SpectralVectorField& u0, const SpectralVectorField& phi0, double t,
                                           SolverConfig base, const std::vector<double>& dts);

struct RatioSeries {
  std::vector<double> t, lhs, rhs, ratio;
};
void write_csv(const std::filesystem::path& path, const RatioSeries& s);

// ||v(t)||_inf against int_0^t ||u||_p^2 (t - tau)^(-1/2 - 2/p) dtau.
// fitted_constant is the max ratio over samples with rhs > 0.
AuditReport proposition_bound_audit(const DecompositionRecord& rec, double p, RatioSeries* series = nullptr);

// Spread of fitted constants over an amplitude sweep: max/min - 1 <= tol.
// Each entry is (amplitude, constant); zero constants (v = 0) are skipped.
AuditReport constant_stability(const std::string& name, const std::vector<std::pair<double, double>>& constants,
                               double tol = 0.2);

// I(lambda) = int_0^inf ||v_lambda||_inf^2 per amplitude. Pass iff every
// s = I/lambda^4 stays within 1.25 of the smallest-amplitude value and all
// tails are certified below 5%; otherwise fail or inconclusive.
struct PerturbationSample {
  double amplitude;
  TimeIntegral integral;
  bool certified;
};
AuditReport perturbation_sup_integral_audit(const std::vector<PerturbationSample>& sweep);

}  // namespace ns2d
