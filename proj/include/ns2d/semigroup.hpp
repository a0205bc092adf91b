// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "ns2d/audit_report.hpp"
#include "ns2d/spectral.hpp"
#include "ns2d/toolkit.hpp"

namespace ns2d {

// Multiplies every mode by exp(-|k|^2 t). Throws FieldError for t < 0.
SpectralVectorField heat_evolve(const SpectralVectorField& f, double t);
void heat_evolve_inplace(SpectralVectorField& f, double t);

// p-norm (p may be infinity) of heat_evolve(u0, t) at each t.
NormSeries heat_norm_series(const SpectralVectorField& u0, const std::vector<double>& times, double p);
NormSeries heat_gradient_norm_series(const SpectralVectorField& u0, const std::vector<double>& times, double q);

// n points from a to b, evenly spaced in log t.
std::vector<double> geometric_times(double a, double b, std::size_t n);
std::vector<double> uniform_times(double t_end, std::size_t intervals);

// P(e1 |k|^(2/r - 2) exp(-|k|^2/k0^2)) on the dealiased modes, unit L2 norm.
// The coherent phases put the field in the regime where the L^r -> L^p
// smoothing rate is attained.
SpectralVectorField concentrated_datum(const Grid& grid, double r, double k0);

// P(e1 G) with G the periodized Gaussian of the given mass and width,
// centered at the origin, with its mean removed.
SpectralVectorField gaussian_bump(const Grid& grid, double mass, double sigma);

struct DecayAudit {
  DecayFit fit;
  NormSeries series;
  // max over samples of ||w(t)||_p t^(1/r - 1/p) / ||u0||_r
  double envelope = 0.0;
  AuditReport report;
};

// Fits ||heat_evolve(u0, t)||_p on `samples` geometric times in the window.
// Throws FieldError if the window leaves (1/k_max^2, 1/k_min^2).
DecayAudit decay_audit(const SpectralVectorField& u0, double r, double p, double t_min, double t_max,
                       std::size_t samples = 16);

struct L1DecayAudit {
  DecayFit field_fit;
  DecayFit gradient_fit;
  NormSeries field_series;
  NormSeries gradient_series;
  AuditReport report;
};

// Gaussian-bump data; exponents must be within 0.07 of -(1 - 1/q) and
// -(1/2 + 1 - 1/q). Throws FieldError if sigma < 4 grid spacings or the
// window is not inside (sigma^2, 1].
L1DecayAudit l1_decay_audit(const Grid& grid, double mass, double sigma, double q, double t_min, double t_max,
                            std::size_t samples = 12);

// Certified bound for int_T^inf ||w||_inf^2 given w(T): the sup norm is at
// most the coefficient l1 norm, and each mode decays at least like
// exp(-k_min^2 s).
double linear_sup_tail(const SpectralVectorField& w_at_T);

// int_0^inf ||w||_inf^2 / ||u0||_2^2 over [0, T] sampled at `intervals`
// uniform steps plus the certified tail, repeated for amplitudes
// {1/4, 1, 4} to check exact linear scaling.
AuditReport linear_sup_integral_audit(const SpectralVectorField& u0, double horizon, double tail_tol,
                                      std::size_t intervals = 2000);

// max_t |1/2 ||w(t)||^2 + int_0^t ||grad w||^2 - 1/2 ||u0||^2| / (1/2 ||u0||^2)
// on a uniform grid, composite Simpson in time.
double linear_energy_residual(const SpectralVectorField& u0, double horizon, std::size_t intervals);

}  // namespace ns2d
