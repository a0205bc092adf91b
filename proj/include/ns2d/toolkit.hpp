// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ns2d/audit_report.hpp"
#include "ns2d/spectral.hpp"

namespace ns2d {

class ToolkitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Piecewise-linear function of time on strictly increasing nodes t >= 0.
// Outside [times.front(), times.back()] it is zero.
struct SampledFunction {
  std::vector<double> times;
  std::vector<double> values;

  SampledFunction() = default;
  SampledFunction(std::vector<double> t, std::vector<double> v);

  std::size_t size() const { return times.size(); }
  double operator()(double t) const;
  // Throws ToolkitError on bad shape, non-monotone nodes or non-finite values.
  void validate() const;
};

// A time series of one norm of one field, e.g. "u:sup" or "w:lp4".
struct NormSeries {
  std::string kind;
  std::vector<double> times;
  std::vector<double> values;

  SampledFunction as_function() const { return {times, values}; }
};

struct DecayFit {
  double exponent = 0.0;
  double constant = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  // Root-mean-square deviation of log(value) from the fitted line.
  double residual = 0.0;
  std::size_t samples = 0;
  // residual <= kReliableResidual
  bool reliable = false;

  static constexpr double kReliableResidual = 0.03;
};

// Least squares of log(value) against log(t) over samples with t in
// [t_min, t_max]. Needs at least 8 samples there, all positive.
DecayFit powerlaw_fit(const std::vector<double>& times, const std::vector<double>& values, double t_min,
                      double t_max);

// --- fractional integration ----------------------------------------------

// Exponents of the fractional-integration bound ||f||_q <= c ||g||_r with
// 1/q = 1/r - alpha.
struct HlsParams {
  double alpha = 0.0;
  double r = 0.0;
  double q = 0.0;

  // Derives q; throws ToolkitError unless 0 < alpha < 1 and 1 < r < 1/alpha.
  static HlsParams from_alpha_r(double alpha, double r);
  // The instantiation used for the perturbation estimate, p > 4:
  // alpha = (p-4)/(2p), r = p/(p-2), q = 2.
  static HlsParams for_lebesgue_exponent(double p);
  // |1/q - (1/r - alpha)|
  double relation_defect() const;
  void validate() const;
};

// f(t) = int_0^t g(tau) (t - tau)^(alpha - 1) dtau by product integration:
// g is taken piecewise linear and each subinterval is integrated against the
// kernel exactly. Output lives on g's nodes.
SampledFunction hls_operator(const SampledFunction& g, double alpha);
// Same quadrature at an arbitrary t >= 0 (g vanishes after its last node).
double hls_evaluate(const SampledFunction& g, double alpha, double t);

// ||g||_{L^r(0, inf)} by the trapezoid rule on |g|^r.
double time_lp_norm(const SampledFunction& g, double r);

struct HlsRatio {
  double f_norm = 0.0;     // ||f||_q including the certified tail
  double g_norm = 0.0;     // ||g||_r
  double f_tail = 0.0;     // part of ||f||_q^q beyond the evaluation grid
  double ratio = 0.0;
};

// ||f||_q / ||g||_r for compactly supported g, with f evaluated on g's nodes,
// on a geometric extension out to 1e8 times the support and an analytic tail
// f(t) <= ||g||_1 (t - S)^(alpha - 1) beyond it. Exponents are not checked.
HlsRatio hls_ratio(const SampledFunction& g, double alpha, double r, double q);

// g -> lambda * g(. / s), nodes dilated by s.
SampledFunction rescale(const SampledFunction& g, double lambda, double s);

// Reports the max ratio over the family and checks invariance under
// amplitude scaling (exact) and time dilation (to 1e-6).
AuditReport hls_bound_audit(const std::vector<SampledFunction>& family, const HlsParams& params);

// Indicator of [0, width] as a piecewise-linear function with a 1e-12 ramp.
SampledFunction indicator_function(double width, double horizon, std::size_t nodes);

// --- interpolation inequality ---------------------------------------------

// ||u||_p <= c ||grad u||_r^theta ||u||_q^(1-theta) with
// 1/p = theta (1/r - 1/2) + (1 - theta)/q; infinity is accepted for p, r.
double gn_relation_defect(double p, double r, double q, double theta);
double gn_ratio(const SpectralVectorField& u, double p, double r, double q, double theta);
AuditReport gn_audit(const std::vector<SpectralVectorField>& family, double p, double r, double q, double theta);

// --- improper time integrals -----------------------------------------------

struct TimeIntegral {
  double truncated = 0.0;  // trapezoid over the samples
  double tail = 0.0;       // certified bound for the part beyond the last sample
  double value = 0.0;      // truncated + tail
  double tail_fraction = 0.0;
  bool flagged = false;    // tail_fraction > kMaxTailFraction

  static constexpr double kMaxTailFraction = 0.05;
};

// int_0^inf s(t)^2 dt from samples of s >= 0 and a tail bound for the
// remainder.
TimeIntegral time_integral_sq_sup(const SampledFunction& series, double tail_bound);
// Plain trapezoid of the samples.
double trapezoid(const std::vector<double>& times, const std::vector<double>& values);

// --- CSV -------------------------------------------------------------------

std::string format_number(double v);
void write_csv(const std::filesystem::path& path, const SampledFunction& f);
SampledFunction read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const std::vector<NormSeries>& series);

}  // namespace ns2d
