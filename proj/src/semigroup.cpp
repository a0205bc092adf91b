// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

#include "ns2d/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ns2d/kernels.hpp"

namespace ns2d {
namespace {

double lp_or_sup(const SpectralVectorField& f, double p) { return std::isinf(p) ? norm_sup(f) : norm_lp(f, p); }

double gradient_lp_or_sup(const SpectralVectorField& f, double p) {
  const SpectralTensorField g = gradient(f);
  return std::isinf(p) ? norm_sup(g) : norm_lp(g, p);
}

double inverse(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

std::string p_label(double p) { return std::isinf(p) ? "inf" : format_number(p); }

}  // namespace

void heat_evolve_inplace(SpectralVectorField& f, double t) {
  if (!(t >= 0.0)) throw FieldError("heat_evolve: t must be >= 0");
  if (t == 0.0) return;
  const auto k2 = f.grid.k_squared();
  std::vector<double> factor(k2.size());
  for (std::size_t i = 0; i < k2.size(); ++i) factor[i] = std::exp(-k2[i] * t);
  kernels::scale(f.c1, factor);
  kernels::scale(f.c2, factor);
}

SpectralVectorField heat_evolve(const SpectralVectorField& f, double t) {
  SpectralVectorField out = f;
  heat_evolve_inplace(out, t);
  return out;
}

NormSeries heat_norm_series(const SpectralVectorField& u0, const std::vector<double>& times, double p) {
  NormSeries s;
  s.kind = "w:lp" + p_label(p);
  s.times = times;
  for (double t : times) s.values.push_back(lp_or_sup(heat_evolve(u0, t), p));
  return s;
}

NormSeries heat_gradient_norm_series(const SpectralVectorField& u0, const std::vector<double>& times, double q) {
  NormSeries s;
  s.kind = "grad_w:lp" + p_label(q);
  s.times = times;
  for (double t : times) s.values.push_back(gradient_lp_or_sup(heat_evolve(u0, t), q));
  return s;
}

std::vector<double> geometric_times(double a, double b, std::size_t n) {
  if (!(a > 0.0) || !(b > a) || n < 2) throw FieldError("geometric_times: need 0 < a < b and n >= 2");
  std::vector<double> t(n);
  const double la = std::log(a);
  const double lb = std::log(b);
  for (std::size_t i = 0; i < n; ++i) t[i] = std::exp(la + (lb - la) * static_cast<double>(i) / static_cast<double>(n - 1));
  t.front() = a;
  t.back() = b;
  return t;
}

std::vector<double> uniform_times(double t_end, std::size_t intervals) {
  std::vector<double> t(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) t[i] = t_end * static_cast<double>(i) / static_cast<double>(intervals);
  return t;
}

SpectralVectorField concentrated_datum(const Grid& grid, double r, double k0) {
  if (!(r >= 1.0) || !(k0 > 0.0)) throw FieldError("concentrated_datum: need r >= 1 and k0 > 0");
  SpectralVectorField f(grid);
  const auto k2 = grid.k_squared();
  const auto mask = grid.dealias_mask();
  const double expo = std::isinf(r) ? -1.0 : (1.0 / r - 1.0);  // |k|^(2/r - 2) = (|k|^2)^(1/r - 1)
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (k2[i] == 0.0 || mask[i] == 0.0) continue;
    f.c1[i] = std::pow(k2[i], expo) * std::exp(-k2[i] / (k0 * k0));
  }
  leray_project_inplace(f);
  const double norm = norm_l2(f);
  if (norm == 0.0) throw FieldError("concentrated_datum: no resolved modes");
  f *= 1.0 / norm;
  return f;
}

SpectralVectorField gaussian_bump(const Grid& grid, double mass, double sigma) {
  if (!(sigma > 0.0)) throw FieldError("gaussian_bump: sigma must be positive");
  SpectralVectorField f(grid);
  const auto k2 = grid.k_squared();
  const double scale = mass / grid.area();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (k2[i] == 0.0) continue;
    f.c1[i] = scale * std::exp(-0.5 * k2[i] * sigma * sigma);
  }
  leray_project_inplace(f);
  return f;
}

DecayAudit decay_audit(const SpectralVectorField& u0, double r, double p, double t_min, double t_max,
                       std::size_t samples) {
  if (!(r > 1.0) || !(p >= r)) throw FieldError("decay_audit: need 1 < r <= p");
  const double k_max = u0.grid.dealias_cutoff();
  const double k_min = u0.grid.k_unit();
  if (!(t_min > 1.0 / (k_max * k_max)) || !(t_max < 1.0 / (k_min * k_min)) || !(t_max > t_min)) {
    throw FieldError("decay_audit: window must lie inside (1/k_max^2, 1/k_min^2)");
  }
  DecayAudit out;
  const double beta = inverse(r) - inverse(p);
  out.series = heat_norm_series(u0, geometric_times(t_min, t_max, samples), p);
  out.fit = powerlaw_fit(out.series.times, out.series.values, t_min, t_max);
  const double u0_norm = lp_or_sup(u0, r);
  Json pointwise = Json::array();
  for (std::size_t i = 0; i < out.series.times.size(); ++i) {
    const double v = out.series.values[i] * std::pow(out.series.times[i], beta) / u0_norm;
    out.envelope = std::max(out.envelope, v);
    pointwise.push_back(v);
  }

  AuditReport& rep = out.report;
  rep.name = "decay";
  rep.params = {{"r", p_label(r)}, {"p", p_label(p)}, {"n", u0.grid.n()}, {"length", u0.grid.length()}, {"samples", samples}};
  rep.fitted_exponent = out.fit.exponent;
  rep.fitted_constant = out.envelope;
  rep.window = std::make_pair(t_min, t_max);
  rep.lhs = out.fit.exponent;
  rep.rhs = -beta;
  rep.details["target_exponent"] = -beta;
  rep.details["fit_prefactor"] = out.fit.constant;
  rep.details["fit_residual"] = out.fit.residual;
  rep.details["fit_reliable"] = out.fit.reliable;
  rep.details["pointwise_ratio"] = std::move(pointwise);
  const bool ok = out.fit.exponent >= -beta - 0.05 && std::isfinite(out.envelope);
  rep.status = ok ? Status::pass : Status::fail;
  return out;
}

L1DecayAudit l1_decay_audit(const Grid& grid, double mass, double sigma, double q, double t_min, double t_max,
                            std::size_t samples) {
  if (!(q > 1.0)) throw FieldError("l1_decay_audit: q must exceed 1");
  if (sigma < 4.0 * grid.spacing() * (1.0 - 1e-12)) throw FieldError("l1_decay_audit: sigma below 4 grid spacings");
  if (!(t_min > sigma * sigma) || !(t_max <= 1.0) || !(t_max > t_min)) {
    throw FieldError("l1_decay_audit: window must lie inside (sigma^2, 1]");
  }
  L1DecayAudit out;
  const SpectralVectorField phi0 = gaussian_bump(grid, mass, sigma);
  const auto times = geometric_times(t_min, t_max, samples);
  out.field_series = heat_norm_series(phi0, times, q);
  out.gradient_series = heat_gradient_norm_series(phi0, times, q);
  out.field_fit = powerlaw_fit(times, out.field_series.values, t_min, t_max);
  out.gradient_fit = powerlaw_fit(times, out.gradient_series.values, t_min, t_max);

  const double mu = 1.0 - inverse(q);
  AuditReport& rep = out.report;
  rep.name = "l1_decay";
  rep.params = {{"q", p_label(q)}, {"mass", mass}, {"sigma", sigma}, {"n", grid.n()}, {"length", grid.length()}};
  rep.window = std::make_pair(t_min, t_max);
  rep.fitted_exponent = out.field_fit.exponent;
  rep.fitted_constant = out.field_fit.constant;
  rep.details["mu"] = mu;
  rep.details["mu1"] = 0.5 + mu;
  rep.details["field_exponent"] = out.field_fit.exponent;
  rep.details["gradient_exponent"] = out.gradient_fit.exponent;
  rep.details["gradient_constant"] = out.gradient_fit.constant;
  rep.details["field_residual"] = out.field_fit.residual;
  rep.details["gradient_residual"] = out.gradient_fit.residual;
  const bool ok = std::abs(out.field_fit.exponent + mu) <= 0.07 && std::abs(out.gradient_fit.exponent + 0.5 + mu) <= 0.07;
  rep.status = ok ? Status::pass : Status::fail;
  return out;
}

double linear_sup_tail(const SpectralVectorField& w_at_T) {
  const double a = coefficient_l1(w_at_T);
  const double m = w_at_T.grid.k_unit() * w_at_T.grid.k_unit();
  return a * a / (2.0 * m);
}

AuditReport linear_sup_integral_audit(const SpectralVectorField& u0, double horizon, double tail_tol,
                                      std::size_t intervals) {
  if (!(horizon > 0.0) || intervals < 2) throw FieldError("linear_sup_integral_audit: bad horizon or sampling");
  AuditReport rep;
  rep.name = "linear_sup_integral";
  rep.params = {{"horizon", horizon}, {"tail_tol", tail_tol}, {"intervals", intervals}, {"n", u0.grid.n()}};

  const auto times = uniform_times(horizon, intervals);
  const double e0 = norm_l2(u0);
  if (e0 == 0.0) {
    rep.lhs = 0.0;
    rep.rhs = 0.0;
    rep.tail_bound = 0.0;
    rep.fitted_constant = 0.0;
    return rep;
  }
  Json sweep = Json::array();
  double base_ratio = 0.0;
  double drift = 0.0;
  TimeIntegral base;
  for (double lambda : {1.0, 0.25, 4.0}) {
    const SpectralVectorField u = lambda * u0;
    SampledFunction sup;
    sup.times = times;
    for (double t : times) sup.values.push_back(norm_sup(heat_evolve(u, t)));
    const TimeIntegral ti = time_integral_sq_sup(sup, linear_sup_tail(heat_evolve(u, horizon)));
    const double l2 = lambda * e0;
    const double ratio = ti.value / (l2 * l2);
    if (lambda == 1.0) {
      base_ratio = ratio;
      base = ti;
    } else {
      drift = std::max(drift, std::abs(ratio / base_ratio - 1.0));
    }
    sweep.push_back({{"lambda", lambda}, {"integral", ti.value}, {"tail", ti.tail}, {"ratio", ratio}});
  }
  rep.lhs = base.value;
  rep.rhs = e0 * e0;
  rep.fitted_constant = base_ratio;
  rep.tail_bound = base.tail;
  rep.details["tail_fraction"] = base.tail_fraction;
  rep.details["amplitude_drift"] = drift;
  rep.details["sweep"] = std::move(sweep);
  if (drift > 1e-10 || !std::isfinite(base_ratio)) {
    rep.status = Status::fail;
  } else if (base.tail_fraction > tail_tol) {
    rep.status = Status::inconclusive;
  }
  return rep;
}

double linear_energy_residual(const SpectralVectorField& u0, double horizon, std::size_t intervals) {
  if (intervals % 2 != 0) ++intervals;
  const auto times = uniform_times(horizon, intervals);
  const double e0 = 0.5 * norm_l2(u0) * norm_l2(u0);
  if (e0 == 0.0) return 0.0;
  std::vector<double> g(times.size());
  std::vector<double> e(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const SpectralVectorField w = heat_evolve(u0, times[i]);
    const double gn = norm_grad_l2(w);
    const double l2 = norm_l2(w);
    g[i] = gn * gn;
    e[i] = 0.5 * l2 * l2;
  }
  const double h = horizon / static_cast<double>(intervals);
  double worst = std::abs(e[0] - e0) / e0;
  double dissipation = 0.0;
  for (std::size_t i = 2; i < times.size(); i += 2) {
    dissipation += h / 3.0 * (g[i - 2] + 4.0 * g[i - 1] + g[i]);
    worst = std::max(worst, std::abs(e[i] + dissipation - e0) / e0);
  }
  return worst;
}

}  // namespace ns2d
