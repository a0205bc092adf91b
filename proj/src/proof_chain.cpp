// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

#include "ns2d/proof_chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ns2d {
namespace {

Json link(const char* name, double lhs, double rhs, double constant, bool holds) {
  return {{"link", name}, {"lhs", lhs}, {"rhs", rhs}, {"constant", constant}, {"holds", holds}};
}

}  // namespace

AuditReport proof_chain_audit(const DecompositionRecord& rec, double p) {
  if (!(p > 4.0) || std::isinf(p)) throw ToolkitError("proof_chain_audit: p must be finite and exceed 4");
  AuditReport rep;
  rep.name = "proof_chain";
  rep.params = {{"p", p}, {"n", rec.traj->grid.n()}, {"dt", rec.traj->dt}};

  const auto& times = rec.times();
  const NormSeries& up = rec.lp_series(p);
  const double alpha = 0.5 - 2.0 / p;
  const double r = p / (p - 2.0);
  const double theta = (p - 2.0) / p;
  const double u0 = rec.u_l2.values.front();

  SampledFunction g;
  g.times = times;
  for (double v : up.values) g.values.push_back(v * v);
  const SampledFunction f = hls_operator(g, alpha);

  // 1
  std::vector<double> v2(times.size()), f2(times.size());
  double c1 = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double v = rec.v_at_roundoff ? 0.0 : rec.v_sup.values[i];
    v2[i] = v * v;
    f2[i] = f.values[i] * f.values[i];
    if (f.values[i] > 0.0) c1 = std::max(c1, v / f.values[i]);
  }
  const double lhs1 = std::sqrt(trapezoid(times, v2));
  const double rhs1 = std::sqrt(trapezoid(times, f2));
  const bool ok1 = lhs1 <= c1 * rhs1 * (1.0 + 1e-12) || lhs1 == 0.0;

  // 2
  const HlsRatio h = hls_ratio(g, alpha, r, 2.0);
  const double c2 = h.ratio;
  const bool ok2 = rhs1 <= h.f_norm * (1.0 + 1e-12);

  // 3
  double c3 = 0.0;
  std::vector<double> g_r(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double grad = rec.grad_u_l2.values[i];
    const double l2 = rec.u_l2.values[i];
    const double denom = std::pow(grad, theta) * std::pow(l2, 1.0 - theta);
    if (denom > 0.0) c3 = std::max(c3, up.values[i] / denom);
    g_r[i] = std::pow(g.values[i], r);
  }
  // Stieltjes sum against the integrator's dissipation increments: the
  // trapezoid in t overshoots badly while the gradient still decays fast.
  double lhs4 = 0.0;
  const auto& diss = rec.traj->dissipation;
  const double a = 2.0 / (p - 2.0);
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double e0 = std::pow(rec.u_l2.values[i - 1], 2.0 * a);
    const double e1 = std::pow(rec.u_l2.values[i], 2.0 * a);
    lhs4 += 0.5 * (e0 + e1) * (diss[i] - diss[i - 1]);
  }
  const double g_norm = std::pow(trapezoid(times, g_r), 1.0 / r);
  const double rhs3 = c3 * c3 * std::pow(lhs4, 1.0 / r);
  const bool ok3 = g_norm <= rhs3 * (1.0 + 1e-12) || g_norm == 0.0;

  // 4
  const double rhs4 = 0.5 * std::pow(u0, 2.0 * p / (p - 2.0));
  const bool ok4 = lhs4 <= rhs4 * (1.0 + 1e-6);

  // 5
  const SupIntegrals si = sup_integrals(rec);
  const double big_c = c1 * c2 * c3 * c3 * std::pow(2.0, -(p - 2.0) / p);
  const double lhs5 = si.v.value;
  const double rhs5 = big_c * big_c * std::pow(u0, 4);
  const bool ok5 = lhs5 <= rhs5 * (1.0 + 1e-12) || lhs5 == 0.0;

  Json ledger = Json::array();
  ledger.push_back(link("pointwise_to_fractional", lhs1, rhs1, c1, ok1));
  ledger.push_back(link("fractional_integration", h.f_norm, g_norm, c2, ok2));
  ledger.push_back(link("interpolation", g_norm, std::pow(lhs4, 1.0 / r), c3 * c3, ok3));
  ledger.push_back(link("energy", lhs4, rhs4, 1.0, ok4));
  ledger.push_back(link("quartic", lhs5, std::pow(u0, 4), big_c * big_c, ok5));
  rep.details["ledger"] = std::move(ledger);
  rep.details["c1"] = c1;
  rep.details["c2"] = c2;
  rep.details["c3"] = c3;
  rep.details["chain_constant"] = big_c;
  rep.details["tail_fraction"] = si.v.tail_fraction;
  rep.lhs = lhs5;
  rep.rhs = rhs5;
  rep.fitted_constant = big_c;
  rep.tail_bound = si.v.tail;
  const bool finite = std::isfinite(c1) && std::isfinite(c2) && std::isfinite(c3) && std::isfinite(lhs5);
  rep.status = (finite && ok1 && ok2 && ok3 && ok4 && ok5) ? Status::pass : Status::fail;
  return rep;
}

AuditReport proof_chain_sweep(const std::vector<std::pair<double, AuditReport>>& per_amplitude, double tol) {
  AuditReport rep;
  rep.name = "proof_chain_sweep";
  rep.params = {{"tol", tol}, {"amplitudes", per_amplitude.size()}};
  Status status = Status::pass;
  Json variations = Json::object();
  for (const char* key : {"c1", "c2", "c3"}) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& [lambda, r] : per_amplitude) {
      const double c = r.details.at(key).get<double>();
      if (!(c > 0.0)) continue;
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    const double variation = hi > 0.0 ? hi / lo - 1.0 : 0.0;
    variations[key] = variation;
    if (!(variation <= tol)) status = Status::fail;
  }
  Json rows = Json::array();
  for (const auto& [lambda, r] : per_amplitude) {
    status = combine(status, r.status);
    rows.push_back({{"amplitude", lambda}, {"status", status_name(r.status)}, {"chain_constant", r.details.at("chain_constant")}});
  }
  rep.details["variation"] = std::move(variations);
  rep.details["records"] = std::move(rows);
  rep.status = status;
  return rep;
}

}  // namespace ns2d
