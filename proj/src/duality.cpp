// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

#include "ns2d/duality.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "ns2d/semigroup.hpp"

namespace ns2d {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string p_label(double p) { return std::isinf(p) ? "inf" : format_number(p); }

double max_retained_wavenumber(const Grid& g) {
  const double kc = g.dealias_cutoff();
  return std::sqrt(2.0) * kc;
}

std::size_t sample_index(const std::vector<double>& times, double t) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::abs(times[i] - t) <= 1e-12 * std::max(1.0, std::abs(t))) return i;
  }
  throw SolverError("t = " + format_number(t) + " is not a sample time");
}

// int u_i u_j d_i phi_j dx on the collocation grid.
double trilinear(const PhysicalVectorField& u, const std::array<std::vector<double>, 4>& dphi, double cell) {
  double s = 0.0;
  for (std::size_t k = 0; k < u.x.size(); ++k) {
    // dphi ordered d1phi1, d2phi1, d1phi2, d2phi2
    const double u1 = u.x[k];
    const double u2 = u.y[k];
    s += u1 * (u1 * dphi[0][k] + u2 * dphi[2][k]) + u2 * (u1 * dphi[1][k] + u2 * dphi[3][k]);
  }
  return s * cell;
}

std::array<std::vector<double>, 4> physical_gradient(const SpectralVectorField& f) {
  const SpectralTensorField g = gradient(f);
  std::array<std::vector<double>, 4> out;
  for (int c = 0; c < 4; ++c) {
    SpectralScalarField s(f.grid);
    s.c = g.c[c];
    out[c] = inverse_transform_scalar(s);
  }
  return out;
}

}  // namespace

SpectralVectorField DecompositionRecord::w_at(std::size_t i) const { return heat_evolve(u0(), traj->times.at(i)); }

SpectralVectorField DecompositionRecord::v_at(std::size_t i) const { return traj->snapshots.at(i) - w_at(i); }

const NormSeries& DecompositionRecord::lp_series(double p) const {
  for (std::size_t i = 0; i < p_values.size(); ++i) {
    if (p_values[i] == p) return u_lp[i];
  }
  throw SolverError("no ||u||_p series recorded for p = " + p_label(p));
}

DecompositionRecord decompose(std::shared_ptr<const Trajectory> traj, std::vector<double> p_values) {
  if (!traj || traj->snapshots.empty()) throw SolverError("decompose: empty trajectory");
  for (const auto& s : traj->snapshots) {
    if (!(s.grid == traj->grid)) throw SolverError("decompose: snapshot grid mismatch");
  }
  DecompositionRecord rec;
  rec.traj = traj;
  rec.p_values = std::move(p_values);
  rec.u_sup.kind = "u:sup";
  rec.w_sup.kind = "w:sup";
  rec.v_sup.kind = "v:sup";
  rec.u_l2.kind = "u:l2";
  rec.w_l2.kind = "w:l2";
  rec.v_l2.kind = "v:l2";
  rec.grad_u_l2.kind = "grad_u:l2";
  for (double p : rec.p_values) {
    if (!(p >= 1.0)) throw SolverError("decompose: p must be >= 1");
    NormSeries s;
    s.kind = "u:lp" + p_label(p);
    rec.u_lp.push_back(std::move(s));
  }
  std::vector<NormSeries*> all = {&rec.u_sup, &rec.w_sup, &rec.v_sup, &rec.u_l2, &rec.w_l2, &rec.v_l2, &rec.grad_u_l2};
  for (auto& s : rec.u_lp) all.push_back(&s);
  for (auto* s : all) s->times = traj->times;

  const double cell = traj->grid.spacing() * traj->grid.spacing();
  for (std::size_t i = 0; i < traj->times.size(); ++i) {
    const SpectralVectorField& u = traj->snapshots[i];
    const SpectralVectorField w = rec.w_at(i);
    const SpectralVectorField v = u - w;
    rec.u_sup.values.push_back(norm_sup(u));
    rec.w_sup.values.push_back(norm_sup(w));
    rec.v_sup.values.push_back(norm_sup(v));
    rec.u_l2.values.push_back(norm_l2(u));
    rec.w_l2.values.push_back(norm_l2(w));
    rec.v_l2.values.push_back(norm_l2(v));
    rec.grad_u_l2.values.push_back(norm_grad_l2(u));
    if (!rec.p_values.empty()) {
      const PhysicalVectorField phys = inverse_transform(u);
      for (std::size_t k = 0; k < rec.p_values.size(); ++k) {
        const double p = rec.p_values[k];
        if (std::isinf(p)) {
          rec.u_lp[k].values.push_back(rec.u_sup.values.back());
          continue;
        }
        double s = 0.0;
        for (std::size_t j = 0; j < phys.x.size(); ++j) s += std::pow(phys.x[j] * phys.x[j] + phys.y[j] * phys.y[j], 0.5 * p);
        rec.u_lp[k].values.push_back(std::pow(s * cell, 1.0 / p));
      }
    }
    rec.max_v_solenoidal_defect = std::max(rec.max_v_solenoidal_defect, solenoidal_defect(v));
    if (i == 0) {
      const double base = rec.u_l2.values.front();
      rec.v0_defect = base > 0.0 ? rec.v_l2.values.front() / base : rec.v_l2.values.front();
    }
    if (i + 1 == traj->times.size()) {
      rec.wiener_u_end = coefficient_l1(u);
      rec.wiener_w_end = coefficient_l1(w);
      rec.wiener_v_end = coefficient_l1(v);
    }
  }
  const double u_max = *std::max_element(rec.u_sup.values.begin(), rec.u_sup.values.end());
  const double v_max = *std::max_element(rec.v_sup.values.begin(), rec.v_sup.values.end());
  rec.v_at_roundoff = v_max <= 1e-10 * u_max;
  return rec;
}

double nonlinear_sup_tail(double wiener_at_T, const Grid& grid) {
  const double m = grid.k_unit() * grid.k_unit();
  const double big_k = max_retained_wavenumber(grid);
  const double x = big_k * wiener_at_T / m;
  if (x >= 1.0) return kInf;
  return wiener_at_T * wiener_at_T / (2.0 * m * (1.0 - x) * (1.0 - x));
}

double perturbation_sup_tail(double wiener_v_at_T, double wiener_u_at_T, const Grid& grid) {
  const double m = grid.k_unit() * grid.k_unit();
  const double big_k = max_retained_wavenumber(grid);
  const double x = big_k * wiener_u_at_T / m;
  if (x >= 1.0) return kInf;
  const double abar = wiener_u_at_T / (1.0 - x);
  const double amp = wiener_v_at_T + big_k * abar * abar / m;
  return amp * amp / (2.0 * m);
}

SupIntegrals sup_integrals(const DecompositionRecord& rec) {
  SupIntegrals out;
  const Grid& g = rec.traj->grid;
  const double tail_u = rec.traj->config.nonlinear ? nonlinear_sup_tail(rec.wiener_u_end, g)
                                                   : linear_sup_tail(rec.traj->snapshots.back());
  const double tail_w = rec.wiener_w_end * rec.wiener_w_end / (2.0 * g.k_unit() * g.k_unit());
  const double tail_v = rec.traj->config.nonlinear ? perturbation_sup_tail(rec.wiener_v_end, rec.wiener_u_end, g)
                                                   : rec.wiener_v_end * rec.wiener_v_end / (2.0 * g.k_unit() * g.k_unit());
  out.u = time_integral_sq_sup(rec.u_sup.as_function(), tail_u);
  out.w = time_integral_sq_sup(rec.w_sup.as_function(), tail_w);
  if (rec.v_at_roundoff) {
    out.v = TimeIntegral{};
  } else {
    out.v = time_integral_sq_sup(rec.v_sup.as_function(), tail_v);
  }
  const double e0 = rec.u_l2.values.front();
  const double e1 = rec.u_l2.values.back();
  out.energy_fraction_end = e0 > 0.0 ? (e1 * e1) / (e0 * e0) : 0.0;
  out.certified = out.energy_fraction_end <= 1e-6 && std::isfinite(tail_u) && std::isfinite(tail_v);
  return out;
}

AuditReport duality_representation_check(const DecompositionRecord& rec, const SpectralVectorField& phi0, double t,
                                         double tol) {
  const auto& times = rec.times();
  const std::size_t idx = sample_index(times, t);
  if (!(phi0.grid == rec.traj->grid)) throw SolverError("duality check: test field on a different grid");
  AuditReport rep;
  rep.name = "duality_representation";
  rep.params = {{"t", t}, {"tol", tol}, {"n", rec.traj->grid.n()}, {"dt", rec.traj->dt}, {"stride", rec.traj->config.stride}};

  const double lhs = inner_product(rec.v_at(idx), phi0);
  const double cell = rec.traj->grid.spacing() * rec.traj->grid.spacing();
  std::vector<double> tau(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(idx) + 1);
  std::vector<double> integrand(tau.size());
  for (std::size_t j = 0; j <= idx; ++j) {
    const PhysicalVectorField u = inverse_transform(rec.traj->snapshots[j]);
    integrand[j] = trilinear(u, physical_gradient(heat_evolve(phi0, t - tau[j])), cell);
  }
  const double rhs = trapezoid(tau, integrand);
  const double diff = std::abs(lhs - rhs);
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.details["discrepancy"] = diff;
  rep.details["relative"] = diff / (1.0 + std::abs(lhs));
  rep.status = diff <= tol * (1.0 + std::abs(lhs)) ? Status::pass : Status::fail;
  return rep;
}

DualityRefinement duality_refinement_study(const SpectralVectorField& u0, const SpectralVectorField& phi0, double t,
                                           SolverConfig base, const std::vector<double>& dts) {
  DualityRefinement out;
  base.horizon = t;
  for (double dt : dts) {
    base.dt = dt;
    auto traj = std::make_shared<const Trajectory>(integrate(u0, base));
    const DecompositionRecord rec = decompose(traj, {});
    const AuditReport rep = duality_representation_check(rec, phi0, t, kInf);
    out.levels.push_back({dt, base.stride, *rep.lhs, *rep.rhs, std::abs(*rep.lhs - *rep.rhs)});
  }
  for (std::size_t i = 1; i < out.levels.size(); ++i) {
    const auto& a = out.levels[i - 1];
    const auto& b = out.levels[i];
    out.orders.push_back(std::log(a.error / b.error) / std::log(a.dt / b.dt));
  }
  out.min_order = out.orders.empty() ? 0.0 : *std::min_element(out.orders.begin(), out.orders.end());
  return out;
}

void write_csv(const std::filesystem::path& path, const RatioSeries& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ToolkitError("cannot write " + path.string());
  out << "t,lhs,rhs,ratio\n";
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    out << format_number(s.t[i]) << ',' << format_number(s.lhs[i]) << ',' << format_number(s.rhs[i]) << ','
        << format_number(s.ratio[i]) << '\n';
  }
}

AuditReport proposition_bound_audit(const DecompositionRecord& rec, double p, RatioSeries* series) {
  if (!(p > 4.0)) throw ToolkitError("proposition_bound_audit: p must exceed 4");
  const NormSeries& up = rec.lp_series(p);
  AuditReport rep;
  rep.name = "proposition_bound";
  rep.params = {{"p", p_label(p)}, {"n", rec.traj->grid.n()}, {"dt", rec.traj->dt}};

  const double alpha = 0.5 - 2.0 / p;
  SampledFunction g;
  g.times = up.times;
  for (double v : up.values) g.values.push_back(v * v);
  const SampledFunction f = hls_operator(g, alpha);

  double max_ratio = 0.0;
  double at = 0.0;
  RatioSeries local;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double lhs = rec.v_at_roundoff ? 0.0 : rec.v_sup.values[i];
    const double rhs = f.values[i];
    if (!(rhs > 0.0)) continue;
    const double ratio = lhs / rhs;
    local.t.push_back(f.times[i]);
    local.lhs.push_back(lhs);
    local.rhs.push_back(rhs);
    local.ratio.push_back(ratio);
    if (ratio > max_ratio) {
      max_ratio = ratio;
      at = f.times[i];
    }
  }
  rep.fitted_constant = max_ratio;
  rep.details["argmax_t"] = at;
  rep.details["alpha"] = alpha;
  rep.details["v_at_roundoff"] = rec.v_at_roundoff;
  rep.status = std::isfinite(max_ratio) ? Status::pass : Status::fail;
  if (series != nullptr) *series = std::move(local);
  return rep;
}

AuditReport constant_stability(const std::string& name, const std::vector<std::pair<double, double>>& constants,
                               double tol) {
  AuditReport rep;
  rep.name = name;
  rep.params = {{"tol", tol}};
  double lo = kInf;
  double hi = 0.0;
  Json rows = Json::array();
  bool finite = true;
  for (const auto& [lambda, c] : constants) {
    rows.push_back({{"amplitude", lambda}, {"constant", c}});
    if (!std::isfinite(c)) finite = false;
    if (!(c > 0.0)) continue;
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  const double variation = (hi > 0.0) ? hi / lo - 1.0 : 0.0;
  rep.fitted_constant = hi;
  rep.details["constants"] = std::move(rows);
  rep.details["variation"] = variation;
  rep.status = (finite && variation <= tol) ? Status::pass : Status::fail;
  return rep;
}

AuditReport perturbation_sup_integral_audit(const std::vector<PerturbationSample>& sweep) {
  if (sweep.empty()) throw ToolkitError("perturbation_sup_integral_audit: empty sweep");
  AuditReport rep;
  rep.name = "perturbation_sup_integral";
  std::vector<PerturbationSample> sorted = sweep;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.amplitude < b.amplitude; });
  Json rows = Json::array();
  double s0 = -1.0;
  double worst = 0.0;
  double max_s = 0.0;
  bool certified = true;
  double max_tail_fraction = 0.0;
  for (const auto& smp : sorted) {
    const double lam4 = std::pow(smp.amplitude, 4);
    const double s = lam4 > 0.0 ? smp.integral.value / lam4 : 0.0;
    rows.push_back({{"amplitude", smp.amplitude},
                    {"integral", smp.integral.value},
                    {"tail", smp.integral.tail},
                    {"tail_fraction", smp.integral.tail_fraction},
                    {"scaled", s}});
    if (smp.amplitude == 0.0 || smp.integral.value == 0.0) continue;
    if (!smp.certified || smp.integral.flagged) certified = false;
    max_tail_fraction = std::max(max_tail_fraction, smp.integral.tail_fraction);
    if (s0 < 0.0) s0 = s;
    worst = std::max(worst, s / s0);
    max_s = std::max(max_s, s);
  }
  rep.params = {{"amplitudes", sorted.size()}};
  rep.fitted_constant = max_s;
  rep.details["sweep"] = std::move(rows);
  rep.details["max_growth"] = worst;
  rep.details["max_tail_fraction"] = max_tail_fraction;
  if (!std::isfinite(max_s) || worst > 1.25) {
    rep.status = Status::fail;
  } else if (!certified) {
    rep.status = Status::inconclusive;
  }
  return rep;
}

}  // namespace ns2d
