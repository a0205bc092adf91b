// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

#include "ns2d/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <thread>

#include "ns2d/proof_chain.hpp"
#include "ns2d/rng.hpp"
#include "ns2d/semigroup.hpp"
#include "ns2d/toolkit.hpp"

namespace ns2d {
namespace {

std::string label(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Runs f(i) for i in [0, count) on `workers` threads. Results land in slot i,
// so the merge order never depends on scheduling.
template <class T, class F>
std::vector<T> parallel_map(std::size_t count, unsigned workers, F f) {
  std::vector<std::optional<T>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned w = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (w == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < w; ++k) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  std::vector<T> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

SpectralVectorField initial_data(const ExperimentConfig& cfg, const Grid& grid, std::uint64_t seed, double amplitude) {
  if (cfg.data == "zero" || amplitude == 0.0) return SpectralVectorField(grid);
  if (cfg.data == "taylor_green") {
    SpectralVectorField u = taylor_green(grid);
    return (amplitude / norm_l2(u)) * u;
  }
  return random_solenoidal(grid, cfg.spectrum_peak, seed, amplitude, Pcg32::stream_id(streams::initial_data, 0));
}

SpectralVectorField test_field(const ExperimentConfig& cfg, const Grid& grid, std::uint64_t seed) {
  const double peak = std::min(cfg.test_field_peak, 0.9 * grid.dealias_cutoff());
  return random_solenoidal(grid, peak, seed, 1.0, Pcg32::stream_id(streams::test_field, 0));
}

struct RunOutput {
  std::uint64_t seed;
  double amplitude;
  AuditReport energy;
  std::vector<AuditReport> proposition;
  std::vector<RatioSeries> ratio_series;
  std::vector<AuditReport> chain;
  TheoremRow row;
  std::vector<NormSeries> norms;
  std::shared_ptr<const Trajectory> traj;
};

RunOutput run_member(const ExperimentConfig& cfg, std::uint64_t seed, double amplitude) {
  const Grid grid = cfg.solver.grid();
  const SpectralVectorField u0 = initial_data(cfg, grid, seed, amplitude);
  auto traj = std::make_shared<const Trajectory>(integrate(u0, cfg.solver));
  RunOutput out{seed, amplitude, energy_identity_audit(*traj), {}, {}, {}, {}, {}, nullptr};
  out.energy.params["seed"] = seed;
  out.energy.params["amplitude"] = amplitude;
  const DecompositionRecord rec = decompose(traj, cfg.p_values);
  for (double p : cfg.p_values) {
    RatioSeries rs;
    AuditReport r = proposition_bound_audit(rec, p, &rs);
    r.params["seed"] = seed;
    r.params["amplitude"] = amplitude;
    out.proposition.push_back(std::move(r));
    out.ratio_series.push_back(std::move(rs));
    AuditReport c = proof_chain_audit(rec, p);
    c.params["seed"] = seed;
    c.params["amplitude"] = amplitude;
    out.chain.push_back(std::move(c));
  }
  out.row = theorem_row(seed, amplitude, rec);
  out.norms = {rec.u_sup, rec.w_sup, rec.v_sup, rec.u_l2, rec.w_l2, rec.v_l2, rec.grad_u_l2};
  for (const auto& s : rec.u_lp) out.norms.push_back(s);
  if (cfg.write_snapshots) out.traj = traj;
  return out;
}

void add_fit_points(std::vector<PlotPoint>& plot, const NormSeries& s, const std::string& series) {
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    if (s.values[i] > 0.0) plot.push_back({std::log(s.times[i]), std::log(s.values[i]), series});
  }
}

void toolkit_audits(const ExperimentConfig& cfg, ExperimentResult& res) {
  const HlsParams params = HlsParams::from_alpha_r(cfg.hls_alpha, cfg.hls_r);
  std::vector<SampledFunction> family;
  const double widest = *std::max_element(cfg.hls_widths.begin(), cfg.hls_widths.end());
  for (double w : cfg.hls_widths) family.push_back(indicator_function(w, 4.0 * widest, 4000));
  res.reports.push_back(hls_bound_audit(family, params));

  for (const auto& t : cfg.gn_tuples) {
    std::vector<SpectralVectorField> fields;
    for (std::size_t i = 0; i < cfg.gn_grids.size(); ++i) {
      const Grid g(cfg.gn_grids[i]);
      const double peak = std::min(4.0, 0.5 * g.dealias_cutoff());
      fields.push_back(random_solenoidal(g, peak, 1000 + i, 1.0, Pcg32::stream_id(streams::synthetic, 0)));
    }
    AuditReport r = gn_audit(fields, t[0], t[1], t[2], t[3]);
    r.params["grids"] = cfg.gn_grids;
    res.reports.push_back(std::move(r));
  }
}

void semigroup_audits(const ExperimentConfig& cfg, ExperimentResult& res) {
  const Grid dgrid(cfg.decay_n, cfg.decay_length);
  for (const auto& [r, p] : cfg.decay_pairs) {
    const SpectralVectorField u0 = concentrated_datum(dgrid, r, cfg.decay_peak);
    DecayAudit a = decay_audit(u0, r, p, cfg.decay_t_min, cfg.decay_t_max, cfg.decay_samples);
    add_fit_points(res.decay_plot, a.series, "r" + label(r) + "_p" + label(p));
    res.reports.push_back(std::move(a.report));
  }
  const Grid lgrid(cfg.l1_n, cfg.l1_length);
  const double sigma = cfg.l1_sigma_cells * lgrid.spacing();
  for (double q : cfg.l1_q) {
    L1DecayAudit a = l1_decay_audit(lgrid, 1.0, sigma, q, cfg.l1_t_min_sigma2 * sigma * sigma, cfg.l1_t_max, cfg.l1_samples);
    add_fit_points(res.decay_plot, a.field_series, "l1_q" + label(q) + "_field");
    add_fit_points(res.decay_plot, a.gradient_series, "l1_q" + label(q) + "_gradient");
    res.reports.push_back(std::move(a.report));
  }
  if (cfg.linear_horizon > 0.0) {
    const Grid grid = cfg.solver.grid();
    SpectralVectorField u0 = initial_data(cfg, grid, cfg.seeds.front(), 1.0);
    if (norm_l2(u0) == 0.0) u0 = random_solenoidal(grid, cfg.spectrum_peak, cfg.seeds.front());
    res.reports.push_back(linear_sup_integral_audit(u0, cfg.linear_horizon, cfg.linear_tail_tol));
  }
}

void duality_audits(const ExperimentConfig& cfg, ExperimentResult& res) {
  const Grid grid = cfg.solver.grid();
  const std::uint64_t seed = cfg.seeds.front();
  SpectralVectorField u0 = initial_data(cfg, grid, seed, 1.0);
  const SpectralVectorField phi0 = test_field(cfg, grid, seed);

  SolverConfig sc = cfg.solver;
  sc.horizon = cfg.duality_t;
  sc.stride = cfg.refinement_stride;
  if (!cfg.refinement_dts.empty()) sc.dt = cfg.refinement_dts.back();
  auto traj = std::make_shared<const Trajectory>(integrate(u0, sc));
  AuditReport check = duality_representation_check(decompose(traj, {}), phi0, cfg.duality_t, cfg.duality_tol);
  check.params["seed"] = seed;
  res.reports.push_back(std::move(check));

  if (cfg.refinement_dts.size() < 2) return;
  const DualityRefinement study = duality_refinement_study(u0, phi0, cfg.duality_t, sc, cfg.refinement_dts);
  AuditReport rep;
  rep.name = "duality_refinement";
  rep.params = {{"t", cfg.duality_t}, {"stride", sc.stride}, {"dts", cfg.refinement_dts}, {"min_order", 1.8}};
  Json levels = Json::array();
  std::size_t at_roundoff = 0;
  for (const auto& l : study.levels) {
    levels.push_back({{"dt", l.dt}, {"lhs", l.lhs}, {"rhs", l.rhs}, {"error", l.error}});
    res.duality_plot.push_back({l.dt, l.error, "error"});
    // Errors at roundoff carry no order information.
    if (l.error <= 1e-13 * (1.0 + std::abs(l.lhs))) ++at_roundoff;
  }
  // Every level exact (Taylor-Green and other data with v = 0) passes
  // outright; a mix cannot be read as an order.
  const bool exact = at_roundoff == study.levels.size();
  const bool resolved = at_roundoff == 0;
  rep.details["at_roundoff"] = exact;
  rep.details["levels"] = std::move(levels);
  rep.details["orders"] = study.orders;
  rep.fitted_exponent = study.min_order;
  rep.lhs = study.levels.back().error;
  if (!std::all_of(study.levels.begin(), study.levels.end(), [](const auto& l) { return std::isfinite(l.error); })) {
    rep.status = Status::fail;
  } else if (exact) {
    rep.status = Status::pass;
  } else if (!resolved) {
    rep.status = Status::inconclusive;
  } else {
    rep.status = study.min_order >= 1.8 ? Status::pass : Status::fail;
  }
  res.reports.push_back(std::move(rep));
}

void write_runs(const std::filesystem::path& dir, const std::vector<RunOutput>& runs, const ExperimentConfig& cfg) {
  for (const auto& run : runs) {
    const auto sub = dir / "runs" / ("seed" + std::to_string(run.seed) + "_amp" + label(run.amplitude));
    std::filesystem::create_directories(sub);
    write_csv(sub / "norms.csv", run.norms);
    for (std::size_t k = 0; k < cfg.p_values.size(); ++k) {
      write_csv(sub / ("proposition_p" + label(cfg.p_values[k]) + ".csv"), run.ratio_series[k]);
    }
    if (run.traj) write_trajectory(sub / "trajectory", *run.traj);
  }
}

void write_plot_file(const std::filesystem::path& path, const std::vector<PlotPoint>& pts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ToolkitError("cannot write " + path.string());
  out << "x,y,series\n";
  for (const auto& p : pts) out << format_number(p.x) << ',' << format_number(p.y) << ',' << p.series << '\n';
}

void write_report(const std::filesystem::path& dir, const ExperimentResult& res, const Json& config) {
  Json j;
  j["config"] = config;
  j["status"] = status_name(res.status);
  j["exit_code"] = exit_code(res.status);
  Json reports = Json::array();
  for (const auto& r : res.reports) reports.push_back(r.to_json());
  j["reports"] = std::move(reports);
  std::ofstream out(dir / "report.json", std::ios::binary);
  if (!out) throw ToolkitError("cannot write " + (dir / "report.json").string());
  out << j.dump(2) << '\n';
}

}  // namespace

TheoremRow theorem_row(std::uint64_t seed, double amplitude, const DecompositionRecord& rec) {
  TheoremRow row;
  row.seed = seed;
  row.amplitude = amplitude;
  row.u0_l2 = rec.u_l2.values.front();
  const SupIntegrals si = sup_integrals(rec);
  row.u = si.u;
  row.w = si.w;
  row.v = si.v;
  row.certified = si.certified;
  row.ratio = row.u0_l2 > 0.0 ? std::sqrt(si.u.value) / ((1.0 + row.u0_l2) * row.u0_l2) : 0.0;
  row.breakdown_holds = si.u.truncated <= 2.0 * si.w.truncated + 2.0 * si.v.truncated;
  return row;
}

AuditReport theorem_ratio_audit(const std::vector<TheoremRow>& rows) {
  if (rows.empty()) throw ToolkitError("theorem_ratio_audit: empty ensemble");
  AuditReport rep;
  rep.name = "theorem_ratio";
  Status status = Status::pass;
  Json table = Json::array();
  double max_r = 0.0;
  std::map<std::uint64_t, std::vector<std::pair<double, double>>> by_seed;
  for (const auto& r : rows) {
    table.push_back({{"seed", r.seed},
                     {"amplitude", r.amplitude},
                     {"u0_l2", r.u0_l2},
                     {"integral", r.u.value},
                     {"tail", r.u.tail},
                     {"ratio", r.ratio},
                     {"w_integral", r.w.value},
                     {"v_integral", r.v.value},
                     {"certified", r.certified},
                     {"breakdown_holds", r.breakdown_holds}});
    if (!std::isfinite(r.ratio) || !r.breakdown_holds) status = Status::fail;
    if (r.u0_l2 > 0.0 && !r.certified) status = combine(status, Status::inconclusive);
    max_r = std::max(max_r, r.ratio);
    if (r.amplitude > 0.0) by_seed[r.seed].emplace_back(r.amplitude, r.ratio);
  }
  Json growth = Json::array();
  double worst = 0.0;
  for (auto& [seed, pts] : by_seed) {
    if (pts.size() < 2) continue;
    std::sort(pts.begin(), pts.end());
    const auto& hi = pts[pts.size() - 1];
    const auto& lo = pts[pts.size() - 2];
    const double g = lo.second > 0.0 ? hi.second / lo.second : 0.0;
    growth.push_back({{"seed", seed}, {"from", lo.first}, {"to", hi.first}, {"growth", g}});
    worst = std::max(worst, g);
    if (!(g <= 1.25)) status = Status::fail;
  }
  rep.params = {{"growth_limit", 1.25}, {"rows", rows.size()}};
  rep.details["rows"] = std::move(table);
  rep.details["growth"] = std::move(growth);
  rep.details["max_ratio"] = max_r;
  rep.fitted_constant = max_r;
  rep.lhs = worst;
  rep.rhs = 1.25;
  rep.status = status;
  return rep;
}

unsigned audit_workers() {
  if (const char* env = std::getenv("NS2D_AUDIT_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_outputs) {
  cfg.validate();
  ExperimentResult res;
  if (cfg.toolkit_enabled) toolkit_audits(cfg, res);
  if (cfg.semigroup_enabled) semigroup_audits(cfg, res);

  struct Job {
    std::uint64_t seed;
    double amplitude;
  };
  std::vector<Job> jobs;
  for (auto seed : cfg.seeds) {
    for (double a : cfg.amplitudes) jobs.push_back({seed, a});
  }
  const std::vector<RunOutput> runs =
      parallel_map<RunOutput>(jobs.size(), audit_workers(), [&](std::size_t i) { return run_member(cfg, jobs[i].seed, jobs[i].amplitude); });

  for (const auto& run : runs) res.reports.push_back(run.energy);

  if (cfg.duality_enabled) {
    for (const auto& run : runs) {
      for (const auto& r : run.proposition) res.reports.push_back(r);
    }
    // Stability per (seed, p) over the sweep amplitudes.
    for (auto seed : cfg.seeds) {
      for (std::size_t k = 0; k < cfg.p_values.size(); ++k) {
        std::vector<std::pair<double, double>> constants;
        for (const auto& run : runs) {
          if (run.seed != seed || run.amplitude > cfg.sweep_max_amplitude) continue;
          constants.emplace_back(run.amplitude, run.proposition[k].fitted_constant.value_or(0.0));
        }
        AuditReport r = constant_stability("proposition_stability", constants, cfg.stability_tol);
        r.params["seed"] = seed;
        r.params["p"] = cfg.p_values[k];
        res.reports.push_back(std::move(r));
      }
      std::vector<PerturbationSample> sweep;
      for (const auto& run : runs) {
        if (run.seed != seed || run.amplitude > cfg.sweep_max_amplitude) continue;
        sweep.push_back({run.amplitude, run.row.v, run.row.certified});
      }
      if (!sweep.empty()) {
        AuditReport r = perturbation_sup_integral_audit(sweep);
        r.params["seed"] = seed;
        res.reports.push_back(std::move(r));
      }
    }
    for (auto seed : cfg.seeds) {
      for (std::size_t k = 0; k < cfg.p_values.size(); ++k) {
        std::vector<std::pair<double, AuditReport>> per;
        for (const auto& run : runs) {
          if (run.seed != seed) continue;
          res.reports.push_back(run.chain[k]);
          per.emplace_back(run.amplitude, run.chain[k]);
        }
        AuditReport r = proof_chain_sweep(per, cfg.stability_tol);
        r.params["seed"] = seed;
        r.params["p"] = cfg.p_values[k];
        res.reports.push_back(std::move(r));
      }
    }
    duality_audits(cfg, res);
  }

  for (const auto& run : runs) {
    res.theorem_rows.push_back(run.row);
    res.ratio_plot.push_back({run.amplitude, run.row.ratio, "seed" + std::to_string(run.seed)});
  }
  res.reports.push_back(theorem_ratio_audit(res.theorem_rows));
  res.status = aggregate(res.reports);

  if (write_outputs) {
    std::filesystem::create_directories(cfg.directory);
    write_runs(cfg.directory, runs, cfg);
    emit_plotdata(cfg.directory, res);
    write_report(cfg.directory, res, cfg.to_json());
  }
  return res;
}

void emit_plotdata(const std::filesystem::path& dir, const ExperimentResult& result) {
  std::filesystem::create_directories(dir);
  write_plot_file(dir / "decay_fits.csv", result.decay_plot);
  write_plot_file(dir / "ratio_vs_amplitude.csv", result.ratio_plot);
  write_plot_file(dir / "duality_refinement.csv", result.duality_plot);
}

SpectralVectorField taylor_green_exact(const Grid& grid, double amplitude, double t) {
  const double k2 = 2.0 * grid.k_unit() * grid.k_unit();
  return std::exp(-k2 * t) * taylor_green(grid, amplitude);
}

ExperimentResult run_taylor_green(int n, double dt, double horizon) {
  ExperimentResult res;
  SolverConfig sc;
  sc.n = n;
  sc.dt = dt;
  sc.horizon = horizon;
  sc.stride = 1;
  const Grid grid = sc.grid();
  const SpectralVectorField u0 = taylor_green(grid);
  auto traj = std::make_shared<const Trajectory>(integrate(u0, sc));

  AuditReport err;
  err.name = "taylor_green_error";
  err.params = {{"n", n}, {"dt", dt}, {"horizon", horizon}};
  const double e = norm_sup(traj->snapshots.back() - taylor_green_exact(grid, 1.0, traj->times.back()));
  err.lhs = e;
  err.rhs = 1e-8;
  err.status = e <= 1e-8 ? Status::pass : Status::fail;
  res.reports.push_back(std::move(err));

  AuditReport energy = energy_identity_audit(*traj, 1e-8);
  res.reports.push_back(std::move(energy));

  const DecompositionRecord rec = decompose(traj, {});
  AuditReport vzero;
  vzero.name = "taylor_green_perturbation";
  double vmax = 0.0;
  for (double v : rec.v_sup.values) vmax = std::max(vmax, v);
  vzero.lhs = vmax;
  vzero.rhs = 1e-8;
  vzero.status = vmax <= 1e-8 ? Status::pass : Status::fail;
  res.reports.push_back(std::move(vzero));

  const SpectralVectorField phi0 = random_solenoidal(grid, 3.0, 1, 1.0, Pcg32::stream_id(streams::test_field, 0));
  const double t = traj->times[traj->times.size() / 2];
  res.reports.push_back(duality_representation_check(rec, phi0, t, 1e-8));
  res.status = aggregate(res.reports);
  return res;
}

AuditReport temporal_order_audit(int n, double horizon, const std::vector<double>& dts, double min_factor) {
  if (dts.size() < 2) throw ToolkitError("temporal_order_audit: need at least two step sizes");
  SolverConfig sc;
  sc.n = n;
  sc.horizon = horizon;
  const Grid grid = sc.grid();
  const SpectralVectorField u0 =
      taylor_green(grid) + random_solenoidal(grid, 3.0, 7, 0.5, Pcg32::stream_id(streams::synthetic, 1));
  auto final_state = [&](double dt) {
    sc.dt = dt;
    sc.stride = sc.steps();
    return integrate(u0, sc).snapshots.back();
  };
  const SpectralVectorField ref = final_state(dts.back() / 4.0);
  AuditReport rep;
  rep.name = "temporal_order";
  rep.params = {{"n", n}, {"horizon", horizon}, {"dts", dts}, {"min_factor", min_factor}};
  std::vector<double> errors;
  for (double dt : dts) errors.push_back(norm_sup(final_state(dt) - ref));
  Json factors = Json::array();
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < errors.size(); ++i) {
    const double f = errors[i - 1] / errors[i];
    factors.push_back(f);
    worst = std::min(worst, f);
  }
  rep.details["errors"] = errors;
  rep.details["factors"] = std::move(factors);
  rep.lhs = worst;
  rep.rhs = min_factor;
  rep.fitted_exponent = std::log2(worst);
  rep.status = worst >= min_factor ? Status::pass : Status::fail;
  return rep;
}

Status status_from_report(const std::filesystem::path& dir) {
  std::ifstream in(dir / "report.json");
  if (!in) throw ToolkitError("cannot read " + (dir / "report.json").string());
  const Json j = Json::parse(in);
  std::vector<AuditReport> reports;
  for (const auto& r : j.at("reports")) reports.push_back(AuditReport::from_json(r));
  return aggregate(reports);
}

}  // namespace ns2d
