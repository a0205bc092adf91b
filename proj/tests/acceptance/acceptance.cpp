// Acceptance run: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ns2d/experiment.hpp"
#include "ns2d/kernels.hpp"
#include "ns2d/rng.hpp"
#include "ns2d/semigroup.hpp"
#include "ns2d/solver.hpp"
#include "ns2d/toolkit.hpp"

using namespace ns2d;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void verdict(int id, bool ok, const std::string& what) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<const AuditReport*> named(const ExperimentResult& res, const std::string& name) {
  std::vector<const AuditReport*> out;
  for (const auto& r : res.reports) {
    if (r.name == name) out.push_back(&r);
  }
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Every file under a matches the file at the same place under b and vice versa.
bool identical_trees(const fs::path& a, const fs::path& b, std::size_t& files) {
  files = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    const fs::path other = b / fs::relative(e.path(), a);
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) return false;
    ++files;
  }
  std::size_t other_files = 0;
  for (const auto& e : fs::recursive_directory_iterator(b)) other_files += e.is_regular_file();
  return files == other_files;
}

void taylor_green_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto tg = run_taylor_green(64, 1e-3, 1.0);
  const double elapsed = seconds_since(t0);
  const double err = *named(tg, "taylor_green_error").front()->lhs;

  const auto order = temporal_order_audit(64, 1.0, {0.02, 0.01}, 12.0);
  const double factor = *order.lhs;

  // Pure Taylor-Green sits at rounding for every dt, so its own ratio says little.
  SolverConfig sc;
  sc.n = 64;
  sc.horizon = 1.0;
  sc.stride = 1000;
  double tg_err[2];
  for (int i = 0; i < 2; ++i) {
    sc.dt = i == 0 ? 1e-3 : 5e-4;
    const auto traj = integrate(taylor_green(sc.grid()), sc);
    tg_err[i] = norm_sup(traj.snapshots.back() - taylor_green_exact(sc.grid(), 1.0, 1.0));
  }

  verdict(1, err <= 1e-8 && factor >= 12.0 && elapsed <= 60.0,
          "Taylor-Green sup error " + fmt("%.3e", err) + " (<= 1e-8), halving factor " + fmt("%.2f", factor) +
              " on perturbed data (>= 12), runtime " + fmt("%.1f s", elapsed) + " (<= 60 s); bare TG ratio " +
              fmt("%.2f", tg_err[0] / tg_err[1]) + " at rounding");
}

void energy_identity() {
  SolverConfig sc;
  sc.n = 128;
  sc.dt = 1e-3;
  sc.horizon = 2.0;
  sc.stride = 10;
  double worst_random = 0.0;
  for (const std::uint64_t seed : {1u, 2u}) {
    for (const double amp : {1.0, 4.0}) {
      const auto u0 = random_solenoidal(sc.grid(), 4.0, seed, amp, Pcg32::stream_id(streams::initial_data, 0));
      const auto rep = energy_identity_audit(integrate(u0, sc), 1e-6);
      worst_random = std::max(worst_random, rep.details.at("max_residual").get<double>());
    }
  }
  const auto tg = run_taylor_green(64, 1e-3, 1.0);
  const double tg_res = named(tg, "energy_identity").front()->details.at("max_residual").get<double>();
  verdict(2, worst_random <= 1e-6 && tg_res <= 1e-8,
          "energy residual " + fmt("%.3e", worst_random) + " on random data at n=128, T=2 (<= 1e-6), " +
              fmt("%.3e", tg_res) + " on Taylor-Green (<= 1e-8)");
}

void hls_closed_forms() {
  const double alpha = 0.25;
  const auto ind = indicator_function(1.0, 4.0, 4000);
  double worst = 0.0;
  for (double t : {0.1, 0.5, 0.999, 1.5, 2.0, 3.7}) {
    const double exact = (std::pow(t, alpha) - (t > 1.0 ? std::pow(t - 1.0, alpha) : 0.0)) / alpha;
    worst = std::max(worst, std::abs(hls_evaluate(ind, alpha, t) - exact));
  }
  std::vector<double> ts, vs;
  for (int i = 0; i <= 200; ++i) {
    ts.push_back(i / 200.0);
    vs.push_back(i / 200.0);
  }
  const auto f = hls_operator(SampledFunction(ts, vs), 0.5);
  for (std::size_t i = 0; i < f.size(); ++i) {
    worst = std::max(worst, std::abs(f.values[i] - 4.0 / 3.0 * std::pow(f.times[i], 1.5)));
  }

  const auto params = HlsParams::from_alpha_r(alpha, 8.0 / 7.0);
  double drift = 0.0;
  double control = 0.0;
  for (const double width : {0.5, 1.0, 2.0}) {
    const auto g = indicator_function(width, 8.0 * width, 4000);
    const double base = hls_ratio(g, params.alpha, params.r, params.q).ratio;
    for (const auto& [lam, s] : {std::pair{3.0, 1.0}, std::pair{1.0, 2.0}, std::pair{0.2, 0.5}}) {
      drift = std::max(drift, std::abs(hls_ratio(rescale(g, lam, s), params.alpha, params.r, params.q).ratio / base - 1.0));
    }
    const double q_broken = params.q + 0.05;
    const double b0 = hls_ratio(g, params.alpha, params.r, q_broken).ratio;
    const double b1 = hls_ratio(rescale(g, 1.0, 2.0), params.alpha, params.r, q_broken).ratio;
    control = std::max(control, std::abs(b1 / b0 - 1.0));
  }
  verdict(5, worst <= 1e-6 && drift <= 1e-6 && control >= 10.0 * 1e-6,
          "closed forms " + fmt("%.2e", worst) + " (<= 1e-6), invariance drift " + fmt("%.2e", drift) +
              " (<= 1e-6), broken-relation dilation shift " + fmt("%.2e", control) + " (>= 1e-5)");
}

void ensemble_criteria(const ExperimentConfig& cfg, const ExperimentResult& res) {
  // 3
  {
    bool ok = !named(res, "decay").empty();
    std::string msg;
    for (const auto* r : named(res, "decay")) {
      const double e = *r->fitted_exponent;
      const double target = r->details.at("target_exponent").get<double>();
      const double c = *r->fitted_constant;
      bool bounded = std::isfinite(c);
      for (const auto& v : r->details.at("pointwise_ratio")) bounded = bounded && v.get<double>() <= c;
      ok = ok && std::abs(e - target) <= 0.05 && bounded;
      msg += "(" + r->params.at("r").get<std::string>() + "," + r->params.at("p").get<std::string>() + ") " +
             fmt("%.3f", e) + " vs " + fmt("%.3f", target) + (bounded ? "" : " unbounded") + "; ";
    }
    verdict(3, ok, "decay exponents " + msg + "pointwise ratio <= fitted c");
  }
  // 4
  {
    bool ok = !named(res, "l1_decay").empty();
    std::string msg;
    for (const auto* r : named(res, "l1_decay")) {
      const double mu = r->details.at("mu").get<double>();
      const double fe = r->details.at("field_exponent").get<double>();
      const double ge = r->details.at("gradient_exponent").get<double>();
      ok = ok && std::abs(fe + mu) <= 0.07 && std::abs(ge + 0.5 + mu) <= 0.07;
      msg += "q=" + r->params.at("q").get<std::string>() + " " + fmt("%.3f", fe) + "/" + fmt("%.3f", ge) + "; ";
    }
    verdict(4, ok, "L1-data exponents field/gradient " + msg + "tolerance 0.07");
  }
  // 6
  {
    const auto dual = named(res, "duality_representation");
    const auto ref = named(res, "duality_refinement");
    bool ok = !dual.empty() && !ref.empty();
    double rel = 0.0;
    double bare = 0.0;
    for (const auto* r : dual) {
      rel = std::max(rel, r->details.at("relative").get<double>());
      if (*r->lhs != 0.0) bare = std::max(bare, r->details.at("discrepancy").get<double>() / std::abs(*r->lhs));
    }
    double order = 0.0;
    if (ok) {
      const auto& orders = ref.front()->details.at("orders");
      order = orders.empty() ? 0.0 : orders.at(0).get<double>();
      for (const auto& o : orders) order = std::min(order, o.get<double>());
      ok = rel <= 1e-4 && order >= 1.8 && ref.front()->status == Status::pass;
    }
    const auto tg = run_taylor_green(64, 1e-3, 1.0);
    const double tg_rel = named(tg, "duality_representation").front()->details.at("relative").get<double>();
    ok = ok && tg_rel <= 1e-8;
    verdict(6, ok, "duality discrepancy " + fmt("%.3e", rel) + " (<= 1e-4, scaled by 1+|lhs|; " + fmt("%.2e", bare) +
                       " against |lhs| alone), refinement order " + fmt("%.3f", order) +
                       " (>= 1.8), Taylor-Green " + fmt("%.2e", tg_rel) + " (<= 1e-8)");
  }
  // 7
  {
    bool ok = true;
    std::size_t rows = 0;
    for (const auto* r : named(res, "proposition_bound")) {
      ok = ok && r->fitted_constant && std::isfinite(*r->fitted_constant);
      ++rows;
    }
    double variation = 0.0;
    for (const auto* r : named(res, "proposition_stability")) {
      variation = std::max(variation, r->details.at("variation").get<double>());
      ok = ok && r->status == Status::pass;
    }
    ok = ok && rows == cfg.seeds.size() * cfg.amplitudes.size() * cfg.p_values.size() && variation <= 0.2;
    verdict(7, ok, std::to_string(rows) + " runs with finite ratio, worst constant variation " + fmt("%.3f", variation) +
                       " (<= 0.2)");
  }
  // 8
  {
    bool ok = !named(res, "perturbation_sup_integral").empty();
    double growth = 0.0;
    double tail = 0.0;
    for (const auto* r : named(res, "perturbation_sup_integral")) {
      growth = std::max(growth, r->details.at("max_growth").get<double>());
      tail = std::max(tail, r->details.at("max_tail_fraction").get<double>());
      ok = ok && r->status == Status::pass && std::isfinite(*r->fitted_constant);
    }
    ok = ok && tail <= 0.05;
    verdict(8, ok, "I(lambda)/lambda^4 growth over the sweep " + fmt("%.3f", growth) + " (<= 1.25), tail fraction " +
                       fmt("%.2e", tail) + " (<= 0.05)");
  }
  // 9
  {
    std::map<std::uint64_t, std::map<double, double>> by_seed;
    bool ok = !res.theorem_rows.empty();
    bool breakdown = true;
    double max_r = 0.0;
    for (const auto& row : res.theorem_rows) {
      by_seed[row.seed][row.amplitude] = row.ratio;
      breakdown = breakdown && row.u.truncated <= 2.0 * row.w.truncated + 2.0 * row.v.truncated;
      ok = ok && std::isfinite(row.ratio) && row.certified;
      max_r = std::max(max_r, row.ratio);
    }
    double growth = 0.0;
    for (const auto& [seed, rows] : by_seed) {
      if (!rows.count(8.0) || !rows.count(4.0)) {
        ok = false;
        continue;
      }
      growth = std::max(growth, rows.at(8.0) / rows.at(4.0));
    }
    ok = ok && breakdown && growth <= 1.25;
    verdict(9, ok, "max R " + fmt("%.4f", max_r) + ", worst R(8)/R(4) " + fmt("%.3f", growth) +
                       " (<= 1.25), breakdown inequality " + (breakdown ? "holds on every row" : "violated"));
  }
}

void determinism(const fs::path& scratch) {
  auto cfg = parse_config(R"(
[grid]
n = 32
[solver]
dt = 0.005
horizon = 4
stride = 4
[ensemble]
seeds = 1, 2
amplitudes = 0.5, 1, 2
sweep_max_amplitude = 2
[stokes_semigroup]
decay_n = 128
l1_n = 256
linear_horizon = 4
[decomposition_duality]
p_values = 6, 8
duality_t = 0.2
refinement_dts = 0.01, 0.005
[inequality_toolkit]
gn_grids = 32, 64
[output]
write_snapshots = true
)");
  const fs::path a = scratch / "det_a";
  const fs::path b = scratch / "det_b";
  fs::remove_all(a);
  fs::remove_all(b);
  cfg.directory = a;
  setenv("NS2D_AUDIT_WORKERS", "1", 1);
  run_experiment(cfg);
  cfg.directory = b;
  setenv("NS2D_AUDIT_WORKERS", "4", 1);
  run_experiment(cfg);
  unsetenv("NS2D_AUDIT_WORKERS");
  std::size_t files = 0;
  const bool same = identical_trees(a, b, files);
  verdict(10, same && files > 0,
          std::to_string(files) + " output files byte-identical across two runs (1 and 4 workers)");
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path config = argc > 1 ? fs::path(argv[1]) : fs::path(NS2D_SOURCE_DIR) / "configs" / "default.ini";
  const fs::path scratch = argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "ns2d_acceptance";
  fs::create_directories(scratch);
  std::printf("simd: %s\n", std::string(kernels::isa_name(kernels::active().isa)).c_str());

  taylor_green_oracle();
  energy_identity();

  auto cfg = load_config(config);
  cfg.directory = scratch / "default";
  const auto t0 = std::chrono::steady_clock::now();
  const auto res = run_experiment(cfg);
  std::printf("default config: %s in %.1f s\n", std::string(status_name(res.status)).c_str(), seconds_since(t0));

  ensemble_criteria(cfg, res);
  hls_closed_forms();
  determinism(scratch);

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
