#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ns2d/experiment.hpp"

using namespace ns2d;

namespace {

TheoremRow row(std::uint64_t seed, double amplitude, double ratio, bool certified = true) {
  TheoremRow r;
  r.seed = seed;
  r.amplitude = amplitude;
  r.u0_l2 = amplitude;
  r.ratio = ratio;
  r.certified = certified;
  r.breakdown_holds = true;
  return r;
}

AuditReport report(const char* name, Status s) {
  AuditReport r;
  r.name = name;
  r.status = s;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig tiny(const std::filesystem::path& dir) {
  auto cfg = parse_config(R"(
[grid]
n = 32
[solver]
dt = 0.005
horizon = 7
stride = 4
[ensemble]
seeds = 1, 2
spectrum_peak = 3
amplitudes = 0.5, 1, 2
sweep_max_amplitude = 2
[stokes_semigroup]
enabled = false
[decomposition_duality]
p_values = 6
duality_t = 0.2
refinement_dts =
refinement_stride = 1
[inequality_toolkit]
enabled = false
)");
  cfg.directory = dir;
  return cfg;
}

}  // namespace

TEST_CASE("status aggregation with injected failures") {
  std::vector<AuditReport> all = {report("a", Status::pass), report("b", Status::pass)};
  CHECK(aggregate(all) == Status::pass);
  CHECK(exit_code(aggregate(all)) == 0);
  all.push_back(report("c", Status::inconclusive));
  CHECK(aggregate(all) == Status::inconclusive);
  CHECK(exit_code(aggregate(all)) == 2);
  all.push_back(report("d", Status::fail));
  CHECK(aggregate(all) == Status::fail);
  CHECK(exit_code(aggregate(all)) == 1);
  CHECK(aggregate({}) == Status::pass);
}

TEST_CASE("audit report json round trip") {
  AuditReport r = report("x", Status::inconclusive);
  r.params = {{"p", 6}};
  r.lhs = 1.5;
  r.window = std::make_pair(0.1, 0.2);
  const auto j = r.to_json();
  CHECK(j.at("pass") == false);
  for (const char* key : {"name", "params", "lhs", "rhs", "fitted_constant", "fitted_exponent", "window", "pass", "tail_bound"}) {
    CHECK(j.contains(key));
  }
  const auto back = AuditReport::from_json(j);
  CHECK(back.status == Status::inconclusive);
  CHECK(*back.lhs == 1.5);
  CHECK(back.window->second == 0.2);
}

TEST_CASE("theorem ratio verdicts") {
  CHECK_THROWS(theorem_ratio_audit({}));
  std::vector<TheoremRow> flat = {row(1, 1, 0.05), row(1, 4, 0.03), row(1, 8, 0.02)};
  CHECK(theorem_ratio_audit(flat).status == Status::pass);
  auto growing = flat;
  growing.back().ratio = 0.04;
  CHECK(theorem_ratio_audit(growing).status == Status::fail);
  auto uncertified = flat;
  uncertified[1].certified = false;
  CHECK(theorem_ratio_audit(uncertified).status == Status::inconclusive);
  auto broken = flat;
  broken[0].breakdown_holds = false;
  CHECK(theorem_ratio_audit(broken).status == Status::fail);
  CHECK(theorem_ratio_audit({row(1, 0, 0.0, false)}).status == Status::pass);
}

TEST_CASE("zero-amplitude ensemble gives all-zero reports and passes") {
  const auto dir = std::filesystem::temp_directory_path() / "ns2d_zero_run";
  std::filesystem::remove_all(dir);
  auto cfg = parse_config("[ensemble]\namplitudes = 0\nseeds = 1\n[stokes_semigroup]\nenabled = false\n"
                          "[inequality_toolkit]\nenabled = false\n[decomposition_duality]\nrefinement_dts =\n");
  cfg.directory = dir;
  const auto res = run_experiment(cfg);
  CHECK(res.status == Status::pass);
  REQUIRE(res.theorem_rows.size() == 1);
  CHECK(res.theorem_rows[0].ratio == 0.0);
  CHECK(res.theorem_rows[0].u.value == 0.0);
  CHECK(status_from_report(dir) == Status::pass);
  for (const char* f : {"decay_fits.csv", "ratio_vs_amplitude.csv", "duality_refinement.csv"}) {
    std::ifstream in(dir / f);
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,y,series");
  }
}

TEST_CASE("worker count does not change a byte") {
  const auto a = std::filesystem::temp_directory_path() / "ns2d_det_a";
  const auto b = std::filesystem::temp_directory_path() / "ns2d_det_b";
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
  setenv("NS2D_AUDIT_WORKERS", "1", 1);
  const auto ra = run_experiment(tiny(a));
  setenv("NS2D_AUDIT_WORKERS", "3", 1);
  const auto rb = run_experiment(tiny(b));
  unsetenv("NS2D_AUDIT_WORKERS");
  CHECK(ra.status == rb.status);
  std::size_t files = 0;
  for (const auto& e : std::filesystem::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(e.path(), a);
    CAPTURE(rel.string());
    CHECK(slurp(e.path()) == slurp(b / rel));
    ++files;
  }
  CHECK(files > 5);
}

TEST_CASE("tiny ensemble: breakdown inequality on every row") {
  const auto res = run_experiment(tiny(std::filesystem::temp_directory_path() / "ns2d_tiny"), false);
  CHECK(res.theorem_rows.size() == 6);
  for (const auto& r : res.theorem_rows) {
    CHECK(r.breakdown_holds);
    CHECK(r.u.truncated <= 2.0 * r.w.truncated + 2.0 * r.v.truncated);
    CHECK(r.ratio > 0.0);
  }
}

TEST_CASE("taylor-green smoke") {
  const auto res = run_taylor_green(32, 1e-3, 0.2);
  CHECK(res.status == Status::pass);
  CHECK(res.reports.size() == 4);
}

TEST_CASE("worker count from the environment") {
  setenv("NS2D_AUDIT_WORKERS", "5", 1);
  CHECK(audit_workers() == 5);
  setenv("NS2D_AUDIT_WORKERS", "junk", 1);
  CHECK(audit_workers() >= 1);
  unsetenv("NS2D_AUDIT_WORKERS");
}
