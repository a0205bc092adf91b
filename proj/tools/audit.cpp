// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0
//
// audit run <config> | taylor-green | hls --alpha A --r R | report <dir>
// Exit codes: 0 pass, 1 fail, 2 inconclusive, 3 usage error.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ns2d/config.hpp"
#include "ns2d/experiment.hpp"
#include "ns2d/kernels.hpp"
#include "ns2d/toolkit.hpp"

namespace {

constexpr int kUsage = 3;

void print_summary(const std::vector<ns2d::AuditReport>& reports) {
  for (const auto& r : reports) {
    std::string tag;
    for (const auto& [k, v] : r.params.items()) {
      if (k == "seed" || k == "amplitude" || k == "p" || k == "q" || k == "r") tag += " " + k + "=" + v.dump();
    }
    std::string nums;
    if (r.lhs) nums += " lhs=" + ns2d::format_number(*r.lhs);
    if (r.rhs) nums += " rhs=" + ns2d::format_number(*r.rhs);
    if (r.fitted_constant) nums += " c=" + ns2d::format_number(*r.fitted_constant);
    if (r.fitted_exponent) nums += " exponent=" + ns2d::format_number(*r.fitted_exponent);
    std::printf("%-13s %s%s%s\n", std::string(ns2d::status_name(r.status)).c_str(), r.name.c_str(), tag.c_str(),
                nums.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ns2d audit harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "run every audit selected by a config file");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--out", out_dir, "override the output directory");

  int tg_n = 64;
  double tg_dt = 1e-3;
  double tg_horizon = 1.0;
  auto* tg = app.add_subcommand("taylor-green", "Taylor-Green smoke run");
  tg->add_option("--n", tg_n, "points per axis");
  tg->add_option("--dt", tg_dt, "time step");
  tg->add_option("--horizon", tg_horizon, "final time");

  double alpha = 0.25;
  double r = 8.0 / 7.0;
  double width = 1.0;
  auto* hls = app.add_subcommand("hls", "fractional integration bound on indicator functions");
  hls->add_option("--alpha", alpha, "kernel exponent in (0,1)")->required();
  hls->add_option("--r", r, "input exponent")->required();
  hls->add_option("--width", width, "base indicator width");

  std::string report_dir;
  auto* rep = app.add_subcommand("report", "summarize a report directory");
  rep->add_option("dir", report_dir, "output directory of a previous run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    std::fprintf(stderr, "simd: %s\n", std::string(ns2d::kernels::isa_name(ns2d::kernels::active().isa)).c_str());
    if (*run) {
      ns2d::ExperimentConfig cfg = ns2d::load_config(config_path);
      if (!out_dir.empty()) cfg.directory = out_dir;
      const auto res = ns2d::run_experiment(cfg);
      print_summary(res.reports);
      std::printf("overall: %s (%s)\n", std::string(ns2d::status_name(res.status)).c_str(),
                  cfg.directory.string().c_str());
      return ns2d::exit_code(res.status);
    }
    if (*tg) {
      const auto res = ns2d::run_taylor_green(tg_n, tg_dt, tg_horizon);
      print_summary(res.reports);
      std::printf("overall: %s\n", std::string(ns2d::status_name(res.status)).c_str());
      return ns2d::exit_code(res.status);
    }
    if (*hls) {
      const auto params = ns2d::HlsParams::from_alpha_r(alpha, r);
      std::vector<ns2d::SampledFunction> family;
      for (double w : {0.5 * width, width, 2.0 * width}) family.push_back(ns2d::indicator_function(w, 8.0 * width, 4000));
      const auto a = ns2d::hls_bound_audit(family, params);
      std::cout << a.to_json().dump(2) << '\n';
      return ns2d::exit_code(a.status);
    }
    if (*rep) {
      std::ifstream in(std::filesystem::path(report_dir) / "report.json");
      if (!in) {
        std::fprintf(stderr, "no report.json in %s\n", report_dir.c_str());
        return kUsage;
      }
      const auto j = ns2d::Json::parse(in);
      std::vector<ns2d::AuditReport> reports;
      for (const auto& x : j.at("reports")) reports.push_back(ns2d::AuditReport::from_json(x));
      print_summary(reports);
      const auto s = ns2d::aggregate(reports);
      std::printf("overall: %s\n", std::string(ns2d::status_name(s)).c_str());
      return ns2d::exit_code(s);
    }
  } catch (const ns2d::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid argument: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return kUsage;
}
