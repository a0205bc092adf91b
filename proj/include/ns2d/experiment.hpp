// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ns2d/audit_report.hpp"
#include "ns2d/config.hpp"
#include "ns2d/duality.hpp"

namespace ns2d {

struct TheoremRow {
  std::uint64_t seed = 0;
  double amplitude = 0.0;
  double u0_l2 = 0.0;
  TimeIntegral u, w, v;
  // sqrt(int ||u||_inf^2) / ((1 + ||u0||) ||u0||), 0 for zero data
  double ratio = 0.0;
  bool certified = false;
  // int ||u||^2 <= 2 int ||w||^2 + 2 int ||v||^2 on the truncated integrals
  bool breakdown_holds = false;
};

// One row per (seed, amplitude). Pass iff every row is certified and has a
// finite R, the breakdown inequality holds everywhere, and per seed R at the
// largest amplitude is at most 1.25 times R at the second largest. Missing
// tail certification gives inconclusive. Throws ToolkitError on no rows.
AuditReport theorem_ratio_audit(const std::vector<TheoremRow>& rows);

TheoremRow theorem_row(std::uint64_t seed, double amplitude, const DecompositionRecord& rec);

// Worker count for ensemble runs: NS2D_AUDIT_WORKERS if set and positive,
// else the hardware concurrency.
unsigned audit_workers();

struct PlotPoint {
  double x;
  double y;
  std::string series;
};

struct ExperimentResult {
  std::vector<AuditReport> reports;
  std::vector<TheoremRow> theorem_rows;
  Status status = Status::pass;
  std::vector<PlotPoint> decay_plot;
  std::vector<PlotPoint> ratio_plot;
  std::vector<PlotPoint> duality_plot;
};

// Runs every enabled audit. Writes report.json, per-run CSVs and the plot
// files into config.directory when write_outputs is set.
ExperimentResult run_experiment(const ExperimentConfig& config, bool write_outputs = true);

// "x,y,series" files: decay_fits.csv, ratio_vs_amplitude.csv,
// duality_refinement.csv.
void emit_plotdata(const std::filesystem::path& dir, const ExperimentResult& result);

// Smoke run on Taylor-Green data: error against the exact solution, energy
// identity, v = 0 and the duality check.
ExperimentResult run_taylor_green(int n = 64, double dt = 1e-3, double horizon = 1.0);

// Exact Taylor-Green flow at time t.
SpectralVectorField taylor_green_exact(const Grid& grid, double amplitude, double t);

// Temporal order on Taylor-Green plus a small random perturbation, against a
// reference run at dts.back() / 4. Pass iff each halving of dt cuts the
// error by at least min_factor.
AuditReport temporal_order_audit(int n, double horizon, const std::vector<double>& dts, double min_factor = 12.0);

// Rebuilds the aggregate status from a report.json written by run_experiment.
Status status_from_report(const std::filesystem::path& dir);

}  // namespace ns2d
