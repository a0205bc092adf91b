// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ns2d/audit_report.hpp"
#include "ns2d/solver.hpp"

namespace ns2d {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Experiment description. The text format is
//
//   # comment
//   [section]
//   key = value
//
// Sections: grid, solver, ensemble, stokes_semigroup, decomposition_duality,
// inequality_toolkit, output. Lists are comma-separated. Numbers accept
// "inf", a trailing "pi" factor ("4pi", "0.5pi") and simple fractions
// ("8/7"). Exponent pairs and tuples are colon-separated ("2:inf").
// Unknown sections or keys are errors.
struct ExperimentConfig {
  SolverConfig solver;  // grid fields live here too

  // [ensemble]
  std::string data = "random";  // random | taylor_green | zero
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  double spectrum_peak = 4.0;
  std::vector<double> amplitudes = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  bool allow_large_amplitudes = false;
  // The proposition and perturbation sweeps use amplitudes up to this value.
  double sweep_max_amplitude = 4.0;

  // [stokes_semigroup]
  bool semigroup_enabled = true;
  std::vector<std::pair<double, double>> decay_pairs = {{2.0, std::numeric_limits<double>::infinity()}, {2.0, 4.0}, {2.0, 6.0}};
  int decay_n = 256;
  double decay_length = 4.0 * std::numbers::pi;
  double decay_peak = 20.0;
  double decay_t_min = 1.0 / 400.0;
  double decay_t_max = 0.25;
  std::size_t decay_samples = 16;
  std::vector<double> l1_q = {2.0, 4.0, std::numeric_limits<double>::infinity()};
  int l1_n = 512;
  double l1_length = 2.0 * std::numbers::pi;
  double l1_sigma_cells = 4.0;
  double l1_t_min_sigma2 = 10.0;
  double l1_t_max = 0.25;
  std::size_t l1_samples = 12;
  double linear_horizon = 8.0;
  double linear_tail_tol = 0.05;

  // [decomposition_duality]
  bool duality_enabled = true;
  std::vector<double> p_values = {5.0, 6.0, 8.0, 12.0};
  double duality_t = 0.5;
  double duality_tol = 1e-4;
  double test_field_peak = 3.0;
  std::vector<double> refinement_dts = {4e-3, 2e-3, 1e-3};
  std::size_t refinement_stride = 2;
  double stability_tol = 0.2;

  // [inequality_toolkit]
  bool toolkit_enabled = true;
  double hls_alpha = 0.25;
  double hls_r = 8.0 / 7.0;
  std::vector<double> hls_widths = {0.5, 1.0, 2.0};
  // (p, r, q, theta)
  std::vector<std::array<double, 4>> gn_tuples = {{6.0, 2.0, 2.0, 2.0 / 3.0}, {8.0, 2.0, 2.0, 0.75}};
  std::vector<int> gn_grids = {32, 64, 128};

  // [output]
  std::filesystem::path directory = "audit_out";
  bool write_snapshots = false;

  void validate() const;
  Json to_json() const;
};

ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace ns2d
