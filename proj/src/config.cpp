// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

#include "ns2d/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "ns2d/toolkit.hpp"

namespace ns2d {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_plain(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("trailing characters");
  return v;
}

double parse_number(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) throw std::invalid_argument("empty number");
  if (s == "inf" || s == "infinity") return kInf;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    const std::string head = trim(s.substr(0, s.size() - 2));
    return (head.empty() ? 1.0 : parse_number(head)) * std::numbers::pi;
  }
  const auto slash = s.find('/');
  if (slash != std::string::npos) return parse_plain(trim(s.substr(0, slash))) / parse_plain(trim(s.substr(slash + 1)));
  return parse_plain(s);
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw std::invalid_argument("expected true or false");
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  if (trim(s).empty()) return out;
  for (const auto& item : split(s, ',')) out.push_back(parse_number(item));
  return out;
}

int parse_int(const std::string& s) {
  const double v = parse_number(s);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw std::invalid_argument("expected an integer");
  return static_cast<int>(v);
}

std::size_t parse_count(const std::string& s) {
  const int v = parse_int(s);
  if (v < 0) throw std::invalid_argument("expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"grid.n", [](auto& c, const auto& v) { c.solver.n = parse_int(v); }},
      {"grid.length", [](auto& c, const auto& v) { c.solver.length = parse_number(v); }},
      {"grid.dealias_fraction", [](auto& c, const auto& v) { c.solver.dealias_fraction = parse_number(v); }},
      {"solver.dt", [](auto& c, const auto& v) { c.solver.dt = parse_number(v); }},
      {"solver.horizon", [](auto& c, const auto& v) { c.solver.horizon = parse_number(v); }},
      {"solver.stride", [](auto& c, const auto& v) { c.solver.stride = parse_count(v); }},
      {"solver.cfl_safety", [](auto& c, const auto& v) { c.solver.cfl_safety = parse_number(v); }},
      {"solver.nonlinear", [](auto& c, const auto& v) { c.solver.nonlinear = parse_bool(v); }},
      {"ensemble.data", [](auto& c, const auto& v) { c.data = v; }},
      {"ensemble.seeds",
       [](auto& c, const auto& v) {
         c.seeds.clear();
         for (double s : parse_list(v)) {
           if (s < 0 || s != std::floor(s)) throw std::invalid_argument("seeds must be nonnegative integers");
           c.seeds.push_back(static_cast<std::uint64_t>(s));
         }
       }},
      {"ensemble.spectrum_peak", [](auto& c, const auto& v) { c.spectrum_peak = parse_number(v); }},
      {"ensemble.amplitudes", [](auto& c, const auto& v) { c.amplitudes = parse_list(v); }},
      {"ensemble.allow_large_amplitudes", [](auto& c, const auto& v) { c.allow_large_amplitudes = parse_bool(v); }},
      {"ensemble.sweep_max_amplitude", [](auto& c, const auto& v) { c.sweep_max_amplitude = parse_number(v); }},
      {"stokes_semigroup.enabled", [](auto& c, const auto& v) { c.semigroup_enabled = parse_bool(v); }},
      {"stokes_semigroup.decay_pairs",
       [](auto& c, const auto& v) {
         c.decay_pairs.clear();
         for (const auto& item : split(v, ',')) {
           const auto parts = split(item, ':');
           if (parts.size() != 2) throw std::invalid_argument("expected r:p pairs");
           c.decay_pairs.emplace_back(parse_number(parts[0]), parse_number(parts[1]));
         }
       }},
      {"stokes_semigroup.decay_n", [](auto& c, const auto& v) { c.decay_n = parse_int(v); }},
      {"stokes_semigroup.decay_length", [](auto& c, const auto& v) { c.decay_length = parse_number(v); }},
      {"stokes_semigroup.decay_peak", [](auto& c, const auto& v) { c.decay_peak = parse_number(v); }},
      {"stokes_semigroup.decay_t_min", [](auto& c, const auto& v) { c.decay_t_min = parse_number(v); }},
      {"stokes_semigroup.decay_t_max", [](auto& c, const auto& v) { c.decay_t_max = parse_number(v); }},
      {"stokes_semigroup.decay_samples", [](auto& c, const auto& v) { c.decay_samples = parse_count(v); }},
      {"stokes_semigroup.l1_q", [](auto& c, const auto& v) { c.l1_q = parse_list(v); }},
      {"stokes_semigroup.l1_n", [](auto& c, const auto& v) { c.l1_n = parse_int(v); }},
      {"stokes_semigroup.l1_length", [](auto& c, const auto& v) { c.l1_length = parse_number(v); }},
      {"stokes_semigroup.l1_sigma_cells", [](auto& c, const auto& v) { c.l1_sigma_cells = parse_number(v); }},
      {"stokes_semigroup.l1_t_min_sigma2", [](auto& c, const auto& v) { c.l1_t_min_sigma2 = parse_number(v); }},
      {"stokes_semigroup.l1_t_max", [](auto& c, const auto& v) { c.l1_t_max = parse_number(v); }},
      {"stokes_semigroup.l1_samples", [](auto& c, const auto& v) { c.l1_samples = parse_count(v); }},
      {"stokes_semigroup.linear_horizon", [](auto& c, const auto& v) { c.linear_horizon = parse_number(v); }},
      {"stokes_semigroup.linear_tail_tol", [](auto& c, const auto& v) { c.linear_tail_tol = parse_number(v); }},
      {"decomposition_duality.enabled", [](auto& c, const auto& v) { c.duality_enabled = parse_bool(v); }},
      {"decomposition_duality.p_values", [](auto& c, const auto& v) { c.p_values = parse_list(v); }},
      {"decomposition_duality.duality_t", [](auto& c, const auto& v) { c.duality_t = parse_number(v); }},
      {"decomposition_duality.duality_tol", [](auto& c, const auto& v) { c.duality_tol = parse_number(v); }},
      {"decomposition_duality.test_field_peak", [](auto& c, const auto& v) { c.test_field_peak = parse_number(v); }},
      {"decomposition_duality.refinement_dts", [](auto& c, const auto& v) { c.refinement_dts = parse_list(v); }},
      {"decomposition_duality.refinement_stride", [](auto& c, const auto& v) { c.refinement_stride = parse_count(v); }},
      {"decomposition_duality.stability_tol", [](auto& c, const auto& v) { c.stability_tol = parse_number(v); }},
      {"inequality_toolkit.enabled", [](auto& c, const auto& v) { c.toolkit_enabled = parse_bool(v); }},
      {"inequality_toolkit.hls_alpha", [](auto& c, const auto& v) { c.hls_alpha = parse_number(v); }},
      {"inequality_toolkit.hls_r", [](auto& c, const auto& v) { c.hls_r = parse_number(v); }},
      {"inequality_toolkit.hls_widths", [](auto& c, const auto& v) { c.hls_widths = parse_list(v); }},
      {"inequality_toolkit.gn_tuples",
       [](auto& c, const auto& v) {
         c.gn_tuples.clear();
         for (const auto& item : split(v, ',')) {
           const auto parts = split(item, ':');
           if (parts.size() != 4) throw std::invalid_argument("expected p:r:q:theta tuples");
           c.gn_tuples.push_back({parse_number(parts[0]), parse_number(parts[1]), parse_number(parts[2]),
                                  parse_number(parts[3])});
         }
       }},
      {"inequality_toolkit.gn_grids",
       [](auto& c, const auto& v) {
         c.gn_grids.clear();
         for (const auto& item : split(v, ',')) c.gn_grids.push_back(parse_int(item));
       }},
      {"output.directory", [](auto& c, const auto& v) { c.directory = v; }},
      {"output.write_snapshots", [](auto& c, const auto& v) { c.write_snapshots = parse_bool(v); }},
  };
  return table;
}

bool known_section(const std::string& s) {
  return s == "grid" || s == "solver" || s == "ensemble" || s == "stokes_semigroup" || s == "decomposition_duality" ||
         s == "inequality_toolkit" || s == "output";
}

}  // namespace

void ExperimentConfig::validate() const {
  try {
    solver.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("[grid]/[solver]: ") + e.what());
  }
  if (data != "random" && data != "taylor_green" && data != "zero") {
    throw ConfigError("[ensemble] data: expected random, taylor_green or zero");
  }
  if (amplitudes.empty()) throw ConfigError("[ensemble] amplitudes: list must not be empty");
  if (seeds.empty()) throw ConfigError("[ensemble] seeds: list must not be empty");
  for (double a : amplitudes) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw ConfigError("[ensemble] amplitudes: entries must be finite and >= 0");
    if (a > 8.0 && !allow_large_amplitudes) {
      throw ConfigError("[ensemble] amplitudes: values above 8 need allow_large_amplitudes = true");
    }
  }
  if (data == "random" && !(spectrum_peak > 0.0 && spectrum_peak < solver.grid().dealias_cutoff())) {
    throw ConfigError("[ensemble] spectrum_peak: must lie in (0, dealias cutoff)");
  }
  for (double p : p_values) {
    if (!(p > 4.0) || std::isinf(p)) throw ConfigError("[decomposition_duality] p_values: each p must be finite and > 4");
  }
  for (const auto& [r, p] : decay_pairs) {
    if (!(r > 1.0) || !(p >= r)) throw ConfigError("[stokes_semigroup] decay_pairs: need 1 < r <= p");
  }
  for (double q : l1_q) {
    if (!(q > 1.0)) throw ConfigError("[stokes_semigroup] l1_q: each q must exceed 1");
  }
  if (duality_enabled && (!(duality_t > 0.0) || duality_t > solver.horizon)) {
    throw ConfigError("[decomposition_duality] duality_t: must lie in (0, horizon]");
  }
  if (refinement_dts.size() == 1) throw ConfigError("[decomposition_duality] refinement_dts: need 0 or at least 2 values");
  try {
    if (toolkit_enabled) {
      (void)HlsParams::from_alpha_r(hls_alpha, hls_r);
      for (const auto& t : gn_tuples) {
        if (gn_relation_defect(t[0], t[1], t[2], t[3]) > 1e-12) throw std::invalid_argument("gn_tuples: exponent relation violated");
      }
    }
  } catch (const std::exception& e) {
    throw ConfigError(std::string("[inequality_toolkit] ") + e.what());
  }
}

Json ExperimentConfig::to_json() const {
  auto num = [](double v) -> Json {
    if (std::isinf(v)) return "inf";
    return v;
  };
  Json pairs = Json::array();
  for (const auto& [r, p] : decay_pairs) pairs.push_back({num(r), num(p)});
  Json qs = Json::array();
  for (double q : l1_q) qs.push_back(num(q));
  Json gn = Json::array();
  for (const auto& t : gn_tuples) gn.push_back({num(t[0]), num(t[1]), num(t[2]), t[3]});
  return {{"solver", solver.to_json()},
          {"ensemble",
           {{"data", data},
            {"seeds", seeds},
            {"spectrum_peak", spectrum_peak},
            {"amplitudes", amplitudes},
            {"sweep_max_amplitude", sweep_max_amplitude}}},
          {"stokes_semigroup",
           {{"enabled", semigroup_enabled},
            {"decay_pairs", pairs},
            {"decay_n", decay_n},
            {"decay_length", decay_length},
            {"decay_peak", decay_peak},
            {"decay_window", {decay_t_min, decay_t_max}},
            {"l1_q", qs},
            {"l1_n", l1_n},
            {"l1_sigma_cells", l1_sigma_cells},
            {"l1_window", {l1_t_min_sigma2, l1_t_max}},
            {"linear_horizon", linear_horizon}}},
          {"decomposition_duality",
           {{"enabled", duality_enabled},
            {"p_values", p_values},
            {"duality_t", duality_t},
            {"duality_tol", duality_tol},
            {"refinement_dts", refinement_dts},
            {"refinement_stride", refinement_stride}}},
          {"inequality_toolkit",
           {{"enabled", toolkit_enabled},
            {"hls_alpha", hls_alpha},
            {"hls_r", hls_r},
            {"hls_widths", hls_widths},
            {"gn_tuples", gn},
            {"gn_grids", gn_grids}}}};
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  auto fail = [&](const std::string& msg) { throw ConfigError(source + ":" + std::to_string(lineno) + ": " + msg); };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!known_section(section)) fail("unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    if (section.empty()) fail("key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(section + "." + key);
    if (it == setters().end()) fail("unknown key '" + key + "' in [" + section + "]");
    try {
      it->second(cfg, value);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      fail("bad value for '" + key + "': " + e.what());
    }
  }
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

}  // namespace ns2d
