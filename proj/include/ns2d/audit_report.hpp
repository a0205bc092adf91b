// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace ns2d {

using Json = nlohmann::ordered_json;

// Inconclusive means the numerics could not decide (for example a tail bound
// that is too large), which is distinct from a violated inequality.
enum class Status { pass, fail, inconclusive };

std::string_view status_name(Status s);
// Worst of the two: fail > inconclusive > pass.
Status combine(Status a, Status b);

struct AuditReport {
  std::string name;
  Json params = Json::object();
  std::optional<double> lhs;
  std::optional<double> rhs;
  std::optional<double> fitted_constant;
  std::optional<double> fitted_exponent;
  std::optional<std::pair<double, double>> window;
  Status status = Status::pass;
  std::optional<double> tail_bound;
  // Free-form supporting numbers (series, per-link ledgers, ...).
  Json details = Json::object();

  bool passed() const { return status == Status::pass; }
  Json to_json() const;
  static AuditReport from_json(const Json& j);
};

Status aggregate(const std::vector<AuditReport>& reports);
// 0 pass, 1 fail, 2 inconclusive.
int exit_code(Status s);

}  // namespace ns2d
