// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

#include "ns2d/audit_report.hpp"

#include <cmath>
#include <stdexcept>

namespace ns2d {
namespace {

// JSON has no infinities or NaN; those are emitted as strings.
Json number_or_null(const std::optional<double>& v) {
  if (!v) return nullptr;
  if (std::isnan(*v)) return "nan";
  if (std::isinf(*v)) return *v > 0 ? "inf" : "-inf";
  return *v;
}

std::optional<double> read_number(const Json& j) {
  if (j.is_null()) return std::nullopt;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    return NAN;
  }
  return j.get<double>();
}

}  // namespace

std::string_view status_name(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    case Status::inconclusive:
      return "inconclusive";
  }
  return "fail";
}

Status combine(Status a, Status b) {
  if (a == Status::fail || b == Status::fail) return Status::fail;
  if (a == Status::inconclusive || b == Status::inconclusive) return Status::inconclusive;
  return Status::pass;
}

Json AuditReport::to_json() const {
  Json j;
  j["name"] = name;
  j["params"] = params;
  j["lhs"] = number_or_null(lhs);
  j["rhs"] = number_or_null(rhs);
  j["fitted_constant"] = number_or_null(fitted_constant);
  j["fitted_exponent"] = number_or_null(fitted_exponent);
  j["window"] = window ? Json::array({window->first, window->second}) : Json(nullptr);
  j["pass"] = passed();
  j["status"] = status_name(status);
  j["tail_bound"] = number_or_null(tail_bound);
  if (!details.empty()) j["details"] = details;
  return j;
}

AuditReport AuditReport::from_json(const Json& j) {
  AuditReport r;
  r.name = j.at("name").get<std::string>();
  r.params = j.value("params", Json::object());
  r.lhs = read_number(j.value("lhs", Json(nullptr)));
  r.rhs = read_number(j.value("rhs", Json(nullptr)));
  r.fitted_constant = read_number(j.value("fitted_constant", Json(nullptr)));
  r.fitted_exponent = read_number(j.value("fitted_exponent", Json(nullptr)));
  if (j.contains("window") && j["window"].is_array()) {
    r.window = std::make_pair(j["window"][0].get<double>(), j["window"][1].get<double>());
  }
  const auto status = j.value("status", std::string(j.value("pass", false) ? "pass" : "fail"));
  if (status == "pass") {
    r.status = Status::pass;
  } else if (status == "inconclusive") {
    r.status = Status::inconclusive;
  } else if (status == "fail") {
    r.status = Status::fail;
  } else {
    throw std::invalid_argument("audit report: unknown status '" + status + "'");
  }
  r.tail_bound = read_number(j.value("tail_bound", Json(nullptr)));
  r.details = j.value("details", Json::object());
  return r;
}

Status aggregate(const std::vector<AuditReport>& reports) {
  Status s = Status::pass;
  for (const auto& r : reports) s = combine(s, r.status);
  return s;
}

int exit_code(Status s) {
  switch (s) {
    case Status::pass:
      return 0;
    case Status::fail:
      return 1;
    case Status::inconclusive:
      return 2;
  }
  return 1;
}

}  // namespace ns2d
