// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>
#include <vector>

#include "ns2d/audit_report.hpp"
#include "ns2d/duality.hpp"

namespace ns2d {

// Ledger of the five inequalities that take ||v||_{L^2 L^inf} down to
// ||u0||_2^2 for one p > 4:
//   1. ||v||_{L^2(0,T) L^inf} <= c1 ||f||_{L^2(0,T)}, f = I_alpha(||u||_p^2),
//      alpha = 1/2 - 2/p
//   2. ||f||_{L^2(0,inf)} <= c2 ||g||_{L^r}, g = ||u||_p^2, r = p/(p-2)
//   3. ||u||_p <= c3 ||grad u||_2^((p-2)/p) ||u||_2^(2/p) pointwise in t
//   4. int ||grad u||^2 ||u||^(4/(p-2)) <= 1/2 ||u0||^(2p/(p-2))  (constant 1)
//   5. int_0^inf ||v||_inf^2 <= C^2 ||u0||^4, C = c1 c2 c3^2 2^(-(p-2)/p)
// c1..c3 are fitted on the record; 4 and 5 are checked as stated.
AuditReport proof_chain_audit(const DecompositionRecord& rec, double p);

// Links 1-3 must keep their constants within tol (max/min - 1) across the
// amplitude sweep, and every record must satisfy 4 and 5.
AuditReport proof_chain_sweep(const std::vector<std::pair<double, AuditReport>>& per_amplitude, double tol = 0.2);

}  // namespace ns2d
