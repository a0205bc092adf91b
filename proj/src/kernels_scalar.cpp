// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

#include "ns2d/kernels.hpp"

#include <algorithm>

namespace ns2d::kernels {
namespace {

void scale_complex(cplx* data, const double* factor, std::size_t n) {
  auto* d = reinterpret_cast<double*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    d[2 * i] *= factor[i];
    d[2 * i + 1] *= factor[i];
  }
}

void scale_complex_into(cplx* out, const cplx* in, const double* factor, std::size_t n) {
  auto* o = reinterpret_cast<double*>(out);
  const auto* s = reinterpret_cast<const double*>(in);
  for (std::size_t i = 0; i < n; ++i) {
    o[2 * i] = s[2 * i] * factor[i];
    o[2 * i + 1] = s[2 * i + 1] * factor[i];
  }
}

void axpy_complex(cplx* y, double a, const cplx* x, std::size_t n) {
  auto* yd = reinterpret_cast<double*>(y);
  const auto* xd = reinterpret_cast<const double*>(x);
  for (std::size_t i = 0; i < 2 * n; ++i) yd[i] += a * xd[i];
}

void project_solenoidal(cplx* c1, cplx* c2, const double* e1, const double* e2, std::size_t n) {
  auto* a = reinterpret_cast<double*>(c1);
  auto* b = reinterpret_cast<double*>(c2);
  for (std::size_t i = 0; i < n; ++i) {
    const double dr = e1[i] * a[2 * i] + e2[i] * b[2 * i];
    const double di = e1[i] * a[2 * i + 1] + e2[i] * b[2 * i + 1];
    a[2 * i] -= e1[i] * dr;
    a[2 * i + 1] -= e1[i] * di;
    b[2 * i] -= e2[i] * dr;
    b[2 * i + 1] -= e2[i] * di;
  }
}

void rotational_product(double* out1, double* out2, const double* vort, const double* u1,
                        const double* u2, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out1[i] = -(vort[i] * u2[i]);
    out2[i] = vort[i] * u1[i];
  }
}

double combine(const double* lane) { return (lane[0] + lane[1]) + (lane[2] + lane[3]); }

double sum_squares(const double* x, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) lane[i % 4] += x[i] * x[i];
  return combine(lane);
}

double weighted_norm_sq(const cplx* c, const double* w, std::size_t n) {
  const auto* d = reinterpret_cast<const double*>(c);
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t j = 0; j < 2 * n; ++j) lane[j % 4] += w[j / 2] * (d[j] * d[j]);
  return combine(lane);
}

double max_magnitude_sq(const double* x, const double* y, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, x[i] * x[i] + y[i] * y[i]);
  return m;
}

}  // namespace

const Table& scalar_table() {
  static const Table table{Isa::scalar,          scale_complex,      scale_complex_into,
                           axpy_complex,         project_solenoidal, rotational_product,
                           sum_squares,          weighted_norm_sq,   max_magnitude_sq};
  return table;
}

}  // namespace ns2d::kernels
