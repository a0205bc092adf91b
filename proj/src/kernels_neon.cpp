// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

// aarch64 variant. Two float64x2 accumulators reproduce the four-lane layout
// of the scalar reductions.

#include <arm_neon.h>

#include <algorithm>

#include "ns2d/kernels.hpp"

namespace ns2d::kernels::detail {
namespace {

void scale_complex(cplx* data, const double* factor, std::size_t n) {
  auto* d = reinterpret_cast<double*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t f = vdupq_n_f64(factor[i]);
    vst1q_f64(d + 2 * i, vmulq_f64(vld1q_f64(d + 2 * i), f));
  }
}

void scale_complex_into(cplx* out, const cplx* in, const double* factor, std::size_t n) {
  auto* o = reinterpret_cast<double*>(out);
  const auto* s = reinterpret_cast<const double*>(in);
  for (std::size_t i = 0; i < n; ++i) {
    vst1q_f64(o + 2 * i, vmulq_f64(vld1q_f64(s + 2 * i), vdupq_n_f64(factor[i])));
  }
}

void axpy_complex(cplx* y, double a, const cplx* x, std::size_t n) {
  auto* yd = reinterpret_cast<double*>(y);
  const auto* xd = reinterpret_cast<const double*>(x);
  const float64x2_t va = vdupq_n_f64(a);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t prod = vmulq_f64(va, vld1q_f64(xd + 2 * i));
    vst1q_f64(yd + 2 * i, vaddq_f64(vld1q_f64(yd + 2 * i), prod));
  }
}

void project_solenoidal(cplx* c1, cplx* c2, const double* e1, const double* e2, std::size_t n) {
  auto* a = reinterpret_cast<double*>(c1);
  auto* b = reinterpret_cast<double*>(c2);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t w1 = vdupq_n_f64(e1[i]);
    const float64x2_t w2 = vdupq_n_f64(e2[i]);
    const float64x2_t va = vld1q_f64(a + 2 * i);
    const float64x2_t vb = vld1q_f64(b + 2 * i);
    const float64x2_t dot = vaddq_f64(vmulq_f64(w1, va), vmulq_f64(w2, vb));
    vst1q_f64(a + 2 * i, vsubq_f64(va, vmulq_f64(w1, dot)));
    vst1q_f64(b + 2 * i, vsubq_f64(vb, vmulq_f64(w2, dot)));
  }
}

void rotational_product(double* out1, double* out2, const double* vort, const double* u1,
                        const double* u2, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t w = vld1q_f64(vort + i);
    vst1q_f64(out1 + i, vnegq_f64(vmulq_f64(w, vld1q_f64(u2 + i))));
    vst1q_f64(out2 + i, vmulq_f64(w, vld1q_f64(u1 + i)));
  }
  for (; i < n; ++i) {
    out1[i] = -(vort[i] * u2[i]);
    out2[i] = vort[i] * u1[i];
  }
}

double sum_squares(const double* x, std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t a = vld1q_f64(x + i);
    const float64x2_t b = vld1q_f64(x + i + 2);
    lo = vaddq_f64(lo, vmulq_f64(a, a));
    hi = vaddq_f64(hi, vmulq_f64(b, b));
  }
  double lane[4];
  vst1q_f64(lane, lo);
  vst1q_f64(lane + 2, hi);
  for (; i < n; ++i) lane[i % 4] += x[i] * x[i];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double weighted_norm_sq(const cplx* c, const double* w, std::size_t n) {
  const auto* d = reinterpret_cast<const double*>(c);
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t a = vld1q_f64(d + 2 * i);
    const float64x2_t b = vld1q_f64(d + 2 * i + 2);
    lo = vaddq_f64(lo, vmulq_f64(vdupq_n_f64(w[i]), vmulq_f64(a, a)));
    hi = vaddq_f64(hi, vmulq_f64(vdupq_n_f64(w[i + 1]), vmulq_f64(b, b)));
  }
  double lane[4];
  vst1q_f64(lane, lo);
  vst1q_f64(lane + 2, hi);
  for (std::size_t j = 2 * i; j < 2 * n; ++j) lane[j % 4] += w[j / 2] * (d[j] * d[j]);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double max_magnitude_sq(const double* x, const double* y, std::size_t n) {
  float64x2_t best = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t vx = vld1q_f64(x + i);
    const float64x2_t vy = vld1q_f64(y + i);
    best = vmaxq_f64(best, vaddq_f64(vmulq_f64(vx, vx), vmulq_f64(vy, vy)));
  }
  double m = std::max(vgetq_lane_f64(best, 0), vgetq_lane_f64(best, 1));
  for (; i < n; ++i) m = std::max(m, x[i] * x[i] + y[i] * y[i]);
  return m;
}

}  // namespace

const Table& neon_table() {
  static const Table table{Isa::neon,           scale_complex,      scale_complex_into,
                           axpy_complex,        project_solenoidal, rotational_product,
                           sum_squares,         weighted_norm_sq,   max_magnitude_sq};
  return table;
}

}  // namespace ns2d::kernels::detail
