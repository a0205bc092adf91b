// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

// Built with -mavx2 only (no FMA) so every lane operation rounds exactly like
// the scalar reference.

#include <immintrin.h>

#include <algorithm>

#include "ns2d/kernels.hpp"

namespace ns2d::kernels::detail {
namespace {

// (f[i], f[i], f[i+1], f[i+1])
inline __m256d load_pair_duplicated(const double* f) {
  const __m128d w = _mm_loadu_pd(f);
  return _mm256_set_m128d(_mm_unpackhi_pd(w, w), _mm_unpacklo_pd(w, w));
}

void scale_complex(cplx* data, const double* factor, std::size_t n) {
  auto* d = reinterpret_cast<double*>(data);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(d + 2 * i);
    _mm256_storeu_pd(d + 2 * i, _mm256_mul_pd(v, load_pair_duplicated(factor + i)));
  }
  for (; i < n; ++i) {
    d[2 * i] *= factor[i];
    d[2 * i + 1] *= factor[i];
  }
}

void scale_complex_into(cplx* out, const cplx* in, const double* factor, std::size_t n) {
  auto* o = reinterpret_cast<double*>(out);
  const auto* s = reinterpret_cast<const double*>(in);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(s + 2 * i);
    _mm256_storeu_pd(o + 2 * i, _mm256_mul_pd(v, load_pair_duplicated(factor + i)));
  }
  for (; i < n; ++i) {
    o[2 * i] = s[2 * i] * factor[i];
    o[2 * i + 1] = s[2 * i + 1] * factor[i];
  }
}

void axpy_complex(cplx* y, double a, const cplx* x, std::size_t n) {
  auto* yd = reinterpret_cast<double*>(y);
  const auto* xd = reinterpret_cast<const double*>(x);
  const __m256d va = _mm256_set1_pd(a);
  const std::size_t m = 2 * n;
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(xd + i));
    _mm256_storeu_pd(yd + i, _mm256_add_pd(_mm256_loadu_pd(yd + i), prod));
  }
  for (; i < m; ++i) yd[i] += a * xd[i];
}

void project_solenoidal(cplx* c1, cplx* c2, const double* e1, const double* e2, std::size_t n) {
  auto* a = reinterpret_cast<double*>(c1);
  auto* b = reinterpret_cast<double*>(c2);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d w1 = load_pair_duplicated(e1 + i);
    const __m256d w2 = load_pair_duplicated(e2 + i);
    const __m256d va = _mm256_loadu_pd(a + 2 * i);
    const __m256d vb = _mm256_loadu_pd(b + 2 * i);
    const __m256d dot = _mm256_add_pd(_mm256_mul_pd(w1, va), _mm256_mul_pd(w2, vb));
    _mm256_storeu_pd(a + 2 * i, _mm256_sub_pd(va, _mm256_mul_pd(w1, dot)));
    _mm256_storeu_pd(b + 2 * i, _mm256_sub_pd(vb, _mm256_mul_pd(w2, dot)));
  }
  for (; i < n; ++i) {
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
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d w = _mm256_loadu_pd(vort + i);
    _mm256_storeu_pd(out1 + i, _mm256_xor_pd(_mm256_mul_pd(w, _mm256_loadu_pd(u2 + i)), sign));
    _mm256_storeu_pd(out2 + i, _mm256_mul_pd(w, _mm256_loadu_pd(u1 + i)));
  }
  for (; i < n; ++i) {
    out1[i] = -(vort[i] * u2[i]);
    out2[i] = vort[i] * u1[i];
  }
}

double finish(__m256d acc, const double* tail_x, std::size_t start, std::size_t end) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (std::size_t i = start; i < end; ++i) lane[i % 4] += tail_x[i] * tail_x[i];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double sum_squares(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
  }
  return finish(acc, x, i, n);
}

double weighted_norm_sq(const cplx* c, const double* w, std::size_t n) {
  const auto* d = reinterpret_cast<const double*>(c);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(d + 2 * i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(load_pair_duplicated(w + i), _mm256_mul_pd(v, v)));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (std::size_t j = 2 * i; j < 2 * n; ++j) lane[j % 4] += w[j / 2] * (d[j] * d[j]);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double max_magnitude_sq(const double* x, const double* y, std::size_t n) {
  __m256d best = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d vy = _mm256_loadu_pd(y + i);
    best = _mm256_max_pd(best, _mm256_add_pd(_mm256_mul_pd(vx, vx), _mm256_mul_pd(vy, vy)));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, best);
  double m = std::max(std::max(lane[0], lane[1]), std::max(lane[2], lane[3]));
  for (; i < n; ++i) m = std::max(m, x[i] * x[i] + y[i] * y[i]);
  return m;
}

}  // namespace

const Table& avx2_table() {
  static const Table table{Isa::avx2,           scale_complex,      scale_complex_into,
                           axpy_complex,        project_solenoidal, rotational_product,
                           sum_squares,         weighted_norm_sq,   max_magnitude_sq};
  return table;
}

}  // namespace ns2d::kernels::detail
