// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

// Data-parallel inner loops of the spectral code. Every kernel has a scalar
// reference implementation; SIMD variants are selected at runtime and must
// reproduce the scalar results bit for bit (reductions accumulate into four
// interleaved lanes that are combined as (l0 + l1) + (l2 + l3) everywhere).
namespace ns2d::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

struct Table {
  Isa isa;
  // data[i] *= factor[i]
  void (*scale_complex)(cplx* data, const double* factor, std::size_t n);
  // out[i] = in[i] * factor[i]
  void (*scale_complex_into)(cplx* out, const cplx* in, const double* factor, std::size_t n);
  // y[i] += a * x[i]
  void (*axpy_complex)(cplx* y, double a, const cplx* x, std::size_t n);
  // (c1, c2) -= e * (e . (c1, c2)) with e the unit wave vector (zero at k = 0)
  void (*project_solenoidal)(cplx* c1, cplx* c2, const double* e1, const double* e2, std::size_t n);
  // out = vort * (-u2, u1)
  void (*rotational_product)(double* out1, double* out2, const double* vort, const double* u1,
                             const double* u2, std::size_t n);
  double (*sum_squares)(const double* x, std::size_t n);
  // sum_i w[i] * |c[i]|^2
  double (*weighted_norm_sq)(const cplx* c, const double* w, std::size_t n);
  // max_i x[i]^2 + y[i]^2
  double (*max_magnitude_sq)(const double* x, const double* y, std::size_t n);
};

const Table& scalar_table();
// Variants compiled into this build that the running CPU supports.
std::vector<const Table*> available_tables();
// Chosen once: NS2D_SIMD=scalar|avx2|neon forces a variant, otherwise the
// widest supported one wins.
const Table& active();

inline void scale(std::span<cplx> data, std::span<const double> factor) {
  active().scale_complex(data.data(), factor.data(), data.size());
}
inline void scale_into(std::span<cplx> out, std::span<const cplx> in, std::span<const double> factor) {
  active().scale_complex_into(out.data(), in.data(), factor.data(), out.size());
}
inline void axpy(std::span<cplx> y, double a, std::span<const cplx> x) {
  active().axpy_complex(y.data(), a, x.data(), y.size());
}
inline double sum_squares(std::span<const double> x) { return active().sum_squares(x.data(), x.size()); }
inline double weighted_norm_sq(std::span<const cplx> c, std::span<const double> w) {
  return active().weighted_norm_sq(c.data(), w.data(), c.size());
}
inline double max_magnitude_sq(std::span<const double> x, std::span<const double> y) {
  return active().max_magnitude_sq(x.data(), y.data(), x.size());
}

namespace detail {
#if defined(NS2D_HAVE_AVX2)
const Table& avx2_table();
#endif
#if defined(NS2D_HAVE_NEON)
const Table& neon_table();
#endif
}  // namespace detail

}  // namespace ns2d::kernels
