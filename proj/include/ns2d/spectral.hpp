// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ns2d/grid.hpp"

namespace ns2d {

using cplx = std::complex<double>;

class FieldError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Real samples of a 2-component field on the n x n grid.
struct PhysicalVectorField {
  explicit PhysicalVectorField(Grid g) : grid(std::move(g)), x(grid.size(), 0.0), y(grid.size(), 0.0) {}

  // Samples f(x, y) at the grid points.
  static PhysicalVectorField sample(const Grid& g, const std::function<std::array<double, 2>(double, double)>& f);

  Grid grid;
  std::vector<double> x;
  std::vector<double> y;
};

// Fourier coefficients of a real 2-component field, normalized so that
// f(x) = sum_k c(k) exp(i k.x): a constant field has its value in c(0).
struct SpectralVectorField {
  explicit SpectralVectorField(Grid g) : grid(std::move(g)), c1(grid.size()), c2(grid.size()) {}

  SpectralVectorField& operator+=(const SpectralVectorField& other);
  SpectralVectorField& operator-=(const SpectralVectorField& other);
  SpectralVectorField& operator*=(double s);

  Grid grid;
  std::vector<cplx> c1;
  std::vector<cplx> c2;
};

SpectralVectorField operator+(SpectralVectorField a, const SpectralVectorField& b);
SpectralVectorField operator-(SpectralVectorField a, const SpectralVectorField& b);
SpectralVectorField operator*(double s, SpectralVectorField a);

struct SpectralScalarField {
  explicit SpectralScalarField(Grid g) : grid(std::move(g)), c(grid.size()) {}
  Grid grid;
  std::vector<cplx> c;
};

// Velocity gradient, components ordered d1u1, d2u1, d1u2, d2u2.
struct SpectralTensorField {
  explicit SpectralTensorField(Grid g) : grid(std::move(g)) {
    for (auto& comp : c) comp.assign(grid.size(), cplx{});
  }
  Grid grid;
  std::array<std::vector<cplx>, 4> c;
};

// --- transforms ---------------------------------------------------------

// Throws FieldError on non-finite samples. The result is exactly Hermitian.
SpectralVectorField forward_transform(const PhysicalVectorField& f);
PhysicalVectorField inverse_transform(const SpectralVectorField& f);
SpectralScalarField forward_transform_scalar(const Grid& grid, const std::vector<double>& values);
std::vector<double> inverse_transform_scalar(const SpectralScalarField& f);

// Physical samples of a set of spectral scalars on the (pad * n)^2 grid,
// evaluated from the same trigonometric interpolant.
std::vector<std::vector<double>> evaluate_padded(const Grid& grid, const std::vector<const std::vector<cplx>*>& comps,
                                                 int pad);

// --- projections and calculus -------------------------------------------

SpectralVectorField leray_project(SpectralVectorField f);
void leray_project_inplace(SpectralVectorField& f);
SpectralVectorField dealias(SpectralVectorField f);
void dealias_inplace(SpectralVectorField& f);

SpectralTensorField gradient(const SpectralVectorField& f);
SpectralScalarField divergence(const SpectralVectorField& f);
// d1 u2 - d2 u1
SpectralScalarField vorticity(const SpectralVectorField& f);

// --- norms ---------------------------------------------------------------
// All integrals are over the period box: at L = 2 pi they are integrals over
// [0, 2 pi]^2. |f| is the pointwise Euclidean (Frobenius for tensors)
// magnitude.

// Parseval on the coefficients.
double norm_l2(const SpectralVectorField& f);
// Rectangle-rule quadrature of |f|^p on the collocation grid; p >= 1.
double norm_lp(const SpectralVectorField& f, double p);
double norm_lp(const PhysicalVectorField& f, double p);
// Max of |f| on the 2x zero-padded grid; p = infinity in the lp calls.
double norm_sup(const SpectralVectorField& f);
double norm_grad_l2(const SpectralVectorField& f);
double norm_lp(const SpectralTensorField& g, double p);
double norm_sup(const SpectralTensorField& g);
// Mean-normalized variant (1/|box| integral)^(1/p), used for Holder ordering.
double norm_lp_normalized(const SpectralVectorField& f, double p);

// L2 inner product over the box.
double inner_product(const SpectralVectorField& f, const SpectralVectorField& g);
// l1 norm of the coefficients (Wiener norm); bounds the sup norm from above.
double coefficient_l1(const SpectralVectorField& f);

// --- invariant checks -----------------------------------------------------

// max_k |k_eff . f(k)| / |f(k)| over modes with nonzero k and coefficient.
double solenoidal_defect(const SpectralVectorField& f);
// max_k |f(-k) - conj f(k)| relative to the largest coefficient.
double hermitian_defect(const SpectralVectorField& f);
bool is_solenoidal(const SpectralVectorField& f, double tol = 1e-12);

// --- data generators -----------------------------------------------------

// Mean-zero, solenoidal, Hermitian field supported on the dealiased modes
// with |f(k)| proportional to |k|^3 exp(-|k|^2 / k0^2) and phases drawn from
// Pcg32(seed, stream). Scaled to the requested L2 norm. Throws FieldError if
// k0 is not below the dealias cutoff.
SpectralVectorField random_solenoidal(const Grid& grid, double spectrum_peak, std::uint64_t seed,
                                      double l2_norm = 1.0, std::uint64_t stream = 0);

// (sin x cos y, -cos x sin y) scaled by amplitude, in units where the box
// wavenumber is k_unit (so it is a single |k|^2 = 2 k_unit^2 shell).
SpectralVectorField taylor_green(const Grid& grid, double amplitude = 1.0);

}  // namespace ns2d
