// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <span>

namespace ns2d::fft {

using cplx = std::complex<double>;

// Unnormalized 2D DFTs of an n x n row-major array, out of place.
// forward: out[k] = sum_x in[x] exp(-i 2pi k.x / n); inverse uses exp(+...).
// Plans are created once per size (FFTW_ESTIMATE, so the algorithm choice is
// reproducible) and are safe to execute concurrently.
void forward(std::span<const cplx> in, std::span<cplx> out, int n);
void inverse(std::span<const cplx> in, std::span<cplx> out, int n);

}  // namespace ns2d::fft
