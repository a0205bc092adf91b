// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

#include "ns2d/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ns2d {

Grid::Grid(int n, double length, double dealias_fraction)
    : n_(n), length_(length), dealias_fraction_(dealias_fraction) {
  if (n < 8 || n % 2 != 0) throw GridError("grid: n must be an even integer >= 8, got " + std::to_string(n));
  if (!(length > 0.0) || !std::isfinite(length)) throw GridError("grid: period length must be positive");
  if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0)) {
    throw GridError("grid: dealias fraction must lie in (0, 1]");
  }
  // max(|m1|, |m2|) > fraction * n/2 is removed; the small slack keeps
  // fraction = 1 from dropping the Nyquist line to rounding.
  cutoff_index_ = static_cast<int>(std::floor(dealias_fraction * (n / 2) + 1e-9));

  auto tables = std::make_shared<Tables>();
  const std::size_t total = size();
  for (auto* v : {&tables->kx, &tables->ky, &tables->kx_eff, &tables->ky_eff, &tables->k2, &tables->k2_eff,
                  &tables->ex, &tables->ey, &tables->mask}) {
    v->assign(total, 0.0);
  }
  const double unit = k_unit();
  for (int i = 0; i < n; ++i) {
    const int mi = mode(i);
    for (int j = 0; j < n; ++j) {
      const int mj = mode(j);
      const std::size_t idx = index(i, j);
      const double kx = mi * unit;
      const double ky = mj * unit;
      const double kxe = (mi == n / 2) ? 0.0 : kx;
      const double kye = (mj == n / 2) ? 0.0 : ky;
      tables->kx[idx] = kx;
      tables->ky[idx] = ky;
      tables->kx_eff[idx] = kxe;
      tables->ky_eff[idx] = kye;
      tables->k2[idx] = kx * kx + ky * ky;
      tables->k2_eff[idx] = kxe * kxe + kye * kye;
      const double norm = std::sqrt(tables->k2_eff[idx]);
      if (norm > 0.0) {
        tables->ex[idx] = kxe / norm;
        tables->ey[idx] = kye / norm;
      }
      tables->mask[idx] = (std::max(std::abs(mi), std::abs(mj)) > cutoff_index_) ? 0.0 : 1.0;
    }
  }
  data_ = std::move(tables);
}

}  // namespace ns2d
