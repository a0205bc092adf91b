// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace ns2d {

class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Uniform n x n collocation grid on the periodic square [0, L)^2.
//
// Storage is row-major with the first index along x: entry (i, j) lives at
// i * n + j, physical point (i L / n, j L / n), integer wavenumber pair
// (m(i), m(j)) with m in {-n/2+1, ..., n/2}.
//
// The Nyquist index m = n/2 has no partner of opposite sign. Derivatives and
// the Leray projector use the "effective" wavenumber, which is zero along
// that component, so both stay real-valued. The heat multiplier uses the
// true |k|^2.
class Grid {
 public:
  explicit Grid(int n, double length = 2.0 * std::numbers::pi, double dealias_fraction = 2.0 / 3.0);

  int n() const { return n_; }
  double length() const { return length_; }
  double dealias_fraction() const { return dealias_fraction_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_); }
  double spacing() const { return length_ / n_; }
  double area() const { return length_ * length_; }
  // 2 pi / L, the wavenumber of integer mode 1.
  double k_unit() const { return 2.0 * std::numbers::pi / length_; }
  // Largest retained |m| along an axis after dealiasing.
  int dealias_cutoff_index() const { return cutoff_index_; }
  double dealias_cutoff() const { return cutoff_index_ * k_unit(); }

  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }
  int mode(int i) const { return i <= n_ / 2 ? i : i - n_; }
  // Storage index of integer mode m (|m| < n/2, or m == n/2).
  int slot(int m) const { return m >= 0 ? m : m + n_; }

  // Per-mode tables, size n*n.
  std::span<const double> kx() const { return data_->kx; }
  std::span<const double> ky() const { return data_->ky; }
  std::span<const double> kx_eff() const { return data_->kx_eff; }
  std::span<const double> ky_eff() const { return data_->ky_eff; }
  std::span<const double> k_squared() const { return data_->k2; }
  std::span<const double> k_eff_squared() const { return data_->k2_eff; }
  // Unit effective wave vector, zero where k_eff = 0.
  std::span<const double> unit_x() const { return data_->ex; }
  std::span<const double> unit_y() const { return data_->ey; }
  // 1 on retained modes, 0 on removed ones.
  std::span<const double> dealias_mask() const { return data_->mask; }

  bool operator==(const Grid& other) const {
    return n_ == other.n_ && length_ == other.length_ && dealias_fraction_ == other.dealias_fraction_;
  }

 private:
  struct Tables {
    std::vector<double> kx, ky, kx_eff, ky_eff, k2, k2_eff, ex, ey, mask;
  };

  int n_;
  double length_;
  double dealias_fraction_;
  int cutoff_index_;
  std::shared_ptr<const Tables> data_;
};

}  // namespace ns2d
