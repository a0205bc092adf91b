// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

#include "ns2d/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ns2d/fft.hpp"
#include "ns2d/kernels.hpp"
#include "ns2d/rng.hpp"

namespace ns2d {
namespace {

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw FieldError("fields live on different grids");
}

std::span<const double> as_doubles(const std::vector<cplx>& v) {
  return {reinterpret_cast<const double*>(v.data()), 2 * v.size()};
}

// Splits Z = X + iY (X, Y Hermitian coefficient arrays) back into X and Y.
void split_pair(const Grid& g, const std::vector<cplx>& z, std::vector<cplx>& a, std::vector<cplx>& b) {
  const int n = g.n();
  const cplx half_minus_i{0.0, -0.5};
  for (int i = 0; i < n; ++i) {
    const int ni = (n - i) % n;
    for (int j = 0; j < n; ++j) {
      const int nj = (n - j) % n;
      const cplx zk = z[g.index(i, j)];
      const cplx zm = std::conj(z[g.index(ni, nj)]);
      a[g.index(i, j)] = 0.5 * (zk + zm);
      b[g.index(i, j)] = half_minus_i * (zk - zm);
    }
  }
}

// Forward transform of two real arrays at once, normalized coefficients.
void forward_pair(const Grid& g, const std::vector<double>& x, const std::vector<double>& y, std::vector<cplx>& a,
                  std::vector<cplx>& b) {
  const std::size_t total = g.size();
  std::vector<cplx> z(total);
  for (std::size_t i = 0; i < total; ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw FieldError("forward_transform: non-finite sample");
    z[i] = cplx{x[i], y[i]};
  }
  std::vector<cplx> zhat(total);
  fft::forward(z, zhat, g.n());
  const double inv = 1.0 / static_cast<double>(total);
  for (auto& v : zhat) v *= inv;
  split_pair(g, zhat, a, b);
}

void inverse_pair(const Grid& g, const std::vector<cplx>& a, const std::vector<cplx>& b, std::vector<double>& x,
                  std::vector<double>& y) {
  const std::size_t total = g.size();
  std::vector<cplx> z(total);
  for (std::size_t i = 0; i < total; ++i) z[i] = a[i] + cplx{-b[i].imag(), b[i].real()};
  std::vector<cplx> out(total);
  fft::inverse(z, out, g.n());
  for (std::size_t i = 0; i < total; ++i) {
    x[i] = out[i].real();
    y[i] = out[i].imag();
  }
}

double lp_from_samples(const Grid& g, double p, const std::function<double(std::size_t)>& magnitude_sq) {
  if (!(p >= 1.0)) throw FieldError("norm_lp: p must be >= 1");
  const double cell = g.spacing() * g.spacing();
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) sum += std::pow(magnitude_sq(i), 0.5 * p);
  return std::pow(sum * cell, 1.0 / p);
}

}  // namespace

PhysicalVectorField PhysicalVectorField::sample(const Grid& g,
                                                const std::function<std::array<double, 2>(double, double)>& f) {
  PhysicalVectorField out(g);
  const double h = g.spacing();
  for (int i = 0; i < g.n(); ++i) {
    for (int j = 0; j < g.n(); ++j) {
      const auto v = f(i * h, j * h);
      out.x[g.index(i, j)] = v[0];
      out.y[g.index(i, j)] = v[1];
    }
  }
  return out;
}

SpectralVectorField& SpectralVectorField::operator+=(const SpectralVectorField& other) {
  require_same_grid(grid, other.grid);
  kernels::axpy(c1, 1.0, other.c1);
  kernels::axpy(c2, 1.0, other.c2);
  return *this;
}

SpectralVectorField& SpectralVectorField::operator-=(const SpectralVectorField& other) {
  require_same_grid(grid, other.grid);
  kernels::axpy(c1, -1.0, other.c1);
  kernels::axpy(c2, -1.0, other.c2);
  return *this;
}

SpectralVectorField& SpectralVectorField::operator*=(double s) {
  for (auto& v : c1) v *= s;
  for (auto& v : c2) v *= s;
  return *this;
}

SpectralVectorField operator+(SpectralVectorField a, const SpectralVectorField& b) { return a += b; }
SpectralVectorField operator-(SpectralVectorField a, const SpectralVectorField& b) { return a -= b; }
SpectralVectorField operator*(double s, SpectralVectorField a) { return a *= s; }

SpectralVectorField forward_transform(const PhysicalVectorField& f) {
  SpectralVectorField out(f.grid);
  forward_pair(f.grid, f.x, f.y, out.c1, out.c2);
  return out;
}

PhysicalVectorField inverse_transform(const SpectralVectorField& f) {
  PhysicalVectorField out(f.grid);
  inverse_pair(f.grid, f.c1, f.c2, out.x, out.y);
  return out;
}

SpectralScalarField forward_transform_scalar(const Grid& grid, const std::vector<double>& values) {
  SpectralScalarField out(grid);
  std::vector<cplx> unused(grid.size());
  forward_pair(grid, values, std::vector<double>(grid.size(), 0.0), out.c, unused);
  return out;
}

std::vector<double> inverse_transform_scalar(const SpectralScalarField& f) {
  std::vector<double> x(f.grid.size()), y(f.grid.size());
  inverse_pair(f.grid, f.c, std::vector<cplx>(f.grid.size()), x, y);
  return x;
}

std::vector<std::vector<double>> evaluate_padded(const Grid& grid, const std::vector<const std::vector<cplx>*>& comps,
                                                 int pad) {
  const int n = grid.n();
  const int m = pad * n;
  const std::size_t total = static_cast<std::size_t>(m) * m;
  auto padded_slots = [&](int i, int* slots, double* weights) {
    const int mode = grid.mode(i);
    if (mode == n / 2 && pad > 1) {
      slots[0] = n / 2;
      slots[1] = m - n / 2;
      weights[0] = weights[1] = 0.5;
      return 2;
    }
    slots[0] = mode >= 0 ? mode : mode + m;
    weights[0] = 1.0;
    return 1;
  };

  std::vector<std::vector<double>> out;
  out.reserve(comps.size());
  for (std::size_t c = 0; c < comps.size(); c += 2) {
    const std::vector<cplx>& a = *comps[c];
    const std::vector<cplx>* b = (c + 1 < comps.size()) ? comps[c + 1] : nullptr;
    std::vector<cplx> z(total);
    for (int i = 0; i < n; ++i) {
      int si[2], sj[2];
      double wi[2], wj[2];
      const int ci = padded_slots(i, si, wi);
      for (int j = 0; j < n; ++j) {
        const int cj = padded_slots(j, sj, wj);
        const std::size_t src = grid.index(i, j);
        cplx value = a[src];
        if (b != nullptr) value += cplx{-(*b)[src].imag(), (*b)[src].real()};
        for (int p = 0; p < ci; ++p) {
          for (int q = 0; q < cj; ++q) {
            z[static_cast<std::size_t>(si[p]) * m + sj[q]] += (wi[p] * wj[q]) * value;
          }
        }
      }
    }
    std::vector<cplx> phys(total);
    fft::inverse(z, phys, m);
    std::vector<double> re(total), im(total);
    for (std::size_t i = 0; i < total; ++i) {
      re[i] = phys[i].real();
      im[i] = phys[i].imag();
    }
    out.push_back(std::move(re));
    if (b != nullptr) out.push_back(std::move(im));
  }
  return out;
}

void leray_project_inplace(SpectralVectorField& f) {
  kernels::active().project_solenoidal(f.c1.data(), f.c2.data(), f.grid.unit_x().data(), f.grid.unit_y().data(),
                                       f.c1.size());
}

SpectralVectorField leray_project(SpectralVectorField f) {
  leray_project_inplace(f);
  return f;
}

void dealias_inplace(SpectralVectorField& f) {
  kernels::scale(f.c1, f.grid.dealias_mask());
  kernels::scale(f.c2, f.grid.dealias_mask());
}

SpectralVectorField dealias(SpectralVectorField f) {
  dealias_inplace(f);
  return f;
}

SpectralTensorField gradient(const SpectralVectorField& f) {
  SpectralTensorField g(f.grid);
  const auto kx = f.grid.kx_eff();
  const auto ky = f.grid.ky_eff();
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    const cplx ikx{0.0, kx[i]};
    const cplx iky{0.0, ky[i]};
    g.c[0][i] = ikx * f.c1[i];
    g.c[1][i] = iky * f.c1[i];
    g.c[2][i] = ikx * f.c2[i];
    g.c[3][i] = iky * f.c2[i];
  }
  return g;
}

SpectralScalarField divergence(const SpectralVectorField& f) {
  SpectralScalarField d(f.grid);
  const auto kx = f.grid.kx_eff();
  const auto ky = f.grid.ky_eff();
  for (std::size_t i = 0; i < f.grid.size(); ++i) d.c[i] = cplx{0.0, 1.0} * (kx[i] * f.c1[i] + ky[i] * f.c2[i]);
  return d;
}

SpectralScalarField vorticity(const SpectralVectorField& f) {
  SpectralScalarField w(f.grid);
  const auto kx = f.grid.kx_eff();
  const auto ky = f.grid.ky_eff();
  for (std::size_t i = 0; i < f.grid.size(); ++i) w.c[i] = cplx{0.0, 1.0} * (kx[i] * f.c2[i] - ky[i] * f.c1[i]);
  return w;
}

double norm_l2(const SpectralVectorField& f) {
  const double s = kernels::sum_squares(as_doubles(f.c1)) + kernels::sum_squares(as_doubles(f.c2));
  return f.grid.length() * std::sqrt(s);
}

double norm_grad_l2(const SpectralVectorField& f) {
  const auto w = f.grid.k_eff_squared();
  const double s = kernels::weighted_norm_sq(f.c1, w) + kernels::weighted_norm_sq(f.c2, w);
  return f.grid.length() * std::sqrt(s);
}

double norm_lp(const PhysicalVectorField& f, double p) {
  if (std::isinf(p)) throw FieldError("norm_lp: use norm_sup on the spectral field for p = infinity");
  return lp_from_samples(f.grid, p, [&](std::size_t i) { return f.x[i] * f.x[i] + f.y[i] * f.y[i]; });
}

double norm_lp(const SpectralVectorField& f, double p) {
  if (std::isinf(p) && p > 0) return norm_sup(f);
  return norm_lp(inverse_transform(f), p);
}

double norm_lp_normalized(const SpectralVectorField& f, double p) {
  const double area = f.grid.area();
  if (std::isinf(p)) return norm_sup(f);
  return norm_lp(f, p) / std::pow(area, 1.0 / p);
}

double norm_sup(const SpectralVectorField& f) {
  const auto phys = evaluate_padded(f.grid, {&f.c1, &f.c2}, 2);
  return std::sqrt(kernels::max_magnitude_sq(phys[0], phys[1]));
}

double norm_lp(const SpectralTensorField& g, double p) {
  if (std::isinf(p) && p > 0) return norm_sup(g);
  std::array<std::vector<double>, 4> phys;
  for (int c = 0; c < 4; c += 2) {
    phys[c].resize(g.grid.size());
    phys[c + 1].resize(g.grid.size());
    inverse_pair(g.grid, g.c[c], g.c[c + 1], phys[c], phys[c + 1]);
  }
  return lp_from_samples(g.grid, p, [&](std::size_t i) {
    return phys[0][i] * phys[0][i] + phys[1][i] * phys[1][i] + phys[2][i] * phys[2][i] + phys[3][i] * phys[3][i];
  });
}

double norm_sup(const SpectralTensorField& g) {
  const auto phys = evaluate_padded(g.grid, {&g.c[0], &g.c[1], &g.c[2], &g.c[3]}, 2);
  double best = 0.0;
  for (std::size_t i = 0; i < phys[0].size(); ++i) {
    const double s = phys[0][i] * phys[0][i] + phys[1][i] * phys[1][i] + phys[2][i] * phys[2][i] +
                     phys[3][i] * phys[3][i];
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

double inner_product(const SpectralVectorField& f, const SpectralVectorField& g) {
  require_same_grid(f.grid, g.grid);
  double s = 0.0;
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    s += f.c1[i].real() * g.c1[i].real() + f.c1[i].imag() * g.c1[i].imag();
    s += f.c2[i].real() * g.c2[i].real() + f.c2[i].imag() * g.c2[i].imag();
  }
  return f.grid.area() * s;
}

double coefficient_l1(const SpectralVectorField& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.grid.size(); ++i) s += std::sqrt(std::norm(f.c1[i]) + std::norm(f.c2[i]));
  return s;
}

double solenoidal_defect(const SpectralVectorField& f) {
  const auto kx = f.grid.kx_eff();
  const auto ky = f.grid.ky_eff();
  double largest = 0.0;
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    largest = std::max(largest, std::sqrt(std::norm(f.c1[i]) + std::norm(f.c2[i])));
  }
  if (largest == 0.0) return 0.0;
  // Modes far below the field's scale are rounding residue of cancellations;
  // they are measured against a floor instead of their own size.
  const double floor = 1e-8 * largest;
  double worst = 0.0;
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    const double mag = std::sqrt(std::norm(f.c1[i]) + std::norm(f.c2[i]));
    if (mag == 0.0) continue;
    worst = std::max(worst, std::abs(kx[i] * f.c1[i] + ky[i] * f.c2[i]) / std::max(mag, floor));
  }
  return worst;
}

bool is_solenoidal(const SpectralVectorField& f, double tol) { return solenoidal_defect(f) <= tol; }

double hermitian_defect(const SpectralVectorField& f) {
  const Grid& g = f.grid;
  const int n = g.n();
  double largest = 0.0;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::size_t k = g.index(i, j);
      const std::size_t mk = g.index((n - i) % n, (n - j) % n);
      largest = std::max({largest, std::abs(f.c1[k]), std::abs(f.c2[k])});
      worst = std::max({worst, std::abs(f.c1[mk] - std::conj(f.c1[k])), std::abs(f.c2[mk] - std::conj(f.c2[k]))});
    }
  }
  return largest == 0.0 ? 0.0 : worst / largest;
}

SpectralVectorField random_solenoidal(const Grid& grid, double spectrum_peak, std::uint64_t seed, double l2_norm,
                                      std::uint64_t stream) {
  if (!(spectrum_peak > 0.0) || spectrum_peak >= grid.dealias_cutoff()) {
    throw FieldError("random_solenoidal: spectrum peak must lie in (0, dealias cutoff)");
  }
  if (!(l2_norm >= 0.0)) throw FieldError("random_solenoidal: requested L2 norm must be >= 0");
  SpectralVectorField f(grid);
  if (l2_norm == 0.0) return f;

  Pcg32 rng(seed, stream);
  const int n = grid.n();
  const auto mask = grid.dealias_mask();
  const double unit = grid.k_unit();
  const double k0sq = spectrum_peak * spectrum_peak;
  for (int i = 0; i < n; ++i) {
    const int mi = grid.mode(i);
    for (int j = 0; j < n; ++j) {
      const int mj = grid.mode(j);
      const bool canonical = mi > 0 || (mi == 0 && mj > 0);
      if (!canonical || mi == n / 2 || mj == n / 2) continue;
      const std::size_t idx = grid.index(i, j);
      if (mask[idx] == 0.0) continue;
      const double kx = mi * unit;
      const double ky = mj * unit;
      const double kmag = std::sqrt(kx * kx + ky * ky);
      const double envelope = kmag * kmag * kmag * std::exp(-(kmag * kmag) / k0sq);
      const double theta = 2.0 * std::numbers::pi * rng.uniform();
      const cplx phase = envelope * cplx{std::cos(theta), std::sin(theta)};
      f.c1[idx] = phase * (-ky / kmag);
      f.c2[idx] = phase * (kx / kmag);
      const std::size_t partner = grid.index(grid.slot(-mi), grid.slot(-mj));
      f.c1[partner] = std::conj(f.c1[idx]);
      f.c2[partner] = std::conj(f.c2[idx]);
    }
  }
  leray_project_inplace(f);
  const double current = norm_l2(f);
  if (current == 0.0) throw FieldError("random_solenoidal: no resolved modes below the cutoff");
  f *= l2_norm / current;
  return f;
}

SpectralVectorField taylor_green(const Grid& grid, double amplitude) {
  SpectralVectorField f(grid);
  const cplx q{0.0, 0.25 * amplitude};
  for (int a : {1, -1}) {
    for (int b : {1, -1}) {
      const std::size_t idx = grid.index(grid.slot(a), grid.slot(b));
      // sin x cos y: -i/4 on (1, +-1), +i/4 on (-1, +-1)
      f.c1[idx] = (a > 0) ? -q : q;
      // -cos x sin y: +i/4 on (+-1, 1), -i/4 on (+-1, -1)
      f.c2[idx] = (b > 0) ? q : -q;
    }
  }
  return f;
}

}  // namespace ns2d
