// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

#include "ns2d/snapshot_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>

namespace ns2d {
namespace {

template <typename T>
void put(std::ofstream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get(std::ifstream& in) {
  std::array<char, sizeof(T)> bytes;
  if (!in.read(bytes.data(), bytes.size())) throw SnapshotError("snapshot: truncated file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

std::uint32_t infer_flags(const SpectralVectorField& f) {
  std::uint32_t flags = 0;
  if (is_solenoidal(f)) flags |= snapshot_flags::solenoidal;
  if (f.c1[0] == cplx{} && f.c2[0] == cplx{}) flags |= snapshot_flags::mean_zero;
  const auto mask = f.grid.dealias_mask();
  bool clean = true;
  for (std::size_t i = 0; i < f.grid.size() && clean; ++i) {
    if (mask[i] == 0.0 && (f.c1[i] != cplx{} || f.c2[i] != cplx{})) clean = false;
  }
  if (clean) flags |= snapshot_flags::dealiased;
  return flags;
}

void write_snapshot(const std::filesystem::path& path, const SpectralVectorField& f, std::uint32_t flags) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SnapshotError("snapshot: cannot open " + path.string() + " for writing");
  out.write("NS2F", 4);
  put<std::uint32_t>(out, kSnapshotVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.grid.n()));
  put<double>(out, f.grid.length());
  put<std::uint32_t>(out, flags);
  for (const auto* comp : {&f.c1, &f.c2}) {
    for (const cplx& c : *comp) {
      put<double>(out, c.real());
      put<double>(out, c.imag());
    }
  }
  if (!out) throw SnapshotError("snapshot: write failed for " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path, double dealias_fraction) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("snapshot: cannot open " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "NS2F", 4) != 0) throw SnapshotError("snapshot: bad magic");
  const auto version = get<std::uint32_t>(in);
  if (version != kSnapshotVersion) throw SnapshotError("snapshot: unsupported version " + std::to_string(version));
  const auto n = get<std::uint32_t>(in);
  const auto length = get<double>(in);
  const auto flags = get<std::uint32_t>(in);
  Snapshot snap{SpectralVectorField(Grid(static_cast<int>(n), length, dealias_fraction)), flags};
  for (auto* comp : {&snap.field.c1, &snap.field.c2}) {
    for (cplx& c : *comp) {
      const double re = get<double>(in);
      const double im = get<double>(in);
      c = cplx{re, im};
    }
  }
  return snap;
}

}  // namespace ns2d
