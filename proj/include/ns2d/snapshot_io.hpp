// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>

#include "ns2d/spectral.hpp"

namespace ns2d {

// NS2F snapshot layout, all little-endian:
//   char[4] "NS2F" | u32 version | u32 n | f64 L | u32 flags
//   then n*n (re, im) f64 pairs of component 1, row-major, then component 2.
namespace snapshot_flags {
inline constexpr std::uint32_t solenoidal = 1u << 0;
inline constexpr std::uint32_t mean_zero = 1u << 1;
inline constexpr std::uint32_t dealiased = 1u << 2;
}  // namespace snapshot_flags

inline constexpr std::uint32_t kSnapshotVersion = 1;

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Snapshot {
  SpectralVectorField field;
  std::uint32_t flags = 0;
};

// Flags derived from the field itself (solenoidal to 1e-12, zero mean).
std::uint32_t infer_flags(const SpectralVectorField& f);

void write_snapshot(const std::filesystem::path& path, const SpectralVectorField& f, std::uint32_t flags);
// The header does not carry the dealias fraction; it is supplied here.
Snapshot read_snapshot(const std::filesystem::path& path, double dealias_fraction = 2.0 / 3.0);

}  // namespace ns2d
