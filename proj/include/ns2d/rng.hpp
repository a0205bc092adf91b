// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace ns2d {

// PCG-XSH-RR: 64-bit linear congruential state, 32-bit permuted output.
//
// Stream splitting: every generator is addressed by (seed, stream). The
// stream id selects the LCG increment (2*stream + 1), so generators with
// different stream ids walk disjoint sequences even under the same seed.
// Ensemble members derive their stream ids from stream_id() below, which
// keeps draws independent of worker count and scheduling order.
class Pcg32 {
 public:
  Pcg32(std::uint64_t seed, std::uint64_t stream);

  std::uint32_t next();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  // Stable stream id for a (purpose, index) pair.
  static std::uint64_t stream_id(std::uint32_t purpose, std::uint32_t index) {
    return (static_cast<std::uint64_t>(purpose) << 32) | index;
  }

 private:
  std::uint64_t state_ = 0;
  std::uint64_t inc_ = 1;
};

namespace streams {
inline constexpr std::uint32_t initial_data = 1;
inline constexpr std::uint32_t test_field = 2;
inline constexpr std::uint32_t synthetic = 3;
}  // namespace streams

}  // namespace ns2d
