// Copyright 2026 The ns2d Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "ns2d/kernels.hpp"

namespace ns2d::kernels {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

std::vector<const Table*> available_tables() {
  std::vector<const Table*> out{&scalar_table()};
#if defined(NS2D_HAVE_AVX2)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) out.push_back(&detail::avx2_table());
#endif
#if defined(NS2D_HAVE_NEON)
  out.push_back(&detail::neon_table());
#endif
  return out;
}

namespace {

const Table& select() {
  const auto tables = available_tables();
  const char* env = std::getenv("NS2D_SIMD");
  if (env == nullptr || std::string_view(env).empty() || std::string_view(env) == "auto") {
    return *tables.back();
  }
  for (const Table* t : tables) {
    if (isa_name(t->isa) == env) return *t;
  }
  throw std::runtime_error("NS2D_SIMD=" + std::string(env) + " is not available on this machine");
}

}  // namespace

const Table& active() {
  static const Table& table = select();
  return table;
}

}  // namespace ns2d::kernels
