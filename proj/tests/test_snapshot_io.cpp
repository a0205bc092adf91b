#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>

#include "ns2d/snapshot_io.hpp"

using namespace ns2d;

namespace {

std::filesystem::path scratch(const char* name) {
  const auto dir = std::filesystem::temp_directory_path() / "ns2d_snapshot_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("snapshot round trip is bit exact") {
  const Grid g(32, 3.0);
  const auto u = random_solenoidal(g, 3.0, 5, 2.0);
  const auto path = scratch("a.ns2f");
  write_snapshot(path, u, infer_flags(u));
  const Snapshot s = read_snapshot(path);
  CHECK(s.field.grid.n() == 32);
  CHECK(s.field.grid.length() == 3.0);
  CHECK(s.flags == (snapshot_flags::solenoidal | snapshot_flags::mean_zero | snapshot_flags::dealiased));
  CHECK(std::memcmp(s.field.c1.data(), u.c1.data(), u.c1.size() * sizeof(cplx)) == 0);
  CHECK(std::memcmp(s.field.c2.data(), u.c2.data(), u.c2.size() * sizeof(cplx)) == 0);
  CHECK(std::filesystem::file_size(path) == 4 + 4 + 4 + 8 + 4 + 2 * 32 * 32 * 16);
}

TEST_CASE("header layout") {
  const Grid g(8);
  const SpectralVectorField z(g);
  const auto path = scratch("b.ns2f");
  write_snapshot(path, z, 0);
  std::ifstream in(path, std::ios::binary);
  char head[24];
  in.read(head, sizeof head);
  CHECK(std::string(head, 4) == "NS2F");
  std::uint32_t version, n;
  std::memcpy(&version, head + 4, 4);
  std::memcpy(&n, head + 8, 4);
  CHECK(version == kSnapshotVersion);
  CHECK(n == 8);
}

TEST_CASE("bad files are rejected") {
  const auto bad = scratch("bad.ns2f");
  {
    std::ofstream out(bad, std::ios::binary);
    out << "XXXXjunk";
  }
  CHECK_THROWS_AS(read_snapshot(bad), SnapshotError);
  CHECK_THROWS_AS(read_snapshot(scratch("missing.ns2f")), SnapshotError);

  const Grid g(8);
  const auto good = scratch("c.ns2f");
  write_snapshot(good, SpectralVectorField(g), 0);
  std::filesystem::resize_file(good, std::filesystem::file_size(good) - 8);
  CHECK_THROWS_AS(read_snapshot(good), SnapshotError);
}
