#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "ns2d/config.hpp"

using namespace ns2d;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "t.ini");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults are valid") {
  const auto cfg = parse_config("");
  CHECK(cfg.solver.n == 64);
  CHECK(cfg.amplitudes.size() == 6);
  CHECK(cfg.p_values == std::vector<double>{5, 6, 8, 12});
  CHECK(std::isinf(cfg.decay_pairs.front().second));
}

TEST_CASE("number forms, lists and tuples") {
  const auto cfg = parse_config(R"(
# comment
[grid]
n = 32          # trailing comment
length = 4pi

[solver]
dt = 1/500
horizon = 2
nonlinear = false

[ensemble]
seeds = 4, 5
amplitudes = 0.5, 1

[stokes_semigroup]
decay_pairs = 2:inf, 3/2:4
l1_q = 2, inf

[inequality_toolkit]
hls_r = 8/7
gn_tuples = 6:2:2:2/3

[output]
directory = out/x
)");
  CHECK(cfg.solver.n == 32);
  CHECK(cfg.solver.length == doctest::Approx(4.0 * std::numbers::pi));
  CHECK(cfg.solver.dt == doctest::Approx(0.002));
  CHECK_FALSE(cfg.solver.nonlinear);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{4, 5});
  CHECK(cfg.decay_pairs.size() == 2);
  CHECK(cfg.decay_pairs[1].first == 1.5);
  CHECK(std::isinf(cfg.l1_q[1]));
  CHECK(cfg.hls_r == doctest::Approx(8.0 / 7.0));
  CHECK(cfg.gn_tuples[0][3] == doctest::Approx(2.0 / 3.0));
  CHECK(cfg.directory == "out/x");
}

TEST_CASE("diagnostics name the line and the field") {
  CHECK(error_of("[grid]\nn = 32\nbogus = 1\n").find("t.ini:3: unknown key 'bogus' in [grid]") == 0);
  CHECK(error_of("[nope]\n").find("t.ini:1: unknown section") == 0);
  CHECK(error_of("n = 3\n").find("t.ini:1: key outside") == 0);
  CHECK(error_of("[solver]\ndt = fast\n").find("t.ini:2: bad value for 'dt'") == 0);
  CHECK(error_of("[solver]\nnonlinear = maybe\n").find("t.ini:2:") == 0);
  CHECK(error_of("[grid]\njust words\n").find("t.ini:2: expected key = value") == 0);
  CHECK(error_of("[grid\n").find("t.ini:1: unterminated") == 0);
}

TEST_CASE("validation") {
  CHECK(error_of("[ensemble]\namplitudes =\n").find("amplitudes") != std::string::npos);
  CHECK(error_of("[ensemble]\namplitudes = 1, 16\n").find("allow_large_amplitudes") != std::string::npos);
  CHECK(error_of("[ensemble]\namplitudes = 1, 16\nallow_large_amplitudes = true\n").empty());
  CHECK(error_of("[ensemble]\namplitudes = -1\n").find("amplitudes") != std::string::npos);
  CHECK(error_of("[ensemble]\ndata = vortex\n").find("data") != std::string::npos);
  CHECK(error_of("[decomposition_duality]\np_values = 4\n").find("p_values") != std::string::npos);
  CHECK(error_of("[stokes_semigroup]\ndecay_pairs = 4:2\n").find("decay_pairs") != std::string::npos);
  CHECK(error_of("[solver]\ndt = 0.3\nhorizon = 1\n").find("[solver]") != std::string::npos);
  CHECK(error_of("[inequality_toolkit]\ngn_tuples = 6:2:2:0.5\n").find("inequality_toolkit") != std::string::npos);
  CHECK(error_of("[grid]\nn = 7\n").find("[grid]") != std::string::npos);
}

TEST_CASE("missing file") { CHECK_THROWS_AS(load_config("/nonexistent/config.ini"), ConfigError); }
