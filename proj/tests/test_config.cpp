#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "shockfan/config.hpp"
#include "shockfan/errors.hpp"

using namespace shockfan;

namespace {

Scenario parse(const std::string& body) {
  return parse_scenario(body, "test");
}

const std::string kModel =
    "[model]\n"
    "K1 = 0.81\n"
    "K2 = 0.49\n"
    "C111 = 0.05\n"
    "C222 = 0.04\n";

} // namespace

TEST_CASE("a full scenario round trips every section") {
  const Scenario sc = parse(kModel +
                            "C112 = 0.0\n"
                            "C122 = 0.0\n"
                            "h_fraction = 0.8\n"
                            "delta_override = 0.05\n"
                            "frame_speed = 0.9\n"
                            "c_switch = 1e-6\n"
                            "\n"
                            "[seed]\n"
                            "kind = \"comoving_pair\"\n"
                            "amplitude = 0.007\n"
                            "\n"
                            "[numerics]\n"
                            "dx = 2.5e-3   # fine grid\n"
                            "x_lo = -2.5\n"
                            "x_hi = 2.5\n"
                            "t_end = 12.0\n"
                            "cfl = 0.8\n"
                            "scheme = \"conservative\"\n"
                            "limiter = \"minmod\"\n"
                            "z_count = 201\n"
                            "rho_stop = 0.02\n"
                            "epsilon = 2e-3\n"
                            "\n"
                            "[exact]\n"
                            "kind = \"interface\"\n"
                            "amplitudes = [0.05, 0.04]\n"
                            "slice_times = [0.5, 1.5, 2.5]\n"
                            "slice_nx = 101\n"
                            "\n"
                            "[output]\n"
                            "directory = \"out/run1\"\n"
                            "fans = false\n");
  CHECK(sc.params.K1 == 0.81);
  CHECK(sc.params.C222 == 0.04);
  CHECK(sc.h_fraction == 0.8);
  CHECK(sc.delta_override == 0.05);
  CHECK(sc.frame_speed == 0.9);
  CHECK(sc.c_switch == 1e-6);
  CHECK(sc.seed.kind == "comoving_pair");
  CHECK(sc.seed.amplitude == 0.007);
  CHECK(sc.numerics.dx == 2.5e-3);
  CHECK(sc.numerics.x_lo == -2.5);
  CHECK(sc.numerics.t_end == 12.0);
  CHECK(sc.numerics.limiter == "minmod");
  CHECK(sc.numerics.z_count == 201);
  CHECK(sc.numerics.rho_stop == 0.02);
  CHECK(sc.numerics.epsilon == 2e-3);
  CHECK(sc.exact.kind == "interface");
  CHECK(sc.exact.amplitudes[0] == 0.05);
  CHECK(sc.exact.slice_times.size() == 3);
  CHECK(sc.exact.slice_times[2] == 2.5);
  CHECK(sc.exact.slice_nx == 101);
  CHECK(sc.output.directory == "out/run1");
  CHECK_FALSE(sc.output.fans);
  CHECK(sc.output.report); // untouched default
}

TEST_CASE("defaults survive a minimal file") {
  const Scenario sc = parse(kModel);
  CHECK(sc.h_fraction == 0.9);
  CHECK(sc.frame_speed == 0.0);
  CHECK(sc.seed.kind == "bump");
  CHECK(sc.numerics.dx == 1e-2);
  CHECK(sc.numerics.t_end == 0.0);
  CHECK(sc.numerics.z_count == 401);
  CHECK(sc.exact.kind == "cauchy");
  CHECK(sc.output.directory == "out");
  CHECK(sc.output.fans);
}

TEST_CASE("unknown keys and sections are named in the error") {
  CHECK_THROWS_WITH_AS(parse(kModel + "K3 = 0.2\n"),
                       doctest::Contains("K3"), ConfigError);
  CHECK_THROWS_WITH_AS(parse(kModel + "[plasma]\nfoo = 1\n"),
                       doctest::Contains("plasma"), ConfigError);
  CHECK_THROWS_WITH_AS(parse(kModel + "[numerics]\ndt = 0.1\n"),
                       doctest::Contains("dt"), ConfigError);
}

TEST_CASE("type and shape violations are rejected") {
  CHECK_THROWS_AS(parse(kModel + "[seed]\namplitude = \"big\"\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse(kModel + "[numerics]\nz_count = 10.5\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse(kModel + "[seed]\nweights = [1, 0, 0]\n"),
                  ConfigError); // needs 4 entries
  CHECK_THROWS_AS(parse(kModel + "[exact]\namplitudes = [1, 2, 3]\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse(kModel + "[output]\nfans = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse(kModel + "[seed]\nkind = bump\n"),
                  ConfigError); // strings must be quoted
  CHECK_THROWS_AS(parse(kModel + "[numerics]\ndx\n"), ConfigError);
  CHECK_THROWS_AS(parse("K1 = 0.81\n"), ConfigError); // key outside section
}

TEST_CASE("physical preconditions are validated with the key name") {
  // Ordering of the susceptibilities.
  CHECK_THROWS_WITH_AS(parse("[model]\nK1 = 0.49\nK2 = 0.81\n"),
                       doctest::Contains("K2"), ConfigError);
  CHECK_THROWS_AS(parse("[model]\nK1 = 1.2\nK2 = 0.49\n"), ConfigError);
  CHECK_THROWS_WITH_AS(parse(kModel + "h_fraction = 1.0\n"),
                       doctest::Contains("h_fraction"), ConfigError);
  CHECK_THROWS_AS(parse(kModel + "[seed]\nkind = \"spike\"\n"), ConfigError);
  CHECK_THROWS_AS(parse(kModel + "[numerics]\nscheme = \"spectral\"\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse(kModel + "[numerics]\nlimiter = \"superbee\"\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse(kModel + "[numerics]\ndx = -0.01\n"), ConfigError);
  CHECK_THROWS_AS(parse(kModel + "[numerics]\ncfl = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse(kModel + "[numerics]\nz_count = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse(kModel + "[numerics]\nepsilon = 0.02\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse(kModel + "[exact]\nkind = \"riemann\"\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse(kModel + "[exact]\nslice_nx = 0\n"), ConfigError);
}

TEST_CASE("comments and whitespace are tolerated, including inside strings") {
  const Scenario sc = parse("# leading comment\n"
                            "[model] # trailing\n"
                            "  K1 = 0.81\n"
                            "\tK2 = 0.49   # susceptibility\n"
                            "\n"
                            "[output]\n"
                            "directory = \"out/a#b\" # hash inside quotes\n");
  CHECK(sc.params.K1 == 0.81);
  CHECK(sc.output.directory == "out/a#b");
}

TEST_CASE("parse errors carry the origin and line number") {
  try {
    parse("[model]\nK1 = 0.81\nK2 = oops\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("test") != std::string::npos);
    CHECK(msg.find("3") != std::string::npos);
  }
}

TEST_CASE("assembled pieces reflect the scenario") {
  const Scenario sc = parse(kModel +
                            "frame_speed = 0.9\n"
                            "delta_override = 0.08\n"
                            "[seed]\n"
                            "kind = \"comoving_pair\"\n"
                            "amplitude = 0.01\n"
                            "[numerics]\n"
                            "dx = 5e-3\n"
                            "cfl = 0.7\n"
                            "limiter = \"mc\"\n");
  const SystemModel m = scenario_model(sc);
  CHECK(m.frame_speed == 0.9);
  CHECK(m.ball_radius == doctest::Approx(0.08));
  REQUIRE(m.crystal_params.has_value());
  CHECK(m.crystal_params->K1 == 0.81);

  const SeedProfile seed = scenario_seed(sc);
  CHECK(seed.kind == "comoving_pair");
  CHECK(seed.amplitude == 0.01);

  const SolveOptions opt = scenario_solve_options(sc, 12.0, 3);
  CHECK(opt.t_end == 12.0);
  CHECK(opt.dx == 5e-3);
  CHECK(opt.cfl == 0.7);
  CHECK(opt.limiter == "mc");
  CHECK(opt.threads == 3);
  CHECK(opt.gradient_cap > 0.0);

  // A zero seed collapses to an amplitude-zero bump.
  const Scenario zs = parse(kModel + "[seed]\nkind = \"zero\"\n");
  const SeedProfile zero = scenario_seed(zs);
  CHECK(zero.amplitude == 0.0);
}
