#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "shockfan/root_find.hpp"

using namespace shockfan;

TEST_CASE("newton_bisect finds sqrt(2) to full precision") {
  auto f = [](double x) { return x * x - 2.0; };
  auto df = [](double x) { return 2.0 * x; };
  const double r = newton_bisect(f, df, 0.0, 2.0, 1.0, 1e-15);
  CHECK(std::abs(r - std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("newton_bisect throws NoBracket without a sign change") {
  auto f = [](double x) { return x * x + 1.0; };
  auto df = [](double x) { return 2.0 * x; };
  CHECK_THROWS_AS(newton_bisect(f, df, 0.0, 1.0, 0.5, 1e-12), NoBracket);
}

TEST_CASE("newton_bisect survives a hostile starting point") {
  // Newton from x0 = 0 diverges for cbrt-like roots; the bracket saves it.
  auto f = [](double x) { return std::cbrt(x - 0.7); };
  auto df = [](double x) {
    const double d = x - 0.7;
    return d == 0.0 ? 0.0 : std::cbrt(d) / (3.0 * d);
  };
  const double r = newton_bisect(f, df, -1.0, 1.0, 0.0, 1e-13);
  CHECK(std::abs(r - 0.7) < 1e-10);
}

TEST_CASE("newton_bisect accepts a root sitting on an endpoint") {
  auto f = [](double x) { return x - 1.0; };
  auto df = [](double) { return 1.0; };
  CHECK(newton_bisect(f, df, 1.0, 2.0, 1.5, 1e-12) == 1.0);
}

TEST_CASE("bisect halves down to the tolerance") {
  const double r = bisect([](double x) { return std::cos(x); }, 0.0, 2.0, 1e-12);
  CHECK(std::abs(r - 1.5707963267948966) < 1e-11);
}

TEST_CASE("golden_max locates a smooth interior maximum") {
  const double x = golden_max(
      [](double t) { return -(t - 0.3) * (t - 0.3); }, -1.0, 1.0, 1e-12);
  CHECK(std::abs(x - 0.3) < 1e-9);

  // Location accuracy near a smooth maximum is limited to about sqrt(eps)
  // because the function is flat there; do not ask for more.
  const double s =
      golden_max([](double t) { return std::sin(t); }, 0.0, 3.141592653589793,
                 1e-12);
  CHECK(std::abs(s - 1.5707963267948966) < 1e-7);
}
