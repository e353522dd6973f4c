#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "shockfan/crystal.hpp"
#include "shockfan/eigenframe.hpp"
#include "shockfan/errors.hpp"
#include "shockfan/riemann_exact.hpp"
#include "shockfan/seed.hpp"

using namespace shockfan;
using crystal::CrystalParams;

namespace {

const CrystalParams kP{0.81, 0.49, 0.05, 0.0, 0.0, 0.04};

// Adaptive Simpson quadrature, the oracle for the closed-form invariant
// integral. Plain recursion with the usual 1/15 error estimate.
double simpson_step(const std::function<double(double)>& f, double a,
                    double fa, double b, double fb, double fm, double whole,
                    double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson_step(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, fa, b, fb, fm, whole, tol, 40);
}

} // namespace

TEST_CASE("invariant integral matches adaptive quadrature") {
  for (int i : {1, 2}) {
    const double K = i == 1 ? kP.K1 : kP.K2;
    const double C = i == 1 ? kP.C111 : kP.C222;
    for (double q : {-0.3, -0.1, -0.01, 0.0, 0.02, 0.15, 0.4}) {
      const auto speed = [&](double s) { return std::sqrt(K + 6.0 * C * s); };
      const double oracle = q == 0.0 ? 0.0 : integrate(speed, 0.0, q, 1e-13);
      CHECK(riemann::invariant_integral(kP, i, q) ==
            doctest::Approx(oracle).epsilon(1e-10));
    }
  }
  // Linear medium: P_i(q) = sqrt(K_i) q exactly.
  const CrystalParams lin{0.81, 0.49, 0.0, 0.0, 0.0, 0.0};
  CHECK(riemann::invariant_integral(lin, 1, 0.37) ==
        doctest::Approx(0.9 * 0.37).epsilon(1e-14));
  CHECK(riemann::invariant_integral(lin, 2, -0.21) ==
        doctest::Approx(0.7 * -0.21).epsilon(1e-14));
}

TEST_CASE("invariants invert back to the state") {
  const std::vector<Vec> states = sample_ball(4, 0.15, 40, 3);
  for (const Vec& s : states) {
    const Vec4 u(s[0], s[1], s[2], s[3]);
    const std::array<double, 4> m = riemann::riemann_invariants(kP, u);
    const Vec4 back = riemann::invert_invariants(kP, m);
    for (int j = 0; j < 4; ++j)
      CHECK(back[j] == doctest::Approx(u[j]).epsilon(1e-13));
  }
}

TEST_CASE("characteristic speeds match the eigenframe") {
  const std::vector<Vec> states = sample_ball(4, 0.12, 32, 5);
  for (const Vec& s : states) {
    const Vec4 u(s[0], s[1], s[2], s[3]);
    const crystal::Frame4 f = crystal::frame4(kP, u);
    const std::array<double, 4> m = riemann::riemann_invariants(kP, u);
    for (int fam = 1; fam <= 4; ++fam) {
      const double lam =
          riemann::char_speed(kP, fam, m[fam - 1], m[(5 - fam) - 1]);
      CHECK(lam == doctest::Approx(f.lambda[fam - 1]).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(riemann::char_speed(kP, 1, -10.0, 10.0), NegativeRadicand);
}

TEST_CASE("coupled parameters are rejected") {
  const CrystalParams coupled{0.81, 0.49, 0.05, 0.01, 0.0, 0.04};
  CHECK_THROWS_AS(riemann::riemann_invariants(coupled, Vec4::Zero()),
                  CoupledParamsRejected);
  CHECK_THROWS_AS(
      riemann::SimpleWaveScenario(coupled, make_comoving_seed(kP, 0.01)),
      CoupledParamsRejected);
}

TEST_CASE("simple wave shock time matches pairwise characteristic crossing") {
  const riemann::SimpleWaveScenario sc(kP, make_comoving_seed(kP, 0.06));
  const double t_star = sc.exact_shock_time();

  // Oracle: earliest intersection of straight characteristics from a fine
  // grid of launch points, using only lambda(z) values.
  const int n = 40001;
  double best = 1e300;
  double zp = -1.05, lp = sc.lambda_of_z(zp);
  for (int k = 1; k < n; ++k) {
    const double z = -1.05 + 2.1 * k / (n - 1);
    const double l = sc.lambda_of_z(z);
    if (lp > l) best = std::min(best, (z - zp) / (lp - l));
    zp = z;
    lp = l;
  }
  CHECK(t_star == doctest::Approx(best).epsilon(5e-3));
  CHECK(t_star == doctest::Approx(58.2).epsilon(0.02));
}

TEST_CASE("simple wave carries constant invariants along characteristics") {
  const riemann::SimpleWaveScenario sc(kP, make_comoving_seed(kP, 0.06));
  const SeedProfile seed = make_comoving_seed(kP, 0.06);
  const double t_star = sc.exact_shock_time();
  for (double z : {-0.9, -0.4, 0.1, 0.45, 0.8}) {
    const Vec4 fz = seed.f(z);
    const double m1 =
        riemann::riemann_invariants(kP, fz)[0];
    const double lam = sc.lambda_of_z(z);
    for (double frac : {0.1, 0.5, 0.9}) {
      const double t = frac * t_star;
      const Vec4 u = sc.evaluate(z + lam * t, t);
      const std::array<double, 4> m = riemann::riemann_invariants(kP, u);
      CHECK(m[0] == doctest::Approx(m1).epsilon(1e-10));
      CHECK(std::abs(m[1]) < 1e-12);
      CHECK(std::abs(m[2]) < 1e-12);
      CHECK(std::abs(m[3]) < 1e-12);
    }
  }
  // Ahead of and behind the wave the state is zero.
  const Vec4 far = sc.evaluate(10.0, 0.5 * t_star);
  CHECK(far.cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS_AS(sc.evaluate(0.0, t_star * 1.0001), PostShockQuery);
  CHECK_THROWS_AS(sc.evaluate(0.0, t_star), PostShockQuery);
}

TEST_CASE("linear medium never shocks") {
  const CrystalParams lin{0.81, 0.49, 0.0, 0.0, 0.0, 0.0};
  const riemann::SimpleWaveScenario sc(lin, make_comoving_seed(lin, 0.05));
  CHECK_THROWS_AS(sc.exact_shock_time(), NoShock);
  // Pure advection at sqrt(K1).
  const SeedProfile seed = make_comoving_seed(lin, 0.05);
  const Vec4 u = sc.evaluate(0.3 + 0.9 * 7.0, 7.0);
  const Vec4 f = seed.f(0.3);
  CHECK((u - f).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("interface matching has the exact linear limits") {
  // Zero incident data: Z_i = sqrt(K_i), nothing reflected or transmitted.
  const riemann::InterfaceTransmit t0 =
      riemann::interface_transmit(kP, {0.0, 0.0});
  CHECK(t0.Z[0] == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(t0.Z[1] == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(std::abs(t0.g[0]) < 1e-14);
  CHECK(std::abs(t0.m0[0]) < 1e-14);

  // Weak nonlinearity: the reflected fraction approaches the impedance
  // mismatch (1 - sqrt(K)) / (1 + sqrt(K)).
  const CrystalParams weak{0.81, 0.49, 3e-4, 0.0, 0.0, 3e-4};
  const std::array<double, 2> ft{3e-4, 2e-4};
  const riemann::InterfaceTransmit tr = riemann::interface_transmit(weak, ft);
  CHECK(std::abs(tr.g[0] / ft[0] - 0.1 / 1.9) < 1e-6);
  CHECK(std::abs(tr.g[1] / ft[1] - 0.3 / 1.7) < 1e-6);
}

TEST_CASE("interface solution is continuous in E and H across x = 0") {
  const riemann::InterfaceScenario sc(
      kP, [](double t) { return bump(2.0 * t - 1.0); },
      [](double t) { return 2.0 * bump_prime(2.0 * t - 1.0); },
      {0.01, 0.008});
  const double t_star = sc.exact_shock_time();
  const double eps = 1e-10;
  for (int k = 1; k <= 100; ++k) {
    const double t = std::min(0.012 * k, 0.999 * t_star);
    const Vec4 left = sc.evaluate(-eps, t);  // vacuum: E = D, H = B
    const Vec4 right = sc.evaluate(eps, t);
    double ey, ez;
    crystal::E_from_D(kP, right[0], right[1], ey, ez);
    CHECK(std::abs(left[0] - ey) < 1e-10);
    CHECK(std::abs(left[1] - ez) < 1e-10);
    CHECK(std::abs(left[2] - right[2]) < 1e-10);
    CHECK(std::abs(left[3] - right[3]) < 1e-10);
  }
}

TEST_CASE("interface shock time matches pairwise launch crossing") {
  const riemann::InterfaceScenario sc(
      kP, [](double t) { return bump(2.0 * t - 1.0); },
      [](double t) { return 2.0 * bump_prime(2.0 * t - 1.0); },
      {0.05, 0.04});

  for (int family : {1, 2}) {
    const double t_star = sc.exact_shock_time(family);
    // Oracle: characteristics leave x = 0 at launch times t0 with speed
    // lambda(t0); a later, faster launch overtakes an earlier one at
    //   t = (lambda_b t_b - lambda_a t_a) / (lambda_b - lambda_a).
    const int n = 40001;
    double best = 1e300;
    double ta = 0.0, la = sc.launch_speed(family, ta);
    for (int k = 1; k < n; ++k) {
      const double tb = static_cast<double>(k) / (n - 1);
      const double lb = sc.launch_speed(family, tb);
      if (lb > la) {
        const double cross = (lb * tb - la * ta) / (lb - la);
        if (cross >= tb) best = std::min(best, cross);
      }
      ta = tb;
      la = lb;
    }
    CHECK(t_star == doctest::Approx(best).epsilon(1e-3));
  }
  CHECK(sc.exact_shock_time() ==
        doctest::Approx(std::min(sc.exact_shock_time(1),
                                 sc.exact_shock_time(2))).epsilon(1e-14));
  CHECK_THROWS_AS(sc.evaluate(0.5, sc.exact_shock_time() + 1e-6),
                  PostShockQuery);
}

TEST_CASE("boundary invariant derivative matches finite differences") {
  const riemann::InterfaceScenario sc(
      kP, [](double t) { return bump(2.0 * t - 1.0); },
      [](double t) { return 2.0 * bump_prime(2.0 * t - 1.0); },
      {0.05, 0.04});
  const double h = 1e-6;
  for (int family : {1, 2}) {
    for (double t0 : {0.15, 0.3, 0.55, 0.8}) {
      const double fd = (sc.boundary_invariant(family, t0 + h) -
                         sc.boundary_invariant(family, t0 - h)) /
                        (2.0 * h);
      CHECK(sc.boundary_invariant_prime(family, t0) ==
            doctest::Approx(fd).epsilon(1e-6));
      const double fdl = (sc.launch_speed(family, t0 + h) -
                          sc.launch_speed(family, t0 - h)) /
                         (2.0 * h);
      CHECK(sc.launch_speed_prime(family, t0) ==
            doctest::Approx(fdl).epsilon(1e-6));
    }
  }
}
