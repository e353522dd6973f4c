#include "shockfan/seed.hpp"

#include <cmath>

#include "shockfan/errors.hpp"

namespace shockfan {

double bump(double z) {
  if (std::abs(z) >= 1.0) return 0.0;
  const double q = 1.0 - z * z;
  return q * q * q;
}

double bump_prime(double z) {
  if (std::abs(z) >= 1.0) return 0.0;
  const double q = 1.0 - z * z;
  return -6.0 * z * q * q;
}

double bump_second(double z) {
  if (std::abs(z) >= 1.0) return 0.0;
  const double q = 1.0 - z * z;
  return q * (30.0 * z * z - 6.0);
}

namespace {

// Antiderivative of sqrt(K + 6 C s) from 0 to q, and its derivative. The
// derivative is the local fast wave speed sqrt(d1(q)) of the decoupled
// polarization, which is what makes the comoving pair a single simple wave.
double pair_potential(double K, double C, double q) {
  if (C == 0.0) return std::sqrt(K) * q;
  const double base = K + 6.0 * C * q;
  if (base < 0.0)
    throw OutOfDomain("comoving seed amplitude leaves the hyperbolic regime");
  return (std::pow(base, 1.5) - std::pow(K, 1.5)) / (9.0 * C);
}

double pair_potential_prime(double K, double C, double q) {
  const double base = K + 6.0 * C * q;
  if (base < 0.0)
    throw OutOfDomain("comoving seed amplitude leaves the hyperbolic regime");
  return std::sqrt(base);
}

} // namespace

Vec4 SeedProfile::f(double x) const {
  if (kind == "bump") {
    const double b = amplitude * bump(x);
    return Vec4(weights[0] * b, weights[1] * b, weights[2] * b,
                weights[3] * b);
  }
  const double q = amplitude * bump(x);
  return Vec4(q, 0.0, 0.0, pair_potential(params.K1, params.C111, q));
}

Vec4 SeedProfile::f_prime(double x) const {
  if (kind == "bump") {
    const double b = amplitude * bump_prime(x);
    return Vec4(weights[0] * b, weights[1] * b, weights[2] * b,
                weights[3] * b);
  }
  const double q = amplitude * bump(x);
  const double qp = amplitude * bump_prime(x);
  return Vec4(qp, 0.0, 0.0,
              pair_potential_prime(params.K1, params.C111, q) * qp);
}

Vec4 SeedProfile::f0(double x) const {
  if (kind == "bump") {
    const double b = bump(x);
    return Vec4(weights[0] * b, weights[1] * b, weights[2] * b,
                weights[3] * b);
  }
  const double b = bump(x);
  if (amplitude == 0.0)
    return Vec4(b, 0.0, 0.0, std::sqrt(params.K1) * b);
  const double q = amplitude * b;
  return Vec4(b, 0.0, 0.0,
              pair_potential(params.K1, params.C111, q) / amplitude);
}

Vec4 SeedProfile::f0_prime(double x) const {
  if (kind == "bump") {
    const double b = bump_prime(x);
    return Vec4(weights[0] * b, weights[1] * b, weights[2] * b,
                weights[3] * b);
  }
  const double q = amplitude * bump(x);
  const double bp = bump_prime(x);
  return Vec4(bp, 0.0, 0.0,
              pair_potential_prime(params.K1, params.C111, q) * bp);
}

Vec4 SeedProfile::f0_second(double x) const {
  if (kind == "bump") {
    const double b = bump_second(x);
    return Vec4(weights[0] * b, weights[1] * b, weights[2] * b,
                weights[3] * b);
  }
  const double q = amplitude * bump(x);
  const double bp = bump_prime(x);
  const double bpp = bump_second(x);
  const double root = pair_potential_prime(params.K1, params.C111, q);
  // d/dx sqrt(d1(q)) = 3 C111 q' / sqrt(d1); the unit profile divides one
  // amplitude factor out of q' * b'.
  const double cross = 3.0 * params.C111 * amplitude * bp * bp / root;
  return Vec4(bpp, 0.0, 0.0, root * bpp + cross);
}

SeedProfile make_bump_seed(double amplitude,
                           const std::array<double, 4>& weights) {
  SeedProfile s;
  s.kind = "bump";
  s.amplitude = amplitude;
  s.weights = weights;
  return s;
}

SeedProfile make_comoving_seed(const crystal::CrystalParams& p,
                               double amplitude) {
  p.validate();
  SeedProfile s;
  s.kind = "comoving_pair";
  s.amplitude = amplitude;
  s.params = p;
  return s;
}

} // namespace shockfan
