#pragma once

#include <functional>
#include <string>

#include "shockfan/crystal.hpp"
#include "shockfan/types.hpp"

namespace shockfan {

// Compactly supported initial data u(x, 0) = f(x) = amplitude * f0(x),
// supported in [-1, 1] and C^2 across the edges. f0 is the unit-amplitude
// profile used by the seed statistics; amplitude is the small parameter.
struct SeedProfile {
  std::string kind;             // "bump" or "comoving_pair"
  double amplitude = 0.0;       // the overall small factor (theta)
  std::array<double, 4> weights{}; // per-component weights for "bump"
  crystal::CrystalParams params;   // needed by "comoving_pair"

  Vec4 f(double x) const;        // f(x) = amplitude * f0(x)
  Vec4 f_prime(double x) const;  // df/dx
  Vec4 f0(double x) const;       // unit profile
  Vec4 f0_prime(double x) const;
  Vec4 f0_second(double x) const;
};

// The C^2 bump b(z) = (1 - z^2)^3 on [-1, 1], zero outside. b has
// max |b'| = 1.7172... at z^2 = 1/5 and max |b''| = 6 at z = 0.
double bump(double z);
double bump_prime(double z);
double bump_second(double z);

// kind == "bump": f0(x) = weights * b(x). A weight vector like (1,0,0,0)
// excites the two fast families symmetrically.
//
// kind == "comoving_pair": f0 aligns D_y with the matching B_z so that three
// of the four Riemann invariants vanish identically and the data launches a
// single right-moving simple wave of the fastest family:
//   f = (q, 0, 0, G(q)),  q = amplitude * b(x),
//   G(q) = ((K1 + 6 C111 q)^{3/2} - K1^{3/2}) / (9 C111)
// (G(q) = sqrt(K1) q when C111 = 0). G is applied to the full-amplitude q, so
// f0 = f / amplitude carries a weak amplitude dependence; all statistics are
// computed from these exact profiles rather than from a frozen shape.
SeedProfile make_bump_seed(double amplitude, const std::array<double, 4>& weights);
SeedProfile make_comoving_seed(const crystal::CrystalParams& p, double amplitude);

} // namespace shockfan
