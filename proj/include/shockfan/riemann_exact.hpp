#pragma once

#include <array>
#include <functional>

#include "shockfan/crystal.hpp"
#include "shockfan/seed.hpp"

namespace shockfan {
namespace riemann {

// Exact solution machinery for the decoupled crystal (C112 = C122 = 0), where
// the 4x4 system splits into two independent 2x2 systems with global Riemann
// invariants:
//   m^1 = u4 + P1(u1),  m^4 = u4 - P1(u1),
//   m^2 = -u3 + P2(u2), m^3 = -u3 - P2(u2),
// with P_i(q) = integral_0^q sqrt(K_i + 6 C_iii s) ds evaluated in closed
// form. m^i is constant along family-i characteristics, whose speed depends
// on the pair (m^i, m^{5-i}) only. Everything here throws
// CoupledParamsRejected when C112 or C122 is non-zero.

// P_i and its closed form; i is 1 or 2.
double invariant_integral(const crystal::CrystalParams& p, int i, double q);

std::array<double, 4> riemann_invariants(const crystal::CrystalParams& p,
                                         const Vec4& u);
Vec4 invert_invariants(const crystal::CrystalParams& p,
                       const std::array<double, 4>& m);

// Characteristic speed of family i (1-based, sorted fast-to-slow like the
// frame) as a function of its own invariant and the partner invariant
// m^{5-i}. Throws NegativeRadicand when the pair leaves the state domain.
double char_speed(const crystal::CrystalParams& p, int family, double m_own,
                  double m_partner);

// ---------------------------------------------------------------------------
// Cauchy simple wave: compact single-family data on the whole line.
// ---------------------------------------------------------------------------

// A right-moving family-1 simple wave launched by a comoving_pair seed. All
// invariants except m^1 vanish; the solution is u(x, t) = f(z) where z solves
// x = z + lambda(z) t with lambda(z) the (constant in time) speed carried by
// the characteristic through z. Valid strictly before the first crossing.
class SimpleWaveScenario {
public:
  SimpleWaveScenario(const crystal::CrystalParams& p, SeedProfile seed);

  // State at (x, t). Pre-shock only: throws PostShockQuery for t at or beyond
  // the crossing time.
  Vec4 evaluate(double x, double t) const;

  // First crossing of straight-line characteristics,
  //   t_star = min_z ( -1 / lambda'(z) )
  // over z with lambda'(z) < 0. Throws NoShock if lambda' >= 0 everywhere.
  double exact_shock_time() const;

  double lambda_of_z(double z) const;
  double dlambda_dz(double z) const;

private:
  crystal::CrystalParams p_;
  SeedProfile seed_;
  double t_star_;
};

// ---------------------------------------------------------------------------
// Vacuum-crystal interface: a pulse arrives from vacuum at x < 0 and
// transmits into the crystal half-line x > 0.
// ---------------------------------------------------------------------------

// Given the incident vacuum profile evaluated at the boundary (the incident
// pulse rides on the phase t - x, so its boundary value is ftilde(t)), the
// reflected amplitude g and the crystal boundary invariant follow from
// continuity of E_y, E_z, H_y, H_z at x = 0. For each
// decoupled polarization i the matching condition reduces to the scalar
// quartic 3 Z^4 + 4 Z^3 = c_i with
//   c_i = 3 K_i^2 + 4 K_i^{3/2} + 72 C_iii ftilde^i,
// whose unique positive root Z gives
//   g^i = (Z^3 - K_i^{3/2}) / (9 C_iii) - ftilde^i
// and the transmitted invariant m0^i = 2 (ftilde^i + g^i). The left side of
// the quartic is strictly increasing for Z > 0, so bracketed Newton from the
// initial guess (c_i / 3)^{1/4} converges unconditionally (tolerance 1e-14).
struct InterfaceTransmit {
  std::array<double, 2> g;      // reflected amplitudes g^1, g^2
  std::array<double, 2> m0;     // boundary invariants of families 1, 2
  std::array<double, 2> Z;      // quartic roots
};

InterfaceTransmit interface_transmit(const crystal::CrystalParams& p,
                                     const std::array<double, 2>& ftilde);

// Full space-time solution of the interface problem. The incident pulse has
// unit-profile shape per polarization scaled by amplitude; it reaches x = 0
// at time 0 and has passed by time 1 (support of ftilde is (0, 1)).
class InterfaceScenario {
public:
  // profile: scalar shape s(t) with support in (0, 1); the incident
  // polarizations are ftilde^i(t) = amplitude_i * s(t).
  InterfaceScenario(const crystal::CrystalParams& p,
                    std::function<double(double)> profile,
                    std::function<double(double)> profile_prime,
                    std::array<double, 2> amplitudes);

  // State at (x, t): superposed incident + reflected fields for x < 0,
  // transmitted simple waves for x > 0 (each family i carries m^i(x, t) =
  // m0^i(t0) along x = lambda_i(m0^i(t0)) (t - t0)). Throws PostShockQuery
  // past the first crossing on the crystal side.
  Vec4 evaluate(double x, double t) const;

  // Invariant boundary values m0^i(t0) and their time derivative.
  double boundary_invariant(int family, double t0) const;
  double boundary_invariant_prime(int family, double t0) const;

  // Launch speed of the family-i characteristic leaving the boundary at t0.
  double launch_speed(int family, double t0) const;
  double launch_speed_prime(int family, double t0) const;

  // Earliest crossing of boundary-launched characteristics,
  //   t_star = min_{t0} ( t0 + lambda(t0) / lambda'(t0) )  over lambda' > 0.
  // Characteristics launched later with higher speed overtake earlier ones;
  // in the launch-time parametrization that requires lambda' (t0) > 0, the
  // mirror of the Cauchy-side condition lambda'(z) < 0. Throws NoShock when
  // no family steepens.
  double exact_shock_time() const;
  double exact_shock_time(int family) const;

private:
  crystal::CrystalParams p_;
  std::function<double(double)> s_;
  std::function<double(double)> sp_;
  std::array<double, 2> amp_;
  std::array<double, 2> t_star_;
  double t_star_min_;
};

} // namespace riemann
} // namespace shockfan
