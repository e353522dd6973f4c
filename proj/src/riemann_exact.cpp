#include "shockfan/riemann_exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shockfan/root_find.hpp"

namespace shockfan {
namespace riemann {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_decoupled(const crystal::CrystalParams& p) {
  if (!p.decoupled())
    throw CoupledParamsRejected(
        "Riemann invariants exist only for decoupled polarizations "
        "(C112 = C122 = 0); the coupled system provably has none");
}

// (K, C, sign) of a 1-based family index. Families 1, 4 ride the D_y
// polarization, 2, 3 the D_z one; 1, 2 move right, 3, 4 left.
struct FamilyAxis {
  double K;
  double C;
  double sign;
};

FamilyAxis family_axis(const crystal::CrystalParams& p, int family) {
  switch (family) {
    case 1: return {p.K1, p.C111, 1.0};
    case 2: return {p.K2, p.C222, 1.0};
    case 3: return {p.K2, p.C222, -1.0};
    case 4: return {p.K1, p.C111, -1.0};
    default:
      throw InvalidParams("family index must lie in 1..4");
  }
}

} // namespace

double invariant_integral(const crystal::CrystalParams& p, int i, double q) {
  require_decoupled(p);
  if (i != 1 && i != 2)
    throw InvalidParams("polarization index must be 1 or 2");
  const double K = i == 1 ? p.K1 : p.K2;
  const double C = i == 1 ? p.C111 : p.C222;
  if (C == 0.0) return std::sqrt(K) * q;
  const double base = K + 6.0 * C * q;
  if (base < 0.0)
    throw NegativeRadicand("state outside the hyperbolic range of the axis");
  return (std::pow(base, 1.5) - std::pow(K, 1.5)) / (9.0 * C);
}

std::array<double, 4> riemann_invariants(const crystal::CrystalParams& p,
                                         const Vec4& u) {
  require_decoupled(p);
  const double P1 = invariant_integral(p, 1, u[0]);
  const double P2 = invariant_integral(p, 2, u[1]);
  return {u[3] + P1, -u[2] + P2, -u[2] - P2, u[3] - P1};
}

Vec4 invert_invariants(const crystal::CrystalParams& p,
                       const std::array<double, 4>& m) {
  require_decoupled(p);
  auto axis_state = [](double K, double C, double diff) {
    // diff = m_fast - m_slow = 2 * invariant_integral(q); inverted in closed
    // form through the three-halves power.
    if (C == 0.0) return diff / (2.0 * std::sqrt(K));
    const double y = std::pow(K, 1.5) + 4.5 * C * diff;
    if (y < 0.0)
      throw NegativeRadicand("invariant pair leaves the hyperbolic range");
    return (std::cbrt(y * y) - K) / (6.0 * C);
  };
  Vec4 u;
  u[0] = axis_state(p.K1, p.C111, m[0] - m[3]);
  u[1] = axis_state(p.K2, p.C222, m[1] - m[2]);
  u[2] = -0.5 * (m[1] + m[2]);
  u[3] = 0.5 * (m[0] + m[3]);
  return u;
}

double char_speed(const crystal::CrystalParams& p, int family, double m_own,
                  double m_partner) {
  require_decoupled(p);
  const FamilyAxis ax = family_axis(p, family);
  const double diff =
      ax.sign > 0.0 ? m_own - m_partner : m_partner - m_own;
  const double y = std::pow(ax.K, 1.5) + 4.5 * ax.C * diff;
  if (y <= 0.0)
    throw NegativeRadicand("invariant pair leaves the hyperbolic range");
  return ax.sign * std::cbrt(y);
}

// ---------------------------------------------------------------------------
// Cauchy simple wave
// ---------------------------------------------------------------------------

SimpleWaveScenario::SimpleWaveScenario(const crystal::CrystalParams& p,
                                       SeedProfile seed)
    : p_(p), seed_(std::move(seed)) {
  p_.validate();
  require_decoupled(p_);
  if (seed_.kind != "comoving_pair")
    throw InvalidParams(
        "the simple-wave oracle needs comoving_pair initial data; a generic "
        "bump launches all four families");
  if (p_.K1 + 6.0 * p_.C111 * seed_.amplitude <= 0.0)
    throw OutOfDomain("seed amplitude leaves the hyperbolic regime");

  // Earliest crossing of the straight characteristics. lambda' < 0 is the
  // compression condition; the crossing time of the envelope is the minimum
  // of -1/lambda' over compressed launch points.
  const int n = 8192;
  double best = 0.0, zbest = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double z = -1.0 + 2.0 * k / n;
    const double g = -dlambda_dz(z);
    if (g > best) {
      best = g;
      zbest = z;
    }
  }
  if (best <= 0.0) {
    t_star_ = kInf;
  } else {
    const double dz = 2.0 / n;
    const double z1 = golden_max(
        [this](double z) { return -dlambda_dz(z); }, zbest - dz, zbest + dz,
        1e-14);
    t_star_ = 1.0 / std::max(best, -dlambda_dz(z1));
  }
}

double SimpleWaveScenario::lambda_of_z(double z) const {
  const double q = seed_.amplitude * bump(z);
  return std::sqrt(p_.K1 + 6.0 * p_.C111 * q);
}

double SimpleWaveScenario::dlambda_dz(double z) const {
  const double qp = seed_.amplitude * bump_prime(z);
  return 3.0 * p_.C111 * qp / lambda_of_z(z);
}

double SimpleWaveScenario::exact_shock_time() const {
  if (!std::isfinite(t_star_))
    throw NoShock("no compression anywhere in the seed");
  return t_star_;
}

Vec4 SimpleWaveScenario::evaluate(double x, double t) const {
  if (t < 0.0) throw InvalidParams("the scenario starts at t = 0");
  if (t >= t_star_)
    throw PostShockQuery("query at or past the first characteristic crossing");
  if (t == 0.0) return seed_.f(x);

  const double a = std::sqrt(p_.K1);
  const double b = std::sqrt(p_.K1 + 6.0 * p_.C111 * seed_.amplitude);
  const double lam_lo = std::min(a, b), lam_hi = std::max(a, b);
  // x = z + lambda(z) t is strictly increasing in z pre-shock.
  const double lo = x - lam_hi * t - 1.0;
  const double hi = x - lam_lo * t + 1.0;
  auto F = [&](double z) { return z + lambda_of_z(z) * t - x; };
  auto dF = [&](double z) { return 1.0 + dlambda_dz(z) * t; };
  const double z = newton_bisect(F, dF, lo, hi, x - lambda_of_z(x) * t,
                                 1e-14 * std::max(1.0, std::abs(x)));
  return seed_.f(z);
}

// ---------------------------------------------------------------------------
// Vacuum-crystal interface
// ---------------------------------------------------------------------------

InterfaceTransmit interface_transmit(const crystal::CrystalParams& p,
                                     const std::array<double, 2>& ftilde) {
  require_decoupled(p);
  InterfaceTransmit out;
  for (int i = 0; i < 2; ++i) {
    const double K = i == 0 ? p.K1 : p.K2;
    const double C = i == 0 ? p.C111 : p.C222;
    const double sK = std::sqrt(K);
    const double f = ftilde[i];

    // The matching condition collapses to 3 Z^4 + 4 Z^3 = cconst with
    // Z^4 = K^2 + 12 C (f - g); the left side is strictly increasing for
    // Z > 0, so the positive root is unique.
    const double cconst = 3.0 * K * K + 4.0 * K * sK + 72.0 * C * f;
    if (!(cconst > 0.0))
      throw NonPositiveConstant(
          "incident amplitude drives the quartic constant non-positive");
    auto phi = [&](double Z) { return (3.0 * Z + 4.0) * Z * Z * Z - cconst; };
    auto dphi = [&](double Z) { return 12.0 * Z * Z * (Z + 1.0); };
    const double hi = std::max(1.0, cconst);
    const double guess = std::pow(cconst / 3.0, 0.25);
    const double Z = newton_bisect(phi, dphi, 0.0, hi, guess, 1e-14);
    out.Z[i] = Z;

    if (C == 0.0) {
      // Linear limit: classic reflection at an impedance step.
      out.g[i] = f * (1.0 - sK) / (1.0 + sK);
    } else {
      out.g[i] = (Z * Z * Z - K * sK) / (9.0 * C) - f;
    }
    out.m0[i] = 2.0 * (f + out.g[i]);
  }
  return out;
}

InterfaceScenario::InterfaceScenario(const crystal::CrystalParams& p,
                                     std::function<double(double)> profile,
                                     std::function<double(double)> profile_prime,
                                     std::array<double, 2> amplitudes)
    : p_(p), s_(std::move(profile)), sp_(std::move(profile_prime)),
      amp_(amplitudes) {
  p_.validate();
  require_decoupled(p_);
  if (!s_ || !sp_) throw InvalidParams("interface scenario needs a profile");

  for (int fam = 1; fam <= 2; ++fam) {
    double best = kInf;
    const int n = 4096;
    double gbest = 0.0, tbest = 0.0;
    for (int k = 1; k < n; ++k) {
      const double t0 = static_cast<double>(k) / n;
      const double lp = launch_speed_prime(fam, t0);
      if (lp <= 0.0) continue;
      const double cand = t0 + launch_speed(fam, t0) / lp;
      if (cand < best) {
        best = cand;
        gbest = lp;
        tbest = t0;
      }
    }
    if (gbest > 0.0) {
      const double dt = 1.0 / n;
      const double t1 = golden_max(
          [this, fam](double t0) {
            const double lp = launch_speed_prime(fam, t0);
            if (lp <= 0.0) return -kInf;
            return -(t0 + launch_speed(fam, t0) / lp);
          },
          std::max(0.0, tbest - dt), std::min(1.0, tbest + dt), 1e-14);
      const double lp1 = launch_speed_prime(fam, t1);
      if (lp1 > 0.0)
        best = std::min(best, t1 + launch_speed(fam, t1) / lp1);
    }
    t_star_[fam - 1] = best;
  }
  t_star_min_ = std::min(t_star_[0], t_star_[1]);
}

double InterfaceScenario::boundary_invariant(int family, double t0) const {
  if (family != 1 && family != 2)
    throw InvalidParams("only the right-moving families launch from the wall");
  if (t0 <= 0.0 || t0 >= 1.0) return 0.0;
  std::array<double, 2> ft{0.0, 0.0};
  ft[family - 1] = amp_[family - 1] * s_(t0);
  return interface_transmit(p_, ft).m0[family - 1];
}

double InterfaceScenario::boundary_invariant_prime(int family,
                                                   double t0) const {
  if (family != 1 && family != 2)
    throw InvalidParams("only the right-moving families launch from the wall");
  if (t0 <= 0.0 || t0 >= 1.0) return 0.0;
  std::array<double, 2> ft{0.0, 0.0};
  ft[family - 1] = amp_[family - 1] * s_(t0);
  const InterfaceTransmit tr = interface_transmit(p_, ft);
  // Differentiating Z^3 = K^{3/2} + 9 C (f + g) against
  // Z^4 = K^2 + 12 C (f - g) gives g' = f' (1 - Z)/(1 + Z), hence
  // m0' = 4 f' / (1 + Z). Also valid in the linear limit.
  const double fp = amp_[family - 1] * sp_(t0);
  return 4.0 * fp / (1.0 + tr.Z[family - 1]);
}

double InterfaceScenario::launch_speed(int family, double t0) const {
  const double K = family == 1 ? p_.K1 : p_.K2;
  const double C = family == 1 ? p_.C111 : p_.C222;
  const double y =
      std::pow(K, 1.5) + 4.5 * C * boundary_invariant(family, t0);
  if (y <= 0.0)
    throw NegativeRadicand("transmitted invariant leaves the hyperbolic range");
  return std::cbrt(y);
}

double InterfaceScenario::launch_speed_prime(int family, double t0) const {
  const double C = family == 1 ? p_.C111 : p_.C222;
  if (C == 0.0) return 0.0;
  const double lam = launch_speed(family, t0);
  return 1.5 * C * boundary_invariant_prime(family, t0) / (lam * lam);
}

double InterfaceScenario::exact_shock_time(int family) const {
  if (family != 1 && family != 2)
    throw InvalidParams("only the right-moving families launch from the wall");
  if (!std::isfinite(t_star_[family - 1]))
    throw NoShock("this family never steepens");
  return t_star_[family - 1];
}

double InterfaceScenario::exact_shock_time() const {
  if (!std::isfinite(t_star_min_))
    throw NoShock("no transmitted family steepens");
  return t_star_min_;
}

Vec4 InterfaceScenario::evaluate(double x, double t) const {
  if (t < 0.0) throw InvalidParams("the pulse reaches the wall at t = 0");
  // The classical picture ends globally at the first crossing, even though
  // the overlap region is local at first; the multivalued scan below stays
  // as a safety net.
  if (t >= t_star_min_)
    throw PostShockQuery("transmitted wave has broken by this time");

  if (x < 0.0) {
    // Vacuum: superposition of the incident pulse and the reflected one.
    // Both profiles are supported in (0, 1) of their phase variable.
    const double ti = t - x;
    double fi1 = 0.0, fi2 = 0.0;
    if (ti > 0.0 && ti < 1.0) {
      fi1 = amp_[0] * s_(ti);
      fi2 = amp_[1] * s_(ti);
    }
    double g1 = 0.0, g2 = 0.0;
    const double tr = t + x;
    if (tr > 0.0 && tr < 1.0) {
      const InterfaceTransmit itr = interface_transmit(
          p_, {amp_[0] * s_(tr), amp_[1] * s_(tr)});
      g1 = itr.g[0];
      g2 = itr.g[1];
    }
    return Vec4(fi1 - g1, fi2 - g2, -fi2 - g2, fi1 + g1);
  }

  // Crystal: each right-moving family carries its boundary invariant along a
  // straight characteristic x = lambda(m0(t0)) (t - t0).
  std::array<double, 4> m{0.0, 0.0, 0.0, 0.0};
  for (int fam = 1; fam <= 2; ++fam) {
    const double quiet = std::sqrt(fam == 1 ? p_.K1 : p_.K2);
    auto psi = [&](double t0) {
      return launch_speed(fam, t0) * (t - t0) - x;
    };

    double root = kInf;
    int roots = 0;
    auto add_root = [&](double t0) {
      if (roots > 0 && std::abs(t0 - root) < 1e-9 * std::max(1.0, t)) return;
      root = t0;
      ++roots;
    };

    // Trailing quiet region: characteristics launched after the pulse.
    const double t_trail = t - x / quiet;
    if (t_trail >= 1.0) add_root(t_trail);

    // Launches inside the pulse support, bracketed on a scan grid.
    const int n = 2048;
    const double upper = std::min(t, 1.0);
    if (upper > 0.0) {
      double prev_t0 = 0.0;
      double prev = psi(prev_t0);
      for (int k = 1; k <= n; ++k) {
        const double t0 = upper * k / n;
        const double cur = psi(t0);
        if (prev == 0.0) add_root(prev_t0);
        else if ((prev < 0.0) != (cur < 0.0)) {
          const double r = bisect(psi, prev_t0, t0, 1e-15);
          add_root(r);
        }
        prev_t0 = t0;
        prev = cur;
      }
      if (prev == 0.0) add_root(prev_t0);
    }
    if (roots > 1)
      throw PostShockQuery(
          "several characteristics of one family reach this point; the "
          "classical transmitted wave has already broken");
    if (roots == 1 && root > 0.0 && root < 1.0)
      m[fam - 1] = boundary_invariant(fam, root);
    // No root or a root in the quiet regions both mean the undisturbed state.
  }
  return invert_invariants(p_, m);
}

} // namespace riemann
} // namespace shockfan
