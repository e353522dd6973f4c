#include "shockfan/crystal.hpp"

#include <algorithm>
#include <cmath>

#include "shockfan/eigenframe.hpp"
#include "shockfan/errors.hpp"

namespace shockfan {
namespace crystal {

namespace {

// Sign with a positive convention at zero, used by the mirrored eigenvector
// parametrization below.
inline double sgn_pm(double x) { return x < 0.0 ? -1.0 : 1.0; }

// Projective eigenvector parameters (n, d) per pair, solving
//   c n = (lambda^2 - d2) d,   c d = (lambda^2 - d1) n.
// For the fast pair (lambda^2 = m + R) the natural choice (r + R, c)
// degenerates when r < 0 and |c| is small; the mirrored form (|c|,
// sgn(c)(R - r)) is the same projective point evaluated without
// cancellation. Both forms agree up to positive scale at r = 0 and reduce to
// the decoupled eigenvectors at c = 0. The slow pair is the orthogonal
// complement.
inline void pair_nd(double r, double c, double R, bool fast, double& n,
                    double& d) {
  if (fast) {
    if (r >= 0.0) {
      n = r + R;
      d = c;
    } else {
      n = std::abs(c);
      d = sgn_pm(c) * (R - r);
    }
  } else {
    if (r >= 0.0) {
      n = -c;
      d = r + R;
    } else {
      n = sgn_pm(c) * (r - R);
      d = std::abs(c);
    }
  }
}

struct FamilyData {
  std::array<double, 4> lambda;
  std::array<double, 4> n, d;
  std::array<double, 4> sigma; // orientation sign per family
  std::array<double, 4> A;     // n^2 + d^2 + lambda^2 (d^2/K2 + n^2/K1)
};

// Shared by frame4 and the closed-form coefficient evaluators. Throws
// NonHyperbolic when eigenvalue gaps collapse.
FamilyData family_data(const CrystalParams& p, const Vec4& u) {
  const AuxScalars s = aux_scalars(p, u[0], u[1]);
  const double det = s.d1 * s.d2 - s.c * s.c; // = (m - R)(m + R)
  if (!(s.m + s.R > 0.0) || !(det > 0.0))
    throw NonHyperbolic("flux matrix loses real distinct wave speeds");

  const double lam_fast = std::sqrt(s.m + s.R);
  // m - R by the product form; the direct difference cancels badly when the
  // pairs nearly merge.
  const double lam_slow = std::sqrt(det / (s.m + s.R));
  if (lam_fast - lam_slow <= kGapTol || 2.0 * lam_slow <= kGapTol)
    throw NonHyperbolic("eigenvalue gap below tolerance");

  FamilyData fd;
  fd.lambda = {lam_fast, lam_slow, -lam_slow, -lam_fast};

  const double s_fast_pos = p.C111 == 0.0 ? 1.0 : (p.C111 > 0.0 ? -1.0 : 1.0);
  const double s_slow_pos = p.C222 == 0.0 ? 1.0 : (p.C222 > 0.0 ? -1.0 : 1.0);
  fd.sigma = {s_fast_pos, s_slow_pos,
              p.C222 == 0.0 ? 1.0 : -s_slow_pos,
              p.C111 == 0.0 ? 1.0 : -s_fast_pos};

  for (int i = 0; i < 4; ++i) {
    const bool fast = (i == 0 || i == 3);
    pair_nd(s.r, s.c, s.R, fast, fd.n[i], fd.d[i]);
    const double l2 = fd.lambda[i] * fd.lambda[i];
    fd.A[i] = fd.n[i] * fd.n[i] + fd.d[i] * fd.d[i] +
              l2 * (fd.d[i] * fd.d[i] / p.K2 + fd.n[i] * fd.n[i] / p.K1);
  }
  return fd;
}

// Symmetric cubic form behind every structure coefficient:
//   Qt(j,k,l) = 3 C111 n_j n_k n_l + C112 sym(n n d) + C122 sym(n d d)
//             + 3 C222 d_j d_k d_l.
inline double qtilde(const CrystalParams& p, const FamilyData& f, int j, int k,
                     int l) {
  const double nj = f.n[j], nk = f.n[k], nl = f.n[l];
  const double dj = f.d[j], dk = f.d[k], dl = f.d[l];
  return 3.0 * p.C111 * nj * nk * nl +
         p.C112 * (nj * nk * dl + nj * dk * nl + dj * nk * nl) +
         p.C122 * (nj * dk * dl + dj * nk * dl + dj * dk * nl) +
         3.0 * p.C222 * dj * dk * dl;
}

} // namespace

void CrystalParams::validate() const {
  if (!(0.0 < K2))
    throw InvalidParams("susceptibility K2 must be positive");
  if (!(K2 < K1))
    throw InvalidParams("susceptibilities must satisfy K2 < K1 (the model is "
                        "anisotropic; equality breaks strict hyperbolicity)");
  if (!(K1 < 1.0))
    throw InvalidParams("susceptibility K1 must stay below the vacuum value 1");
}

AuxScalars aux_scalars(const CrystalParams& p, double u1, double u2) {
  AuxScalars s;
  s.d1 = p.K1 + 6.0 * p.C111 * u1 + 2.0 * p.C112 * u2;
  s.d2 = p.K2 + 2.0 * p.C122 * u1 + 6.0 * p.C222 * u2;
  s.c = 2.0 * p.C112 * u1 + 2.0 * p.C122 * u2;
  s.m = 0.5 * (s.d1 + s.d2);
  s.r = 0.5 * (s.d1 - s.d2);
  s.R = std::hypot(s.r, s.c);

  // Ratios n/d of the two pairs; the fast one is singular at c = 0.
  s.has_mu = s.c != 0.0 && s.r + s.R > 0.0;
  if (s.has_mu) {
    s.mu = (s.r + s.R) / s.c;
    s.mu_hat = -s.c / (s.r + s.R);
  } else {
    s.mu = std::numeric_limits<double>::quiet_NaN();
    s.mu_hat = std::numeric_limits<double>::quiet_NaN();
  }

  const double s_fast_pos = p.C111 == 0.0 ? 1.0 : (p.C111 > 0.0 ? -1.0 : 1.0);
  const double s_slow_pos = p.C222 == 0.0 ? 1.0 : (p.C222 > 0.0 ? -1.0 : 1.0);
  s.sigma_lambda = {s_fast_pos, s_slow_pos,
                    p.C222 == 0.0 ? 1.0 : -s_slow_pos,
                    p.C111 == 0.0 ? 1.0 : -s_fast_pos};
  // Fast-pair eigenvectors have D_z component proportional to c, slow-pair
  // ones proportional to r + R (> 0 here); sigma_mu re-expresses the
  // orientation relative to the mu-normalized vectors.
  double dsign_fast = sgn_pm(s.c);
  s.sigma_mu = {s.sigma_lambda[0] * dsign_fast, s.sigma_lambda[1],
                s.sigma_lambda[2], s.sigma_lambda[3] * dsign_fast};
  return s;
}

void E_from_D(const CrystalParams& p, double Dy, double Dz, double& Ey,
              double& Ez) {
  Ey = p.K1 * Dy + 3.0 * p.C111 * Dy * Dy + 2.0 * p.C112 * Dy * Dz +
       p.C122 * Dz * Dz;
  Ez = p.K2 * Dz + p.C112 * Dy * Dy + 2.0 * p.C122 * Dy * Dz +
       3.0 * p.C222 * Dz * Dz;
}

namespace {

// Decoupled scalar inverse of E = K q + 3 C q^2, the branch through the
// origin. The radicand turning negative means E lies outside the range of
// the constitutive law.
double invert_axis(double K, double C, double E) {
  if (C == 0.0) return E / K;
  const double rad = K * K + 12.0 * C * E;
  if (rad < 0.0)
    throw NoConvergence("field value outside the constitutive branch");
  return (std::sqrt(rad) - K) / (6.0 * C);
}

} // namespace

void D_from_E(const CrystalParams& p, double Ey, double Ez, double& Dy,
              double& Dz) {
  if (p.decoupled()) {
    Dy = invert_axis(p.K1, p.C111, Ey);
    Dz = invert_axis(p.K2, p.C222, Ez);
    return;
  }
  const double tol = 1e-14 * std::max(1.0, std::max(std::abs(Ey), std::abs(Ez)));
  double x = 0.0, y = 0.0;
  double ry, rz;
  E_from_D(p, x, y, ry, rz);
  ry -= Ey;
  rz -= Ez;
  double res = std::max(std::abs(ry), std::abs(rz));
  for (int it = 0; it < 50; ++it) {
    if (res <= tol) {
      Dy = x;
      Dz = y;
      return;
    }
    const double d1 = p.K1 + 6.0 * p.C111 * x + 2.0 * p.C112 * y;
    const double d2 = p.K2 + 2.0 * p.C122 * x + 6.0 * p.C222 * y;
    const double c = 2.0 * p.C112 * x + 2.0 * p.C122 * y;
    const double det = d1 * d2 - c * c;
    if (std::abs(det) < 1e-30)
      throw SingularJacobian("constitutive Jacobian singular during inversion");
    const double sx = (d2 * ry - c * rz) / det;
    const double sy = (d1 * rz - c * ry) / det;
    // Halve the step until the residual actually drops.
    double step = 1.0;
    for (int half = 0; half < 30; ++half) {
      double nx = x - step * sx, ny = y - step * sy;
      double ty, tz;
      E_from_D(p, nx, ny, ty, tz);
      ty -= Ey;
      tz -= Ez;
      const double nres = std::max(std::abs(ty), std::abs(tz));
      if (nres < res || half == 29) {
        x = nx;
        y = ny;
        ry = ty;
        rz = tz;
        res = nres;
        break;
      }
      step *= 0.5;
    }
  }
  if (res <= tol) {
    Dy = x;
    Dz = y;
    return;
  }
  throw NoConvergence("constitutive inversion did not reach tolerance");
}

Mat4 flux_matrix4(const CrystalParams& p, const Vec4& u) {
  const AuxScalars s = aux_scalars(p, u[0], u[1]);
  Mat4 a = Mat4::Zero();
  a(0, 3) = 1.0;
  a(1, 2) = -1.0;
  a(2, 0) = -s.c;
  a(2, 1) = -s.d2;
  a(3, 0) = s.d1;
  a(3, 1) = s.c;
  return a;
}

Mat4 flux_dir_deriv4(const CrystalParams& p, const Vec4& v) {
  const double dd1 = 6.0 * p.C111 * v[0] + 2.0 * p.C112 * v[1];
  const double dd2 = 2.0 * p.C122 * v[0] + 6.0 * p.C222 * v[1];
  const double dc = 2.0 * p.C112 * v[0] + 2.0 * p.C122 * v[1];
  Mat4 a = Mat4::Zero();
  a(2, 0) = -dc;
  a(2, 1) = -dd2;
  a(3, 0) = dd1;
  a(3, 1) = dc;
  return a;
}

Vec4 conserved_flux4(const CrystalParams& p, const Vec4& u) {
  double Ey, Ez;
  E_from_D(p, u[0], u[1], Ey, Ez);
  return Vec4(u[3], -u[2], -Ez, Ey);
}

Frame4 frame4(const CrystalParams& p, const Vec4& u) {
  const FamilyData fd = family_data(p, u);
  Frame4 f;
  f.lambda = fd.lambda;
  for (int i = 0; i < 4; ++i) {
    const double lam = fd.lambda[i];
    const double n = fd.n[i], d = fd.d[i];
    const double escale = fd.sigma[i] * std::sqrt(2.0 / fd.A[i]);
    f.e[i] = {escale * n, escale * d, -escale * lam * d, escale * lam * n};
    // Dual row: (lam n, lam d, -d, n) scaled so that estar_i . e_i = 1; the
    // pairing of the raw direction with the raw dual is 2 lam (n^2 + d^2).
    const double dscale = fd.sigma[i] * std::sqrt(0.5 * fd.A[i]) /
                          (2.0 * lam * (n * n + d * d));
    f.estar[i] = {dscale * lam * n, dscale * lam * d, -dscale * d, dscale * n};
  }
  return f;
}

std::array<double, 64> full_cjkl4(const CrystalParams& p, const Vec4& u) {
  const FamilyData f = family_data(p, u);
  std::array<double, 4> row, col;
  for (int i = 0; i < 4; ++i) {
    const double sqA = std::sqrt(f.A[i]);
    row[i] = f.sigma[i] * sqA /
             (f.lambda[i] * (f.n[i] * f.n[i] + f.d[i] * f.d[i]));
    col[i] = f.sigma[i] / sqA;
  }
  const double rt2 = std::sqrt(2.0);
  std::array<double, 64> c;
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k)
      for (int l = 0; l < 4; ++l)
        c[(j * 4 + k) * 4 + l] =
            rt2 * row[j] * col[k] * col[l] * qtilde(p, f, j, k, l);
  return c;
}

std::array<double, 4> clll4(const CrystalParams& p, const Vec4& u) {
  const FamilyData f = family_data(p, u);
  const double rt2 = std::sqrt(2.0);
  std::array<double, 4> out;
  for (int i = 0; i < 4; ++i) {
    const double nd2 = f.n[i] * f.n[i] + f.d[i] * f.d[i];
    out[i] = f.sigma[i] * rt2 * qtilde(p, f, i, i, i) /
             (f.lambda[i] * nd2 * std::sqrt(f.A[i]));
  }
  return out;
}

std::array<double, 16> overlaps4(const CrystalParams& p, const Frame4& f) {
  const std::array<double, 4> g = {0.5, 0.5, 0.5 / p.K2, 0.5 / p.K1};
  std::array<double, 16> o;
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 4; ++i) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += g[k] * f.e[l][k] * f.e[i][k];
      o[l * 4 + i] = s;
    }
  return o;
}

std::array<double, 64> gamma_from_c4(const std::array<double, 4>& lambda,
                                     const std::array<double, 64>& c,
                                     const std::array<double, 16>& overlaps) {
  auto C = [&](int j, int k, int l) { return c[(j * 4 + k) * 4 + l]; };
  std::array<double, 64> g{};
  auto G = [&](int i, int l, int m) -> double& { return g[(i * 4 + l) * 4 + m]; };

  for (int i = 0; i < 4; ++i) {
    G(i, i, i) = -C(i, i, i);
    for (int m = 0; m < 4; ++m) {
      if (m == i) continue;
      double sum = 0.0;
      for (int l = 0; l < 4; ++l) {
        if (l == i) continue;
        sum += (lambda[i] - lambda[m]) / (lambda[i] - lambda[l]) * C(l, i, m) *
               overlaps[l * 4 + i];
      }
      const double val = 0.5 * (-C(i, m, i) - C(i, i, m) + sum);
      G(i, i, m) = val;
      G(i, m, i) = val;
    }
    for (int l = 0; l < 4; ++l) {
      if (l == i) continue;
      for (int m = 0; m < 4; ++m) {
        if (m == i || m == l) continue;
        G(i, l, m) =
            0.5 * ((lambda[l] - lambda[m]) / (lambda[i] - lambda[l]) * C(i, l, m) +
                   (lambda[m] - lambda[l]) / (lambda[i] - lambda[m]) * C(i, m, l));
      }
    }
  }
  return g;
}

double max_wave_speed4(const CrystalParams& p, const Vec4& u) {
  const AuxScalars s = aux_scalars(p, u[0], u[1]);
  return std::sqrt(std::max(s.m + s.R, 0.0));
}

double h_upper_bound(const CrystalParams& p) {
  p.validate();
  const double r0 = 0.5 * (p.K1 - p.K2);
  const double m0 = 0.5 * (p.K1 + p.K2);
  return std::min({r0, p.K2, 1.0 - p.K1}) / (2.0 * m0);
}

Admissibility admissible_delta(const CrystalParams& p, double h_fraction,
                               double delta_max, int boundary_samples) {
  p.validate();
  if (!(h_fraction > 0.0 && h_fraction < 1.0))
    throw InvalidParams("h_fraction must lie strictly inside (0, 1)");
  if (!(delta_max > 0.0))
    throw InvalidParams("delta_max must be positive");
  if (boundary_samples < 1)
    throw InvalidParams("admissible_delta needs at least one boundary sample");

  Admissibility adm;
  adm.h = h_fraction * h_upper_bound(p);
  if (p.linear()) {
    // d1, d2, c are constant, the susceptibility bounds hold everywhere.
    adm.delta = delta_max;
    return adm;
  }

  const double hk = adm.h * (p.K1 + p.K2);
  const double cbound =
      std::min(p.K1 * (p.K2 - hk), (1.0 - p.K2) * (1.0 - p.K1 - hk));

  // Directions on the unit sphere; the constraint functions are absolute
  // values of linear forms in u, so their maxima over a ball sit on the
  // boundary sphere and scale linearly with the radius.
  std::vector<Vec> dirs = sample_ball(4, 1.0, boundary_samples, 0x5EEDull);
  for (Vec& q : dirs) {
    const double nn = q.norm();
    if (nn > 1e-12) q /= nn;
  }

  auto ok = [&](double rho) {
    for (const Vec& q : dirs) {
      const double u1 = rho * q[0], u2 = rho * q[1];
      const double dev1 = 6.0 * p.C111 * u1 + 2.0 * p.C112 * u2;
      const double dev2 = 2.0 * p.C122 * u1 + 6.0 * p.C222 * u2;
      const double c = 2.0 * p.C112 * u1 + 2.0 * p.C122 * u2;
      if (!(std::abs(dev1) < adm.h * p.K1)) return false;
      if (!(std::abs(dev2) < adm.h * p.K2)) return false;
      if (!(c * c < cbound)) return false;
    }
    return true;
  };

  if (ok(2.0 * delta_max)) {
    adm.delta = delta_max;
    return adm;
  }
  double lo = 0.0, hi = 2.0 * delta_max;
  for (int it = 0; it < 64; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  adm.delta = 0.99 * 0.5 * lo;
  return adm;
}

EigenFrame closed_form_eigen(const CrystalParams& p, const Vec& u,
                             double delta) {
  if (u.size() != 4) throw InvalidParams("crystal states have 4 components");
  if (u.norm() >= 2.0 * delta)
    throw OutOfDomain("state outside the admissible ball");
  Vec4 u4(u[0], u[1], u[2], u[3]);
  const Frame4 f = frame4(p, u4);
  EigenFrame out;
  out.u = u;
  out.lambda.resize(4);
  out.e.resize(4, 4);
  out.estar.resize(4, 4);
  for (int i = 0; i < 4; ++i) {
    out.lambda[i] = f.lambda[i];
    for (int k = 0; k < 4; ++k) {
      out.e(k, i) = f.e[i][k];
      out.estar(i, k) = f.estar[i][k];
    }
  }
  return out;
}

Mat flux_matrix(const CrystalParams& p, const Vec& u) {
  if (u.size() != 4) throw InvalidParams("crystal states have 4 components");
  return flux_matrix4(p, Vec4(u[0], u[1], u[2], u[3]));
}

SystemModel make_model(const CrystalParams& p, double h_fraction,
                       double delta_override, double delta_max) {
  p.validate();
  double delta;
  if (delta_override > 0.0) {
    delta = delta_override;
  } else {
    delta = admissible_delta(p, h_fraction, delta_max).delta;
  }

  SystemModel model;
  model.dimension = 4;
  model.ball_radius = delta;
  model.name = "crystal";
  model.crystal_params = p;

  const double sk1 = std::sqrt(p.K1), sk2 = std::sqrt(p.K2);
  model.base_frame.resize(4, 4);
  model.base_frame << 1, 0, 0, 1,
                      0, 1, 1, 0,
                      0, -sk2, sk2, 0,
                      sk1, 0, 0, -sk1;
  model.metric = BaseMetric(model.base_frame);

  model.flux_matrix = [p](const Vec& u) -> Mat {
    return flux_matrix(p, u);
  };
  model.flux_dir_deriv = [p](const Vec&, const Vec& v) -> Mat {
    return Mat(flux_dir_deriv4(p, Vec4(v[0], v[1], v[2], v[3])));
  };
  model.analytic_frame = [p, delta](const Vec& u) -> EigenFrame {
    return closed_form_eigen(p, u, delta);
  };
  model.conserved_flux = [p](const Vec& u) -> Vec {
    return Vec(conserved_flux4(p, Vec4(u[0], u[1], u[2], u[3])));
  };
  model.max_wave_speed = [p](const Vec& u) -> double {
    return max_wave_speed4(p, Vec4(u[0], u[1], u[2], u[3]));
  };
  return model;
}

} // namespace crystal
} // namespace shockfan
