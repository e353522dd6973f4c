#pragma once

#include <array>
#include <cstdint>

#include "shockfan/crystal_params.hpp"
#include "shockfan/system_model.hpp"

namespace shockfan {
namespace crystal {

// Derived scalars at one state. d1, d2 are the diagonal susceptibilities,
// c the cross coupling; the eigenvalues of the flux matrix are
// +-sqrt(m +- R). mu and mu_hat are the D_y/D_z eigenvector ratios of the
// fast and slow pair (mu * mu_hat = -1, mu + mu_hat = 2 r / c); mu blows up
// as c -> 0, so the frame construction below never uses the pair. They are
// reported for diagnostics only, with has_mu = false at exactly c = 0.
struct AuxScalars {
  double d1, d2, c;
  double m, r, R;
  double mu, mu_hat;
  bool has_mu;
  std::array<double, 4> sigma_mu;     // per family, sorted like the frame
  std::array<double, 4> sigma_lambda; // orientation making c^i_ii < 0
};

AuxScalars aux_scalars(const CrystalParams& p, double u1, double u2);

// Constitutive maps. The forward map is polynomial:
//   E_y = K1 D_y + 3 C111 D_y^2 + 2 C112 D_y D_z + C122 D_z^2
//   E_z = K2 D_z + C112 D_y^2 + 2 C122 D_y D_z + 3 C222 D_z^2
// The inverse uses the closed-form square-root branch vanishing at E = 0 in
// the decoupled case, and damped Newton from D = 0 otherwise (tolerance 1e-14,
// at most 50 iterations, step halving on residual increase). Throws
// NoConvergence / SingularJacobian.
void E_from_D(const CrystalParams& p, double Dy, double Dz, double& Ey,
              double& Ez);
void D_from_E(const CrystalParams& p, double Ey, double Ez, double& Dy,
              double& Dz);

// Flux matrix a(u): rows 1 and 2 are the constant Maxwell rows (0,0,0,1) and
// (0,0,-1,0); the lower-left 2x2 block carries -c, -d2 / d1, c. Entries are
// affine in u.
Mat4 flux_matrix4(const CrystalParams& p, const Vec4& u);

// Directional derivative (D_v a)(u); constant in u because a is affine.
Mat4 flux_dir_deriv4(const CrystalParams& p, const Vec4& v);

// Conservative flux F(u) = (B_z, -B_y, -E_z(D), E_y(D)) with a = DF.
Vec4 conserved_flux4(const CrystalParams& p, const Vec4& u);

// Fixed-size eigenframe, the workhorse of the hot paths. Families are sorted
// by decreasing eigenvalue: +sqrt(m+R), +sqrt(m-R), -sqrt(m-R), -sqrt(m+R).
struct Frame4 {
  std::array<double, 4> lambda;
  std::array<std::array<double, 4>, 4> e;     // e[i] = eigenvector of family i
  std::array<std::array<double, 4>, 4> estar; // estar[i] = dual covector row
};

// Closed-form eigenframe. Eigenvector directions are evaluated in a
// projective parametrization (n, d) of the slope mu: the pair is
// (r + R, c) for the fast family and (-c, r + R) for the slow one, which is
// the exact rationalization of the mu_+ / mu_- formulas and passes through
// c = 0 without branching, where it reduces to the decoupled eigenvectors.
// The orientation sign sigma_lambda (a fixed sign per family, determined by
// the signs of C111 / C222) is applied always, so c^i_ii < 0 whenever the
// corresponding coefficient is non-zero. Throws NonHyperbolic when the
// families collide (m - R <= 0 would leave the admissible regime, R == 0
// merges the pairs).
Frame4 frame4(const CrystalParams& p, const Vec4& u);

// All 64 structure coefficients c^j_kl = e*^j (D_{e_l} a) e_k in closed form,
// symmetric in (k, l). c4[(j*4 + k)*4 + l].
std::array<double, 64> full_cjkl4(const CrystalParams& p, const Vec4& u);

// The four self-interaction coefficients c^i_ii(u).
std::array<double, 4> clll4(const CrystalParams& p, const Vec4& u);

// Base-metric Gram overlaps <e_l, e_i> of the frame at u, needed by the gamma
// assembly. The crystal base metric is diag(1/2, 1/2, 1/(2 K2), 1/(2 K1)).
std::array<double, 16> overlaps4(const CrystalParams& p, const Frame4& f);

// Fixed-size twin of assemble_gamma (eigenframe.hpp), same index layout
// gamma[(i*4 + l)*4 + m]; kept separate so hot loops stay allocation-free.
std::array<double, 64> gamma_from_c4(const std::array<double, 4>& lambda,
                                     const std::array<double, 64>& c,
                                     const std::array<double, 16>& overlaps);

// Upper bound max_i |lambda_i(u)| = sqrt(m + R); valid also at degenerate
// parameter choices where the eigendecomposition itself would fail.
double max_wave_speed4(const CrystalParams& p, const Vec4& u);

// Largest h and state-ball radius delta for which the susceptibility bounds
//   |K1 - d1| < h K1,   |K2 - d2| < h K2,
//   c^2 < min{ K1 (K2 - h (K1+K2)), (1-K2)(1 - K1 - h (K1+K2)) }
// hold on the whole 2*delta ball. h = h_fraction * min{r0, K2, 1-K1} / (2 m0)
// with 0 < h_fraction < 1 strictly (the bound itself is open). delta is found
// by 64 bisection steps over sampled boundary states and shrunk by 1% to stay
// conservative. A fully linear parameter set satisfies the bounds everywhere;
// delta_max is returned in that case.
struct Admissibility {
  double h = 0.0;
  double delta = 0.0;
};

double h_upper_bound(const CrystalParams& p);
Admissibility admissible_delta(const CrystalParams& p, double h_fraction,
                               double delta_max = 1.0, int boundary_samples = 4096);

// Generic-interface adapters (copy out of the fixed-size structures).
EigenFrame closed_form_eigen(const CrystalParams& p, const Vec& u,
                             double delta);
Mat flux_matrix(const CrystalParams& p, const Vec& u);

// Packages the crystal as a SystemModel with every analytic provider filled
// in. delta comes from admissible_delta(h_fraction) unless delta_override > 0.
SystemModel make_model(const CrystalParams& p, double h_fraction = 0.9,
                       double delta_override = 0.0, double delta_max = 1.0);

} // namespace crystal
} // namespace shockfan
