#pragma once

#include <cstdint>
#include <vector>

#include "shockfan/system_model.hpp"

namespace shockfan {

// Tolerances shared by the generic eigenstructure machinery.
// gap_tol declares two eigenvalues coincident; sign_tol is the threshold under
// which the genuine-nonlinearity sign rule is considered undecidable and the
// orientation falls back to continuity with the base frame.
inline constexpr double kGapTol = 1e-12;
inline constexpr double kSignTol = 1e-12;

// Eigenframe of a(u), numerically decomposed and normalized.
//
// Preconditions: |u| < 2*delta and a(u) has real, pairwise distinct
// eigenvalues. Eigenvalues are sorted strictly decreasing; each eigenvector is
// normalized to unit base-metric norm and oriented so that the self-interaction
// coefficient c^i_ii(u) is negative. Families for which |c^i_ii| < sign_tol
// (not genuinely nonlinear there) are instead oriented to have positive
// base-metric overlap with the base-frame column of the same index.
//
// When the model provides analytic_frame, that provider is used verbatim.
// Throws OutOfDomain when |u| >= 2*delta, NonHyperbolic on complex or
// coincident (within gap_tol) eigenvalues.
EigenFrame eigenframe(const SystemModel& model, const Vec& u);

// Directional derivative (D_v a)(u), from the model's analytic provider when
// present, otherwise by 4th-order central differences with step
// fd_step_rel * delta along v. The finite-difference stencil must stay inside
// the 2*delta ball, else OutOfDomain.
Mat flux_directional_derivative(const SystemModel& model, const Vec& u,
                                const Vec& v, double fd_step_rel = 1e-5);

// First-variation coefficients of the flux matrix in the frame at u, and the
// derived quadratic interaction coefficients used by the along-characteristic
// ODEs:
//   c^j_kl = e*^j (D_{e_l} a) e_k,
//   gamma assembled from c, the eigenvalue gaps, and base-metric overlaps.
// gamma is symmetric in its last two indices, gamma^i_ii = -c^i_ii and
// gamma^i_ll = 0 for l != i.
struct StructureCoefficients {
  int n = 0;
  std::vector<double> c;     // c[(j*n + k)*n + l]
  std::vector<double> gamma; // gamma[(i*n + l)*n + m]

  double cjkl(int j, int k, int l) const { return c[(j * n + k) * n + l]; }
  double g(int i, int l, int m) const { return gamma[(i * n + l) * n + m]; }
};

StructureCoefficients structure_coeffs(const SystemModel& model, const Vec& u,
                                       const EigenFrame& frame,
                                       double fd_step_rel = 1e-5);

// Assembles gamma from already-known ingredients. Exposed separately so that
// closed-form coefficient providers (see crystal.hpp) can reuse the exact same
// assembly. overlaps(l,i) = <e_l, e_i> in the base metric.
std::vector<double> assemble_gamma(const Vec& lambda,
                                   const std::vector<double>& c,
                                   const Mat& overlaps);

// Deterministic low-discrepancy sampler for the ball |u| < radius, used by the
// sampling-based estimates below. Additive-recurrence sequence with a
// seed-dependent offset; the same seed always produces the same points.
std::vector<Vec> sample_ball(int dim, double radius, int count,
                             std::uint64_t seed);

// Sampled estimate of the uniform hyperbolicity margin on the 2*delta ball:
//   sigma = min over ordered pairs k < l of (inf_u lambda_k - sup_u lambda_l),
// with the inf and sup taken independently over the samples. This is the
// margin that controls strip separation. It is an estimate, not a certificate;
// the sample count and seed are caller-controlled. Throws NonHyperbolic if any
// sample fails to decompose, InvalidParams if samples < 1.
double hyperbolicity_margin(const SystemModel& model, double delta,
                            int samples, std::uint64_t seed = 0);

// Time after which characteristic strips launched from [-1, 1] are pairwise
// disjoint: t0 = 2 / sigma. Throws NonPositiveMargin for sigma <= 0.
double separation_time(double sigma);

// Per-family genuine-nonlinearity report: family i is true iff c^i_ii(u) < 0
// at every sample in the 2*delta ball (the sign convention makes this the
// right one-sided test). With samples == 0 the result is vacuously true and
// `tested` is false.
struct GenuineNonlinearity {
  std::vector<bool> family;
  bool tested = false;
  bool all() const {
    for (bool b : family)
      if (!b) return false;
    return !family.empty();
  }
};

GenuineNonlinearity genuine_nonlinearity_check(const SystemModel& model,
                                               double delta, int samples,
                                               std::uint64_t seed = 0);

} // namespace shockfan
