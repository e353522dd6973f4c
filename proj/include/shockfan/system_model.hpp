#pragma once

#include <functional>
#include <optional>
#include <string>

#include "shockfan/base_metric.hpp"
#include "shockfan/crystal_params.hpp"
#include "shockfan/types.hpp"

namespace shockfan {

// Eigenstructure of the flux matrix at one state: eigenvalues sorted strictly
// decreasing (index 0 is the fastest family), right eigenvectors as columns of
// e with unit norm in the base scalar product, and the dual covectors as rows
// of estar with estar.row(i) * e.col(j) = delta_ij.
struct EigenFrame {
  Vec u;
  Vec lambda;
  Mat e;
  Mat estar;

  int dim() const { return static_cast<int>(lambda.size()); }
};

// A quasi-linear system u_t + a(u) u_x = 0 as the rest of the toolkit sees it.
//
// flux_matrix and base_frame are mandatory. The remaining providers are
// optional accelerators / extensions:
//   - flux_dir_deriv: analytic directional derivative (D_v a)(u); when absent,
//     structure coefficients fall back to central finite differences.
//   - analytic_frame: closed-form eigenframe; when absent, a numeric
//     eigendecomposition is used.
//   - conserved_flux: flux F with a = DF, enabling the conservative
//     finite-volume path of the grid solver.
//   - max_wave_speed: cheap upper bound on max_i |lambda_i(u)|, required by
//     the conservative path (it must stay valid where eigenvalues coincide,
//     e.g. the degenerate vacuum model).
struct SystemModel {
  int dimension = 0;
  double ball_radius = 0.0; // delta; states are admissible for |u| < 2*delta
  std::string name;

  Mat base_frame;    // columns: eigenvectors of a(0), sorted like EigenFrame
  BaseMetric metric; // derived from base_frame

  std::function<Mat(const Vec&)> flux_matrix;
  std::function<Mat(const Vec&, const Vec&)> flux_dir_deriv;
  std::function<EigenFrame(const Vec&)> analytic_frame;
  std::function<Vec(const Vec&)> conserved_flux;
  std::function<double(const Vec&)> max_wave_speed;

  // Velocity of the observer frame this model is expressed in, relative to
  // the frame the model was originally built in. Zero for unboosted models;
  // see boosted() below.
  double frame_speed = 0.0;

  // Set when the model is the crystal (possibly boosted). Grid solver and
  // tracer switch to allocation-free fixed-size kernels when present; the
  // generic std::function providers above remain the reference path.
  std::optional<crystal::CrystalParams> crystal_params;
};

// Checks the structural invariants a model must satisfy before use: positive
// dimension and ball radius, invertible base frame whose columns are
// eigenvectors of a(0) to relative tolerance 1e-10. Throws InvalidParams.
void validate_model(const SystemModel& model);

// The same system observed from a frame moving at speed s: the flux matrix
// becomes a - s*I and the conserved flux F - s*u. Eigenvectors, structure
// coefficients, gaps between eigenvalues, and the ball radius are unchanged;
// every eigenvalue shifts by -s. Useful to keep slow features resolved on a
// short grid over long times.
SystemModel boosted(const SystemModel& model, double s);

} // namespace shockfan
