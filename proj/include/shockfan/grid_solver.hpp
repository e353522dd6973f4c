#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "shockfan/seed.hpp"
#include "shockfan/system_model.hpp"

namespace shockfan {

// Gradient steepening observed during the solve; recorded, not thrown. The
// characteristic tracer decides downstream whether a blow-up is underway.
struct SteepnessEvent {
  double t = 0.0;
  double x = 0.0;
  double grad_norm = 0.0;
};

struct SolveOptions {
  double t_end = 0.0;
  double cfl = 0.9;
  double dx = 1e-2;
  double x_lo = -2.0;
  double x_hi = 2.0;
  // "conservative": MUSCL reconstruction with local Lax-Friedrichs fluxes and
  // SSP-RK2, available when the model carries a conserved flux.
  // "primitive": first-order characteristic upwind on u_t + a(u) u_x = 0,
  // the fallback for models given only through a(u).
  std::string scheme = "conservative";
  // Slope limiter for the conservative scheme: "none" keeps unlimited central
  // slopes (second order everywhere, the right choice for the smooth
  // pre-shock regime), "minmod" and "mc" are the usual TVD choices.
  std::string limiter = "none";
  // Gradient magnitude (max-norm over components) that triggers a
  // SteepnessEvent record. Non-positive disables.
  double gradient_cap = 0.0;
  // Abort the solve with OutOfBall when |u| leaves the model ball.
  bool enforce_ball = true;
  // Memory budget for stored time levels; the storage stride is chosen as
  // ceil(total_levels / capacity) so the solution always fits.
  double level_budget_mb = 1536.0;
  int threads = 0; // 0 = library default
};

// Dense output of the reference solve: a subsequence of time levels, each a
// full spatial grid of states. Queries interpolate cubically in x (four-point
// Lagrange on the uniform grid) and linearly in t between stored levels.
class GridSolution {
public:
  GridSolution(std::vector<double> x, std::vector<double> times,
               std::vector<std::vector<Vec4>> levels, int dim);

  int dim() const { return dim_; }
  double x_lo() const { return x_.front(); }
  double x_hi() const { return x_.back(); }
  double dx() const { return dx_; }
  double t_end() const { return times_.back(); }
  const std::vector<double>& grid() const { return x_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<std::vector<Vec4>>& levels() const { return levels_; }

  // State and spatial gradient at an interior point. Throws
  // InterpolationOutOfRange outside [x_lo, x_hi] x [0, t_end].
  Vec4 state_at(double x, double t) const;
  Vec4 gradient_at(double x, double t) const;

  // Both in one pass (the tracer needs both each step).
  void sample(double x, double t, Vec4& u, Vec4& ux) const;

  std::vector<SteepnessEvent> steepness_events;

private:
  int level_index(double t) const;
  void sample_level(int level, double x, Vec4& u, Vec4& ux) const;

  std::vector<double> x_;
  std::vector<double> times_;
  std::vector<std::vector<Vec4>> levels_;
  int dim_;
  double dx_;
};

// Finite-volume / finite-difference reference solve of
//   u_t + a(u) u_x = 0,   u(x, 0) = seed(x)
// on [x_lo, x_hi] with outflow (zero-gradient) ghost cells. The time step is
// cfl * dx / alpha with alpha the grid-wide maximum wave speed, re-evaluated
// every step; a step that would still violate the CFL condition after
// re-evaluation aborts with CFLViolation. States leaving the model ball abort
// with OutOfBall when enforce_ball is set.
GridSolution reference_solve(const SystemModel& model, const SeedProfile& seed,
                             const SolveOptions& opt);

// Same entry point with an arbitrary initial state function (exact-solution
// comparisons start grids from mid-evolution snapshots).
GridSolution reference_solve(const SystemModel& model,
                             const std::function<Vec4(double)>& init,
                             const SolveOptions& opt);

// Library-wide thread count actually used for a requested value (clamped to
// the OpenMP limit; 1 when built without OpenMP).
int effective_threads(int requested);

} // namespace shockfan
