#pragma once

#include <vector>

#include "shockfan/diagnostics.hpp"

namespace shockfan {

// Size measures of the initial data entering the blow-up window. Quantities
// with subscript 0 use the frame evaluated at the seed state itself; the
// starred pair strips the amplitude (frame at the origin applied to the unit
// profile) and is what the scaling laws are stated in.
struct SeedStats {
  double W0 = 0.0;       // max_i sup_z |e*^i(f(z)) f'(z)|
  double W0_plus = 0.0;  // max_i sup_z  e*^i(f(z)) f'(z)   (signed)
  double W00 = 0.0;      // amplitude-free: max_i sup_z |e*^i(0) f0'(z)|
  double W00_plus = 0.0;
  double L = 0.0;        // sup_z || f0''(z) ||_0 (base metric norm)
};

// Dense scan over the support plus golden-section refinement around the best
// sample. Throws ZeroSeed for identically zero data.
SeedStats seed_stats(const SystemModel& model, const SeedProfile& seed,
                     int scan_points = 4096);

// Two-sided blow-up window from the seed statistics:
//   T_lower = min_i 1 / ((1+eps)^3 |c_iii(0)| W0_plus)
//   T_upper = max_i 1 / ((1-eps)^4 |c_iii(0)| W0_plus)
// eps must lie in (0, 1/100); W0_plus must be positive (ZeroPositivePart).
struct ShockForecast {
  double t_lower = 0.0;
  double t_upper = 0.0;
  double epsilon = 0.0;
};

ShockForecast forecast(const SystemModel& model, const SeedStats& stats,
                       double epsilon = 1e-3);

// Outcome of watching the traced fans for a crossing. t_obs is the first
// recorded time rho dipped to the stop threshold (infinity if never);
// t_extrap extrapolates the per-family minimum of rho to zero by a
// least-squares line through the samples in the last tenth of the observed
// time span, reported with the fit's R^2. rho is asymptotically linear in
// time near a first crossing, so the line is the right model.
struct ShockReport {
  bool detected = false;
  int family = -1;       // 0-based; -1 when nothing steepened
  double z_star = 0.0;   // launch point achieving the minimal rho
  double t_obs = 0.0;
  double t_extrap = 0.0;
  double fit_r2 = 0.0;
  double rho_stop = 0.0;
  double rho_min = 0.0;  // smallest rho ever recorded
};

ShockReport detect_shock(const std::vector<CharacteristicFan>& fans,
                         double rho_stop);

// Checks the observed/extrapolated time against the forecast window widened
// by the relative slack on both sides. Uses t_extrap when a fit is available,
// t_obs otherwise. Throws NoShockDetected when the report holds no detection.
bool validate_window(const ShockReport& report, const ShockForecast& fc,
                     double slack = 0.05);

} // namespace shockfan
