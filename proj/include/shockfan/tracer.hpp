#pragma once

#include <vector>

#include "shockfan/grid_solver.hpp"

namespace shockfan {

// One characteristic of one family, integrated through a stored grid
// solution, together with the linearized quantities transported along it:
//   X' = lambda_i(u(X, t))            X(0) = z
//   rho' = c_iii v + (sum_{m != i} c_iim w^m) rho      rho(0) = 1
//   v'   = (sum_{m != i} (2 gamma_iim + c_iim) w^m) v
//          + (sum_{l,m != i, l != m} gamma_ilm w^l w^m) rho   v(0) = w^i(z, 0)
// rho is the stretching of the characteristic flow map, v the rescaled
// gradient component rho * w^i; rho -> 0 signals a crossing (gradient
// blow-up). w^m for m != i is read from the grid gradient; the family's own
// w^i is carried as v / rho while rho stays away from zero and from the grid
// otherwise.
struct CharacteristicTrace {
  double z = 0.0;    // launch point
  std::vector<double> t;
  std::vector<double> X;
  std::vector<double> rho;
  std::vector<double> v;
  std::vector<double> w; // grid-sampled own component w^i(X(t), t)
  // Last time the trace is trustworthy: the solve's t_end, or the moment the
  // characteristic exits the grid domain. Samples beyond valid_until are not
  // recorded.
  double valid_until = 0.0;
  bool stopped_on_rho = false; // rho reached the stop threshold
};

struct CharacteristicFan {
  int family = 0; // 0-based
  std::vector<CharacteristicTrace> traces;
  bool any_stopped() const;
};

struct TraceOptions {
  double dt = 0.0;        // integration step; 0 = twice the stored cadence
  double record_dt = 0.0; // sample cadence; 0 = every accepted step
  double rho_stop = 0.0;  // stop a trace when rho <= rho_stop (0 disables)
  int threads = 0;
};

// Integrates one characteristic per entry of z_grid (classic RK4; the grid
// solution is frozen, so no step control is needed beyond the stored
// cadence). family is 0-based, fastest first.
CharacteristicFan trace_characteristics(const SystemModel& model,
                                        const GridSolution& solution,
                                        int family,
                                        const std::vector<double>& z_grid,
                                        const TraceOptions& opt);

// The standard launch grid: n uniformly spaced points spanning [lo, hi], with
// the support endpoints -1 and 1 appended when absent (the extreme
// characteristics of a compact seed are exactly straight and make good
// checks).
std::vector<double> standard_z_grid(int n, double lo, double hi);

} // namespace shockfan
