#pragma once

#include <vector>

#include "shockfan/tracer.hpp"

namespace shockfan {

// Running sup diagnostics of a solve, sampled on the stored time levels and
// monotone by construction (each row is a running maximum over all earlier
// times):
//   W: max over families and space of |w^i|, the frame-decomposed gradient
//   V: same, but restricted to points outside every family's closed
//      characteristic strip (the region swept by traces launched in [-1, 1])
//   S: max over traced characteristics of rho
//   J: max over traced characteristics of |v|
//   U: max over space of |u| (Euclidean norm)
// The theory predicts W, J stay of the order of their initial size, S of
// order one, and V of the order of the square of the seed amplitude, all the
// way up to the blow-up time.
struct DiagnosticsHistory {
  std::vector<double> t;
  std::vector<double> W;
  std::vector<double> V;
  std::vector<double> S;
  std::vector<double> J;
  std::vector<double> U;
};

DiagnosticsHistory sup_diagnostics(const SystemModel& model,
                                   const std::vector<CharacteristicFan>& fans,
                                   const GridSolution& solution);

// Second-order quantities along each trace of a fan, by centered differences
// in the launch parameter z on the (nonuniform) recorded samples:
//   rho_z(z, t), v_z(z, t)
// Used to corroborate that the fan stays a smooth graph until rho degenerates.
// Throws DegenerateFan when the fan has fewer than three traces.
struct FanDerivatives {
  std::vector<double> z;          // interior launch points
  std::vector<double> rho_z_max;  // max over time of |d rho / d z| per z
  std::vector<double> v_z_max;
};

FanDerivatives second_order_diagnostics(const CharacteristicFan& fan);

} // namespace shockfan
