#pragma once

namespace shockfan {
namespace crystal {

// Electromagnetic plane waves in a cubic-nonlinearity crystal, reduced to one
// space dimension. The state is u = (D_y, D_z, B_y, B_z); the constitutive
// law derives E from a quartic energy density with quadratic corrections
// controlled by the C coefficients.
struct CrystalParams {
  double K1 = 0.0;
  double K2 = 0.0;
  double C111 = 0.0;
  double C112 = 0.0;
  double C122 = 0.0;
  double C222 = 0.0;

  bool decoupled() const { return C112 == 0.0 && C122 == 0.0; }
  bool linear() const {
    return C111 == 0.0 && C112 == 0.0 && C122 == 0.0 && C222 == 0.0;
  }

  // Enforces 0 < K2 < K1 < 1. The raw aggregate may hold anything (the
  // degenerate vacuum model K1 = K2 = 1 is legitimate for solver tests);
  // operations that rely on strict hyperbolicity at 0 call this first.
  void validate() const;
};

} // namespace crystal
} // namespace shockfan
