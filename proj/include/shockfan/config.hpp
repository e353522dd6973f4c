#pragma once

#include <array>
#include <string>
#include <vector>

#include "shockfan/crystal.hpp"
#include "shockfan/grid_solver.hpp"
#include "shockfan/seed.hpp"

namespace shockfan {

// Scenario file: TOML-style sections of key = value lines. Recognized
// sections are [model], [seed], [numerics], [exact], [output]; unknown
// sections or keys are rejected (ConfigError), as are malformed values.
// Values are numbers, booleans, quoted strings, or flat numeric arrays.

struct SeedSection {
  std::string kind = "bump"; // bump | comoving_pair | zero
  double amplitude = 0.0;
  std::array<double, 4> weights{1.0, 0.0, 0.0, 0.0};
};

struct NumericsSection {
  double x_lo = -2.0;
  double x_hi = 2.0;
  double dx = 1e-2;
  double cfl = 0.9;
  double t_end = 0.0; // 0 = auto: 1.1 * forecast upper bound
  std::string scheme = "conservative";
  std::string limiter = "none";
  double level_budget_mb = 1536.0;
  int z_count = 401;
  double z_lo = -1.5;
  double z_hi = 1.5;
  double rho_stop = 0.01;
  double trace_dt = 0.0;  // 0 = tracer default
  double record_dt = 0.0;
  double epsilon = 1e-3;  // forecast sharpening parameter
  double slack = 0.05;    // window validation slack
  int scan_points = 4096; // seed statistics scan density
  int margin_samples = 4096; // hyperbolicity / nonlinearity sampling
  double gradient_cap_factor = 50.0; // cap = factor * initial max |f'|
};

struct ExactSection {
  std::string kind = "cauchy"; // cauchy | interface
  std::array<double, 2> amplitudes{0.0, 0.0}; // interface polarizations
  std::vector<double> slice_times;
  double slice_x_lo = 0.0;
  double slice_x_hi = 2.0;
  int slice_nx = 401;
};

struct OutputSection {
  std::string directory = "out";
  bool fans = true;
  bool diagnostics = true;
  bool report = true;
  bool slices = true;
};

struct Scenario {
  crystal::CrystalParams params;
  double h_fraction = 0.9;
  double delta_override = 0.0;
  double delta_max = 1.0;
  double frame_speed = 0.0; // Galilean boost applied to the whole run
  double c_switch = 0.0;    // accepted for compatibility; the closed-form
                            // frame is branch-free, so the value is unused
  SeedSection seed;
  NumericsSection numerics;
  ExactSection exact;
  OutputSection output;
};

// Parses and validates; every violated precondition of a downstream
// operation that is checkable from the file alone is reported here with the
// offending key. Throws ConfigError.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text, const std::string& origin);

// Assembled pieces. scenario_model applies the frame boost.
SystemModel scenario_model(const Scenario& sc);
SeedProfile scenario_seed(const Scenario& sc);
SolveOptions scenario_solve_options(const Scenario& sc, double t_end,
                                    int threads);

} // namespace shockfan
