#pragma once

#include <cstdint>
#include <string>

namespace shockfan {

struct CliOptions {
  std::string command;
  std::string config_path;
  std::string out_dir; // empty = scenario's [output] directory
  int threads = 0;
  std::uint64_t seed = 0; // sampling seed for margin / nonlinearity checks
  // Test hook: deliberately flips one eigenvector sign before the duality
  // check so the verify suite's failure path can be exercised.
  bool break_sign_convention = false;
};

// Exit codes: 0 success, 1 verify-suite failure, 2 configuration error,
// 3 runtime solver error.
int run_command(const CliOptions& opt);

int cmd_simulate(const CliOptions& opt);
int cmd_forecast(const CliOptions& opt);
int cmd_exact(const CliOptions& opt);
int cmd_verify(const CliOptions& opt);

} // namespace shockfan
