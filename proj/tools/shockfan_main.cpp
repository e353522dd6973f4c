#include <CLI11.hpp>

#include "shockfan/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"shock formation toolkit for 1+1D quasi-linear hyperbolic "
               "systems, specialized to plane waves in a nonlinear crystal"};
  app.require_subcommand(1);

  shockfan::CliOptions opt;
  auto add_common = [&](CLI::App* sub, bool config_required) {
    CLI::Option* c =
        sub->add_option("--config,-c", opt.config_path, "scenario file");
    if (config_required) c->required();
    sub->add_option("--out,-o", opt.out_dir,
                    "output directory (overrides the scenario's [output])");
    sub->add_option("--threads,-j", opt.threads, "worker threads (0 = auto)");
    sub->add_option("--seed", opt.seed,
                    "seed for the deterministic ball-sampling estimates");
  };

  add_common(app.add_subcommand(
                 "simulate",
                 "reference solve, characteristic fans, shock report"),
             true);
  add_common(app.add_subcommand(
                 "forecast",
                 "seed statistics and the predicted blow-up window"),
             true);
  add_common(app.add_subcommand(
                 "exact", "exact decoupled solutions: slices and shock times"),
             true);
  CLI::App* ver = app.add_subcommand(
      "verify", "model property checks (frames, coefficients, invariants)");
  add_common(ver, false);
  ver->add_flag("--break-sign-convention", opt.break_sign_convention,
                "flip one eigenvector sign on purpose; the duality check "
                "must then fail");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  opt.command = app.get_subcommands().front()->get_name();
  return shockfan::run_command(opt);
}
