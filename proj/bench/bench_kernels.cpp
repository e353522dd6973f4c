// Times the reference solver and the characteristic tracer at different
// thread counts so the OpenMP parallelization can be judged on the machine at
// hand. Not a test: it prints throughput and exits 0.

#include <chrono>
#include <cstdio>

#include "shockfan/crystal.hpp"
#include "shockfan/grid_solver.hpp"
#include "shockfan/seed.hpp"
#include "shockfan/tracer.hpp"

using namespace shockfan;

namespace {

double run_solve(const SystemModel& model, const SeedProfile& seed,
                 int threads, GridSolution* keep) {
  SolveOptions opt;
  opt.t_end = 20.0;
  opt.dx = 2e-3;
  opt.x_lo = -2.0;
  opt.x_hi = 2.0;
  opt.threads = threads;
  opt.level_budget_mb = 256.0;
  const auto start = std::chrono::steady_clock::now();
  GridSolution sol = reference_solve(model, seed, opt);
  const auto stop = std::chrono::steady_clock::now();
  if (keep) *keep = std::move(sol);
  return std::chrono::duration<double>(stop - start).count();
}

double run_trace(const SystemModel& model, const GridSolution& sol,
                 int threads) {
  TraceOptions opt;
  opt.threads = threads;
  const std::vector<double> zg = standard_z_grid(101, -1.2, 1.2);
  const auto start = std::chrono::steady_clock::now();
  for (int fam = 0; fam < 4; ++fam)
    trace_characteristics(model, sol, fam, zg, opt);
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

} // namespace

int main() {
  const crystal::CrystalParams p{0.81, 0.49, 0.05, 0.0, 0.0, 0.04};
  const SystemModel model = crystal::make_model(p);
  const SeedProfile seed = make_comoving_seed(p, 0.01);

  const int max_threads = effective_threads(0);
  std::printf("solver kernel, dx = 2e-3, t_end = 20 (%d hardware threads)\n",
              max_threads);

  GridSolution sol = reference_solve(
      model, seed, [] {
        SolveOptions o;
        o.t_end = 1.0;
        o.dx = 2e-3;
        return o;
      }());
  double serial_solve = 0.0;
  for (int threads = 1; threads <= max_threads; threads *= 2) {
    GridSolution* keep = threads == 1 ? &sol : nullptr;
    const double s = run_solve(model, seed, threads, keep);
    if (threads == 1) serial_solve = s;
    std::printf("  threads %2d: %7.2f s  speedup %.2fx\n", threads, s,
                serial_solve / s);
  }

  std::printf("tracer kernel, 4 families x 103 traces\n");
  double serial_trace = 0.0;
  for (int threads = 1; threads <= max_threads; threads *= 2) {
    const double s = run_trace(model, sol, threads);
    if (threads == 1) serial_trace = s;
    std::printf("  threads %2d: %7.2f s  speedup %.2fx\n", threads, s,
                serial_trace / s);
  }
  return 0;
}
