// End-to-end acceptance checks for the toolkit. Ten numbered criteria, each
// printing one PASS or FAIL line with the measured quantities and the pinned
// tolerances; the exit code is the number of failures. The heavyweight
// fixture (the reference run) is computed once and shared by the criteria
// that probe it.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "shockfan/crystal.hpp"
#include "shockfan/diagnostics.hpp"
#include "shockfan/eigenframe.hpp"
#include "shockfan/errors.hpp"
#include "shockfan/grid_solver.hpp"
#include "shockfan/riemann_exact.hpp"
#include "shockfan/seed.hpp"
#include "shockfan/shock_predictor.hpp"
#include "shockfan/tracer.hpp"

using namespace shockfan;
using crystal::CrystalParams;

namespace {

const CrystalParams kParams{0.81, 0.49, 0.05, 0.0, 0.0, 0.04};
const CrystalParams kCoupled{0.81, 0.49, 0.05, 0.01, -0.02, 0.04};
const CrystalParams kLinear{0.81, 0.49, 0.0, 0.0, 0.0, 0.0};

constexpr double kFrameSpeed = 0.9; // comoving with the fast family
constexpr double kTheta = 0.007;    // seed amplitude of the reference run
constexpr double kRhoStop = 0.01;
constexpr double kEpsilon = 1e-3;

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Suite {
  int failures = 0;
  void criterion(int idx, const char* name,
                 const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("unexpected exception: ") + e.what()};
    }
    std::printf("[%2d/10] %s  %s: %s\n", idx, o.pass ? "PASS" : "FAIL", name,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// The reference run: comoving frame, small-amplitude single-family seed,
// traced fans for all families, detection against the forecast window.
struct MainRun {
  SystemModel model;
  SeedProfile seed;
  SeedStats stats;
  ShockForecast fc;
  GridSolution sol;
  std::vector<CharacteristicFan> fans;
  ShockReport report;
  double t_end = 0.0;
  double wall_seconds = 0.0;
};

MainRun make_main_run() {
  SystemModel model = boosted(crystal::make_model(kParams), kFrameSpeed);
  SeedProfile seed = make_comoving_seed(kParams, kTheta);
  const SeedStats stats = seed_stats(model, seed);
  const ShockForecast fc = forecast(model, stats, kEpsilon);

  SolveOptions opt;
  opt.t_end = 1.1 * fc.t_upper;
  opt.dx = 2.5e-3;
  opt.x_lo = -2.0;
  opt.x_hi = 2.0;

  const auto tic = std::chrono::steady_clock::now();
  GridSolution sol = reference_solve(model, seed, opt);
  TraceOptions topt;
  topt.rho_stop = kRhoStop;
  std::vector<CharacteristicFan> fans;
  for (int fam = 0; fam < 4; ++fam) {
    const int n = fam == 0 ? 201 : 41;
    fans.push_back(trace_characteristics(model, sol, fam,
                                         standard_z_grid(n, -1.2, 1.2), topt));
  }
  const ShockReport report = detect_shock(fans, kRhoStop);
  const double secs = seconds_since(tic);

  return MainRun{std::move(model), std::move(seed), stats,
                 fc,               std::move(sol),  std::move(fans),
                 report,           opt.t_end,       secs};
}

// Longest trace of a fan; its time array is the master cadence (every trace
// records on the same schedule, shorter ones are prefixes).
const CharacteristicTrace& master_trace(const CharacteristicFan& fan) {
  const CharacteristicTrace* best = &fan.traces.front();
  for (const auto& tr : fan.traces)
    if (tr.t.size() > best->t.size()) best = &tr;
  return *best;
}

} // namespace

int main() {
  std::printf("acceptance: ten criteria, sequential\n");
  std::fflush(stdout);

  Suite suite;

  std::optional<MainRun> run1;
  std::string run1_error;
  try {
    run1 = make_main_run();
  } catch (const std::exception& e) {
    run1_error = std::string("reference run failed: ") + e.what();
  }

  // 1. The extrapolated crossing time lands in the forecast window widened
  //    by 5 percent on both sides.
  suite.criterion(1, "shock time inside the forecast window", [&]() -> Outcome {
    if (!run1) return {false, run1_error};
    const MainRun& r = *run1;
    const double lo = 0.95 * r.fc.t_lower;
    const double hi = 1.05 * r.fc.t_upper;
    const bool in_window = r.report.detected && r.report.fit_r2 > 0.0 &&
                           r.report.t_extrap >= lo && r.report.t_extrap <= hi &&
                           validate_window(r.report, r.fc, 0.05);
    const bool fast_enough = r.wall_seconds < 120.0;
    std::ostringstream os;
    os << "t_extrap=" << num(r.report.t_extrap) << " in [" << num(lo) << ", "
       << num(hi) << "], window=[" << num(r.fc.t_lower) << ", "
       << num(r.fc.t_upper) << "], z*=" << num(r.report.z_star)
       << ", R2=" << num(r.report.fit_r2) << ", " << num(r.wall_seconds)
       << " s (limit 120)";
    return {in_window && fast_enough, os.str()};
  });

  // 2. The grid solve converges to the exact simple wave at second order
  //    (aggregate observed order over a 4:2:1 resolution ladder). Measured
  //    in a frame where the wave still drifts at 0.2: in the fully comoving
  //    frame the leading truncation term, which is proportional to the
  //    in-frame speed, all but vanishes and the residual cubic dissipation
  //    of the local Lax-Friedrichs flux masquerades as third order.
  suite.criterion(2, "second-order convergence to the exact solution",
                  [&]() -> Outcome {
    const double frame = 0.7;
    const double drift = kFrameSpeed - frame;
    SystemModel model = boosted(crystal::make_model(kParams), frame);
    SeedProfile seed = make_comoving_seed(kParams, kTheta);
    double t_half;
    if (run1) {
      t_half = 0.5 * run1->fc.t_lower;
    } else {
      const SeedStats st = seed_stats(model, seed);
      t_half = 0.5 * forecast(model, st, kEpsilon).t_lower;
    }
    const riemann::SimpleWaveScenario exact(kParams, seed);

    const std::array<double, 3> dxs{1e-2, 5e-3, 2.5e-3};
    std::array<double, 3> errs{};
    for (std::size_t i = 0; i < dxs.size(); ++i) {
      SolveOptions opt;
      opt.t_end = t_half;
      opt.dx = dxs[i];
      opt.x_lo = -2.0;
      opt.x_hi = drift * t_half + 2.0;
      opt.level_budget_mb = 256.0;
      const GridSolution sol = reference_solve(model, seed, opt);
      double e = 0.0;
      for (int k = 0; k <= 800; ++k) {
        const double x = drift * t_half - 1.9 + 3.8 * k / 800.0;
        const Vec4 uh = sol.state_at(x, t_half);
        const Vec4 ue = exact.evaluate(x + frame * t_half, t_half);
        e = std::max(e, (uh - ue).cwiseAbs().maxCoeff());
      }
      errs[i] = e;
    }
    const double order = 0.5 * std::log2(errs[0] / errs[2]);
    const bool ok = order >= 1.7 && order <= 2.2;
    std::ostringstream os;
    os << "L_inf errors " << num(errs[0]) << " / " << num(errs[1]) << " / "
       << num(errs[2]) << " at dx 1e-2/5e-3/2.5e-3, order=" << num(order)
       << " (need [1.7, 2.2]), t=" << num(t_half);
    return {ok, os.str()};
  });

  // 3. Closed-form and numeric eigendecompositions agree on a thousand
  //    admissible states, including the seam where the cross coupling
  //    vanishes.
  suite.criterion(3, "closed-form eigenstructure equals numeric",
                  [&]() -> Outcome {
    SystemModel nm = crystal::make_model(kCoupled);
    const double delta = nm.ball_radius;
    nm.analytic_frame = nullptr;
    nm.flux_dir_deriv = nullptr;
    nm.crystal_params.reset();

    std::vector<Vec> states = sample_ball(4, 1.5 * delta, 1000, 7);
    // States on and next to the c = 0 line 2(C112 u1 + C122 u2) = 0.
    for (int k = 0; k < 10; ++k) {
      const double s = -0.027 + 0.006 * k;
      Vec u(4);
      u << 2.0 * s, s, 0.02 - 0.004 * k, -0.015 + 0.003 * k;
      states.push_back(u);
      u[0] += 1e-9;
      states.push_back(u);
    }
    states.push_back(Vec::Zero(4));

    double lam_dev = 0.0, vec_dev = 0.0, mu_dev = 0.0;
    int mu_checked = 0;
    for (const Vec& u : states) {
      const EigenFrame closed = crystal::closed_form_eigen(kCoupled, u, delta);
      const EigenFrame numeric = eigenframe(nm, u);
      for (int i = 0; i < 4; ++i) {
        lam_dev = std::max(lam_dev,
                           std::abs(closed.lambda[i] - numeric.lambda[i]) /
                               std::abs(numeric.lambda[i]));
        const double sign =
            closed.e.col(i).dot(numeric.e.col(i)) < 0.0 ? -1.0 : 1.0;
        for (int j = 0; j < 4; ++j) {
          vec_dev = std::max(
              vec_dev, std::abs(closed.e(j, i) - sign * numeric.e(j, i)));
          vec_dev = std::max(vec_dev, std::abs(closed.estar(i, j) -
                                               sign * numeric.estar(i, j)));
        }
      }
      const crystal::AuxScalars a = crystal::aux_scalars(kCoupled, u[0], u[1]);
      if (a.has_mu) {
        mu_dev = std::max(mu_dev, std::abs(a.mu * a.mu_hat + 1.0));
        ++mu_checked;
      }
    }
    const bool ok = lam_dev <= 1e-12 && vec_dev <= 1e-10 && mu_dev <= 1e-12;
    std::ostringstream os;
    os << states.size() << " states: max rel lambda dev " << num(lam_dev)
       << " (<=1e-12), max vector dev " << num(vec_dev)
       << " (<=1e-10), max |mu*mu_hat+1| " << num(mu_dev) << " (<=1e-12, "
       << mu_checked << " states)";
    return {ok, os.str()};
  });

  // 4. First-order quantities stay bounded through the reference run: the
  //    rescaled gradient v never exceeds twice its initial sup, the inverse
  //    density stays positive, and probes launched outside the seed support
  //    keep rho within ten percent of one.
  suite.criterion(4, "first-order quantities bounded", [&]() -> Outcome {
    if (!run1) return {false, run1_error};
    const MainRun& r = *run1;
    double vmax = 0.0, out_dev = 0.0, rho_min = 1e300;
    for (const auto& fan : r.fans) {
      for (const auto& tr : fan.traces) {
        const bool outside = std::abs(tr.z) > 1.0;
        for (std::size_t k = 0; k < tr.t.size(); ++k) {
          vmax = std::max(vmax, std::abs(tr.v[k]));
          rho_min = std::min(rho_min, tr.rho[k]);
          if (outside)
            out_dev = std::max(out_dev, std::abs(tr.rho[k] - 1.0));
        }
      }
    }
    const double bound = 2.0 * r.stats.W0;
    const bool ok = vmax <= bound && rho_min > 0.0 && out_dev <= 0.1;
    std::ostringstream os;
    os << "max|v|=" << num(vmax) << " (<=" << num(bound)
       << "), min rho=" << num(rho_min) << " (>0), out-of-strip |rho-1|<="
       << num(out_dev) << " (<=0.1)";
    return {ok, os.str()};
  });

  // 5. The minimal inverse density falls linearly over the last tenth of the
  //    run, and the carried quantities reproduce v = rho * w coherently: the
  //    sup of the own gradient component times the minimal rho brackets the
  //    sup of v within a factor of two at every late sample.
  suite.criterion(5, "linear collapse of the inverse density",
                  [&]() -> Outcome {
    if (!run1) return {false, run1_error};
    const MainRun& r = *run1;
    if (!r.report.detected) return {false, "no detection in reference run"};
    const CharacteristicFan& fan = r.fans[static_cast<std::size_t>(
        r.report.family)];
    const bool fit_ok = r.report.fit_r2 >= 0.99 &&
                        std::isfinite(r.report.t_extrap) &&
                        r.report.t_extrap > r.report.t_obs;

    const CharacteristicTrace& master = master_trace(fan);
    const double T = r.report.t_obs;
    double ratio_lo = 1e300, ratio_hi = 0.0;
    int used = 0;
    for (std::size_t k = 0; k < master.t.size(); ++k) {
      const double t = master.t[k];
      if (t < 0.9 * T || t > T) continue;
      double wmax = 0.0, vmax = 0.0, rho_min = 1e300;
      for (const auto& tr : fan.traces) {
        if (k >= tr.t.size() || std::abs(tr.t[k] - t) > 1e-9) continue;
        wmax = std::max(wmax, std::abs(tr.v[k]) / tr.rho[k]);
        vmax = std::max(vmax, std::abs(tr.v[k]));
        rho_min = std::min(rho_min, tr.rho[k]);
      }
      if (vmax <= 0.0) continue;
      const double ratio = wmax * rho_min / vmax;
      ratio_lo = std::min(ratio_lo, ratio);
      ratio_hi = std::max(ratio_hi, ratio);
      ++used;
    }
    const bool band_ok = used > 0 && ratio_lo >= 0.5 && ratio_hi <= 2.0;
    std::ostringstream os;
    os << "R2=" << num(r.report.fit_r2)
       << " (>=0.99), slope<0, max|w|*min rho / max|v| in ["
       << num(ratio_lo) << ", " << num(ratio_hi) << "] (need within [0.5, 2], "
       << used << " samples)";
    return {fit_ok && band_ok, os.str()};
  });

  // 6. Scaling laws in the seed amplitude: halving the amplitude doubles the
  //    crossing time within ten percent, and the drift of v away from its
  //    launch value scales quadratically within twenty percent.
  suite.criterion(6, "amplitude scaling of crossing time and v drift",
                  [&]() -> Outcome {
    const auto crossing_time = [&](double theta) {
      SystemModel model = boosted(crystal::make_model(kParams), kFrameSpeed);
      SeedProfile seed = make_comoving_seed(kParams, theta);
      const SeedStats st = seed_stats(model, seed);
      const ShockForecast fcl = forecast(model, st, kEpsilon);
      SolveOptions opt;
      opt.t_end = 1.1 * fcl.t_upper;
      opt.dx = 5e-3;
      opt.x_lo = -2.0;
      opt.x_hi = 2.0;
      opt.level_budget_mb = 256.0;
      const GridSolution sol = reference_solve(model, seed, opt);
      TraceOptions topt;
      topt.rho_stop = kRhoStop;
      std::vector<CharacteristicFan> fans{trace_characteristics(
          model, sol, 0, standard_z_grid(201, -1.2, 1.2), topt)};
      const ShockReport rep = detect_shock(fans, kRhoStop);
      if (!rep.detected) throw NoShockDetected("scaling run did not steepen");
      return rep.fit_r2 > 0.0 ? rep.t_extrap : rep.t_obs;
    };
    const double t_big = crossing_time(0.04);
    const double t_small = crossing_time(0.02);
    const double ratio_t = t_small / t_big;

    const auto v_drift = [&](double theta) {
      const SystemModel model = crystal::make_model(kParams);
      const SeedProfile seed = make_bump_seed(theta, {1.0, 0.0, 0.0, 0.0});
      SolveOptions opt;
      opt.t_end = 5.0;
      opt.dx = 5e-3;
      opt.x_lo = -6.5;
      opt.x_hi = 6.5;
      opt.level_budget_mb = 256.0;
      const GridSolution sol = reference_solve(model, seed, opt);
      const CharacteristicFan fan = trace_characteristics(
          model, sol, 0, standard_z_grid(81, -1.1, 1.1), TraceOptions{});
      double d = 0.0;
      for (const auto& tr : fan.traces) {
        if (tr.t.back() < opt.t_end - 1e-9) continue;
        d = std::max(d, std::abs(tr.v.back() - tr.v.front()));
      }
      return d;
    };
    const double d_big = v_drift(0.04);
    const double d_small = v_drift(0.02);
    const double ratio_d = d_big / d_small;

    const bool ok = ratio_t >= 1.8 && ratio_t <= 2.2 && ratio_d >= 3.2 &&
                    ratio_d <= 4.8;
    std::ostringstream os;
    os << "t_extrap " << num(t_big) << " -> " << num(t_small) << ", ratio "
       << num(ratio_t) << " (need [1.8, 2.2]); v drift " << num(d_big)
       << " -> " << num(d_small) << ", ratio " << num(ratio_d)
       << " (need [3.2, 4.8])";
    return {ok, os.str()};
  });

  // 7. Just past the separation time the four characteristic strips are
  //    pairwise disjoint intervals.
  suite.criterion(7, "strips disjoint past the separation time",
                  [&]() -> Outcome {
    const SystemModel model = crystal::make_model(kParams);
    const double sigma =
        hyperbolicity_margin(model, model.ball_radius, 4096);
    const double t_check = 1.01 * separation_time(sigma);
    const SeedProfile seed = make_bump_seed(0.02, {1.0, 1.0, 0.0, 0.0});
    SolveOptions opt;
    opt.t_end = t_check;
    opt.dx = 1e-2;
    opt.x_lo = -17.0;
    opt.x_hi = 17.0;
    opt.level_budget_mb = 256.0;
    const GridSolution sol = reference_solve(model, seed, opt);

    std::array<double, 4> lo{}, hi{};
    for (int fam = 0; fam < 4; ++fam) {
      const CharacteristicFan fan = trace_characteristics(
          model, sol, fam, standard_z_grid(21, -1.0, 1.0), TraceOptions{});
      double mn = 1e300, mx = -1e300;
      for (const auto& tr : fan.traces) {
        if (tr.t.back() < t_check - 1e-9)
          return {false, "a strip-edge characteristic left the domain"};
        mn = std::min(mn, tr.X.back());
        mx = std::max(mx, tr.X.back());
      }
      lo[static_cast<std::size_t>(fam)] = mn;
      hi[static_cast<std::size_t>(fam)] = mx;
    }
    // Families are sorted by decreasing speed, so interval i must lie
    // strictly right of interval i+1.
    double min_gap = 1e300;
    for (int i = 0; i < 3; ++i)
      min_gap = std::min(min_gap, lo[static_cast<std::size_t>(i)] -
                                      hi[static_cast<std::size_t>(i) + 1]);
    const bool ok = min_gap > 0.0;
    std::ostringstream os;
    os << "t=" << num(t_check) << " (sigma=" << num(sigma)
       << "), strips [" << num(lo[0]) << "," << num(hi[0]) << "] ["
       << num(lo[1]) << "," << num(hi[1]) << "] [" << num(lo[2]) << ","
       << num(hi[2]) << "] [" << num(lo[3]) << "," << num(hi[3])
       << "], min gap " << num(min_gap) << " (>0)";
    return {ok, os.str()};
  });

  // 8. Second-order quantities (launch-parameter derivatives of rho and v)
  //    stay bounded late in the run: the sup over the fourth quarter of the
  //    timeline is no more than twice the sup over the third quarter.
  suite.criterion(8, "no late doubling of second-order quantities",
                  [&]() -> Outcome {
    if (!run1) return {false, run1_error};
    const MainRun& r = *run1;
    if (!r.report.detected) return {false, "no detection in reference run"};
    const CharacteristicFan& fan = r.fans[static_cast<std::size_t>(
        r.report.family)];
    const double T = r.report.t_obs;
    double q3_mu = 0.0, q4_mu = 0.0, q3_nu = 0.0, q4_nu = 0.0;
    for (std::size_t j = 1; j + 1 < fan.traces.size(); ++j) {
      const auto& left = fan.traces[j - 1];
      const auto& mid = fan.traces[j];
      const auto& right = fan.traces[j + 1];
      if (std::abs(mid.z) >= 1.0) continue; // interior of the strip only
      const std::size_t n = std::min(
          {left.t.size(), mid.t.size(), right.t.size()});
      const double dz = right.z - left.z;
      for (std::size_t k = 0; k < n; ++k) {
        const double t = mid.t[k];
        if (t < 0.5 * T || t > T) continue;
        const double mu = std::abs((right.rho[k] - left.rho[k]) / dz);
        const double nu = std::abs((right.v[k] - left.v[k]) / dz);
        if (t < 0.75 * T) {
          q3_mu = std::max(q3_mu, mu);
          q3_nu = std::max(q3_nu, nu);
        } else {
          q4_mu = std::max(q4_mu, mu);
          q4_nu = std::max(q4_nu, nu);
        }
      }
    }
    const bool ok = q3_mu > 0.0 && q3_nu > 0.0 && q4_mu <= 2.0 * q3_mu &&
                    q4_nu <= 2.0 * q3_nu;
    std::ostringstream os;
    os << "sup|drho/dz| " << num(q3_mu) << " -> " << num(q4_mu) << " (ratio "
       << num(q4_mu / q3_mu) << "), sup|dv/dz| " << num(q3_nu) << " -> "
       << num(q4_nu) << " (ratio " << num(q4_nu / q3_nu)
       << "), both ratios <= 2";
    return {ok, os.str()};
  });

  // 9. The interface solution is exact at the boundary: continuity residuals
  //    at machine-small probes, the zero-profile root, and the weak-coupling
  //    reflection limit.
  suite.criterion(9, "interface matching exact at the boundary",
                  [&]() -> Outcome {
    const riemann::InterfaceScenario sc(
        kParams, [](double t) { return bump(2.0 * t - 1.0); },
        [](double t) { return 2.0 * bump_prime(2.0 * t - 1.0); },
        {0.01, 0.008});
    const double t_star = sc.exact_shock_time();
    const double probe = 1e-10;
    double res = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double t = std::min(0.012 * k, 0.999 * t_star);
      const Vec4 left = sc.evaluate(-probe, t); // vacuum: E = D, H = B
      const Vec4 right = sc.evaluate(probe, t);
      double ey, ez;
      crystal::E_from_D(kParams, right[0], right[1], ey, ez);
      res = std::max({res, std::abs(left[0] - ey), std::abs(left[1] - ez),
                      std::abs(left[2] - right[2]),
                      std::abs(left[3] - right[3])});
    }

    const riemann::InterfaceTransmit zero =
        riemann::interface_transmit(kParams, {0.0, 0.0});
    const double root_dev =
        std::max(std::abs(zero.Z[0] - std::sqrt(kParams.K1)),
                 std::abs(zero.Z[1] - std::sqrt(kParams.K2)));
    const double zero_dev =
        std::max({std::abs(zero.g[0]), std::abs(zero.g[1]),
                  std::abs(zero.m0[0]), std::abs(zero.m0[1])});

    const CrystalParams weak{0.81, 0.49, 3e-4, 0.0, 0.0, 3e-4};
    const std::array<double, 2> ft{3e-4, 2e-4};
    const riemann::InterfaceTransmit tr = riemann::interface_transmit(weak, ft);
    const double refl_dev =
        std::max(std::abs(tr.g[0] / ft[0] - 0.1 / 1.9),
                 std::abs(tr.g[1] / ft[1] - 0.3 / 1.7));

    const bool ok = res <= 1e-10 && root_dev <= 1e-14 && zero_dev <= 1e-14 &&
                    refl_dev <= 1e-6;
    std::ostringstream os;
    os << "continuity residual " << num(res)
       << " (<=1e-10, 100 times), zero-profile root dev " << num(root_dev)
       << " (<=1e-14), reflection limit dev " << num(refl_dev) << " (<=1e-6)";
    return {ok, os.str()};
  });

  // 10. The linear model is the negative control: no detection over three
  //     times the reference duration and flat diagnostics. Run at the
  //     reference resolution: the scheme's weak hyperdiffusion scatters
  //     oscillatory tails past the wave strip, and their amplitude only
  //     drops below the out-of-strip gradient pin once dx^3 is small.
  suite.criterion(10, "linear model stays quiet", [&]() -> Outcome {
    const SystemModel model = boosted(crystal::make_model(kLinear),
                                      kFrameSpeed);
    const SeedProfile seed = make_comoving_seed(kLinear, kTheta);
    SolveOptions opt;
    opt.t_end = 3.0 * (run1 ? run1->t_end : 551.0);
    opt.dx = 2.5e-3;
    opt.x_lo = -2.0;
    opt.x_hi = 2.0;
    opt.level_budget_mb = 256.0;
    const GridSolution sol = reference_solve(model, seed, opt);
    TraceOptions topt;
    topt.rho_stop = kRhoStop;
    std::vector<CharacteristicFan> fans;
    for (int fam = 0; fam < 4; ++fam)
      fans.push_back(trace_characteristics(
          model, sol, fam, standard_z_grid(41, -1.2, 1.2), topt));
    const ShockReport rep = detect_shock(fans, kRhoStop);

    bool no_shock_raised = false;
    try {
      validate_window(rep, ShockForecast{1.0, 2.0, kEpsilon});
    } catch (const NoShockDetected&) {
      no_shock_raised = true;
    }

    const DiagnosticsHistory h = sup_diagnostics(model, fans, sol);
    const double s_dev = std::abs(h.S.back() - 1.0);
    const double j_drift = std::abs(h.J.back() - h.J.front()) /
                           std::max(h.J.front(), 1e-300);
    const double w_growth = h.W.back() / std::max(h.W.front(), 1e-300);
    const double u_growth = h.U.back() / std::max(h.U.front(), 1e-300);
    const double v_rel = h.V.back() / std::max(h.W.front(), 1e-300);

    const bool ok = !rep.detected && no_shock_raised && rep.rho_min > 0.999 &&
                    s_dev <= 1e-9 && j_drift <= 1e-9 && w_growth <= 1.1 &&
                    u_growth <= 1.05 && v_rel <= 0.01;
    std::ostringstream os;
    os << "detected=" << (rep.detected ? "true" : "false")
       << ", min rho=" << num(rep.rho_min) << " (>0.999), |S-1|="
       << num(s_dev) << " (<=1e-9), J drift " << num(j_drift)
       << " (<=1e-9), W growth " << num(w_growth) << " (<=1.1), U growth "
       << num(u_growth) << " (<=1.05), V/W0 " << num(v_rel)
       << " (<=0.01), t_end=" << num(opt.t_end);
    return {ok, os.str()};
  });

  std::printf("acceptance: %d of 10 criteria failed\n", suite.failures);
  return suite.failures;
}
