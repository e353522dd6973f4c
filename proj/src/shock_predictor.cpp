#include "shockfan/shock_predictor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shockfan/crystal.hpp"
#include "shockfan/eigenframe.hpp"
#include "shockfan/errors.hpp"
#include "shockfan/root_find.hpp"

namespace shockfan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Scans [lo, hi] on scan_points samples, then polishes the best location by
// golden section. Returns the refined maximum value of f.
template <class F>
double scan_max(F&& f, double lo, double hi, int scan_points) {
  double best = -kInf;
  double zbest = lo;
  const double step = (hi - lo) / (scan_points - 1);
  for (int k = 0; k < scan_points; ++k) {
    const double z = lo + step * k;
    const double val = f(z);
    if (val > best) {
      best = val;
      zbest = z;
    }
  }
  const double a = std::max(lo, zbest - step);
  const double b = std::min(hi, zbest + step);
  const double zref = golden_max(f, a, b, 1e-12 * std::max(1.0, hi - lo));
  return std::max(best, f(zref));
}

std::vector<double> self_coefficients_at_origin(const SystemModel& model) {
  if (model.crystal_params) {
    const std::array<double, 4> c =
        crystal::clll4(*model.crystal_params, Vec4::Zero());
    return {c[0], c[1], c[2], c[3]};
  }
  const Vec origin = Vec::Zero(model.dimension);
  const EigenFrame f = eigenframe(model, origin);
  const StructureCoefficients sc = structure_coeffs(model, origin, f);
  std::vector<double> out(model.dimension);
  for (int i = 0; i < model.dimension; ++i) out[i] = sc.cjkl(i, i, i);
  return out;
}

} // namespace

SeedStats seed_stats(const SystemModel& model, const SeedProfile& seed,
                     int scan_points) {
  if (scan_points < 16) throw InvalidParams("seed scan needs >= 16 points");
  const int dim = model.dimension;
  const double lo = -1.0, hi = 1.0;

  // Frame at the origin, fixed across the scan for the amplitude-free pair.
  const EigenFrame f0 = eigenframe(model, Vec::Zero(dim));

  auto frame_component = [&](double z, int i) {
    const Vec4 u = seed.f(z);
    const Vec4 up = seed.f_prime(z);
    if (model.crystal_params) {
      const crystal::Frame4 fr = crystal::frame4(*model.crystal_params, u);
      double acc = 0.0;
      for (int k = 0; k < 4; ++k) acc += fr.estar[i][k] * up[k];
      return acc;
    }
    const EigenFrame fr = eigenframe(model, Vec(u));
    return fr.estar.row(i).dot(Vec(up));
  };
  auto origin_component = [&](double z, int i) {
    const Vec4 up0 = seed.f0_prime(z);
    return f0.estar.row(i).dot(Vec(up0));
  };

  SeedStats s;
  s.W0_plus = -kInf;
  s.W00_plus = -kInf;
  for (int i = 0; i < dim; ++i) {
    const double wabs = scan_max(
        [&](double z) { return std::abs(frame_component(z, i)); }, lo, hi,
        scan_points);
    const double wsig = scan_max(
        [&](double z) { return frame_component(z, i); }, lo, hi, scan_points);
    const double w0abs = scan_max(
        [&](double z) { return std::abs(origin_component(z, i)); }, lo, hi,
        scan_points);
    const double w0sig = scan_max(
        [&](double z) { return origin_component(z, i); }, lo, hi, scan_points);
    s.W0 = std::max(s.W0, wabs);
    s.W0_plus = std::max(s.W0_plus, wsig);
    s.W00 = std::max(s.W00, w0abs);
    s.W00_plus = std::max(s.W00_plus, w0sig);
  }
  s.L = scan_max([&](double z) { return model.metric.norm(Vec(seed.f0_second(z))); },
                 lo, hi, scan_points);

  if (s.W0 <= 0.0)
    throw ZeroSeed("seed data has identically vanishing gradient");
  return s;
}

ShockForecast forecast(const SystemModel& model, const SeedStats& stats,
                       double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.01))
    throw InvalidParams("forecast epsilon must lie in (0, 1/100)");
  if (!(stats.W0_plus > 0.0))
    throw ZeroPositivePart(
        "seed gradient has no positive frame component; the forecast needs "
        "W0+ > 0");

  const std::vector<double> c = self_coefficients_at_origin(model);
  const double up = std::pow(1.0 + epsilon, 3);
  const double dn = std::pow(1.0 - epsilon, 4);
  double t_lower = kInf, t_upper = 0.0;
  for (double ciii : c) {
    const double a = std::abs(ciii);
    if (a <= 1e-14) continue; // linearly degenerate family, no finite window
    t_lower = std::min(t_lower, 1.0 / (up * a * stats.W0_plus));
    t_upper = std::max(t_upper, 1.0 / (dn * a * stats.W0_plus));
  }
  if (!(t_upper > 0.0))
    throw NotGenuinelyNonlinear(
        "no genuinely nonlinear family at the origin; no finite blow-up "
        "window exists");
  return {t_lower, t_upper, epsilon};
}

ShockReport detect_shock(const std::vector<CharacteristicFan>& fans,
                         double rho_stop) {
  ShockReport rep;
  rep.rho_stop = rho_stop;
  rep.rho_min = kInf;
  rep.t_obs = kInf;

  const CharacteristicTrace* critical = nullptr;
  int crit_family = -1;
  for (const CharacteristicFan& fan : fans) {
    for (const CharacteristicTrace& tr : fan.traces) {
      for (std::size_t j = 0; j < tr.rho.size(); ++j) {
        if (tr.rho[j] < rep.rho_min) {
          rep.rho_min = tr.rho[j];
          critical = &tr;
          crit_family = fan.family;
          rep.z_star = tr.z;
        }
        if (rho_stop > 0.0 && tr.rho[j] <= rho_stop)
          rep.t_obs = std::min(rep.t_obs, tr.t[j]);
      }
    }
  }
  if (!critical || !(rep.rho_min < kInf)) {
    rep.rho_min = 1.0;
    return rep;
  }
  rep.detected = rho_stop > 0.0 && rep.rho_min <= rho_stop;
  if (!rep.detected) return rep;
  rep.family = crit_family;

  // Least-squares line through the critical trace's rho over the last tenth
  // of its observed span; rho is asymptotically linear in t near a first
  // crossing, so the root of the line estimates the crossing time.
  const std::vector<double>& ts = critical->t;
  const std::vector<double>& rs = critical->rho;
  const double t1 = ts.back();
  const double t0 = ts.front();
  double win = 0.1 * (t1 - t0);
  std::size_t first = 0;
  for (int widen = 0; widen < 4; ++widen) {
    first = 0;
    while (first < ts.size() && ts[first] < t1 - win) ++first;
    if (ts.size() - first >= 3) break;
    win *= 2.0;
  }
  const std::size_t n = ts.size() - first;
  if (n < 2) {
    rep.t_extrap = rep.t_obs;
    rep.fit_r2 = 0.0;
    return rep;
  }
  double st = 0, sr = 0, stt = 0, str = 0, srr = 0;
  for (std::size_t j = first; j < ts.size(); ++j) {
    st += ts[j];
    sr += rs[j];
    stt += ts[j] * ts[j];
    str += ts[j] * rs[j];
    srr += rs[j] * rs[j];
  }
  const double nn = static_cast<double>(n);
  const double den = nn * stt - st * st;
  const double a = den != 0.0 ? (nn * str - st * sr) / den : 0.0;
  const double b = (sr - a * st) / nn;
  if (a < 0.0) {
    rep.t_extrap = -b / a;
    const double ss_tot = srr - sr * sr / nn;
    double ss_res = 0.0;
    for (std::size_t j = first; j < ts.size(); ++j) {
      const double e = rs[j] - (a * ts[j] + b);
      ss_res += e * e;
    }
    rep.fit_r2 = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
  } else {
    rep.t_extrap = rep.t_obs;
    rep.fit_r2 = 0.0;
  }
  return rep;
}

bool validate_window(const ShockReport& report, const ShockForecast& fc,
                     double slack) {
  if (!report.detected)
    throw NoShockDetected("no characteristic crossing was observed");
  const double t = report.fit_r2 > 0.0 ? report.t_extrap : report.t_obs;
  return t >= fc.t_lower * (1.0 - slack) && t <= fc.t_upper * (1.0 + slack);
}

} // namespace shockfan
