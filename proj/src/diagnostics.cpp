#include "shockfan/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shockfan/crystal.hpp"
#include "shockfan/eigenframe.hpp"
#include "shockfan/errors.hpp"

namespace shockfan {

namespace {

// Piecewise-linear read of one trace column at time t. Traces that ended
// before t hold their final value; traces are never read before their launch.
double trace_value_at(const std::vector<double>& ts,
                      const std::vector<double>& ys, double t) {
  if (ts.empty()) return 0.0;
  if (t <= ts.front()) return ys.front();
  if (t >= ts.back()) return ys.back();
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - ts.begin());
  const double t0 = ts[j - 1], t1 = ts[j];
  const double th = t1 > t0 ? (t - t0) / (t1 - t0) : 0.0;
  return (1.0 - th) * ys[j - 1] + th * ys[j];
}

struct StripBounds {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  bool empty() const { return !(lo <= hi); }
};

// The closed strip of one family at time t: the hull of the positions of all
// traces launched inside the seed support [-1, 1].
StripBounds strip_at(const CharacteristicFan& fan, double t) {
  StripBounds s;
  for (const CharacteristicTrace& tr : fan.traces) {
    if (tr.z < -1.0 - 1e-12 || tr.z > 1.0 + 1e-12) continue;
    if (tr.t.empty()) continue;
    const double x = trace_value_at(tr.t, tr.X, t);
    s.lo = std::min(s.lo, x);
    s.hi = std::max(s.hi, x);
  }
  return s;
}

} // namespace

DiagnosticsHistory sup_diagnostics(const SystemModel& model,
                                   const std::vector<CharacteristicFan>& fans,
                                   const GridSolution& solution) {
  const std::vector<double>& times = solution.times();
  const std::vector<double>& xs = solution.grid();
  const long nlev = static_cast<long>(times.size());
  const long nx = static_cast<long>(xs.size());
  const double dx = solution.dx();

  // Thin the stored levels: the rows are running maxima, so a modest sampling
  // cadence loses little, and every level costs a full frame pass.
  const long stride = std::max<long>(1, nlev / 256);

  const bool fast = model.crystal_params.has_value();
  const int dim = model.dimension;

  DiagnosticsHistory h;
  double runW = 0.0, runV = 0.0, runS = 1.0, runJ = 0.0, runU = 0.0;
  for (long l = 0; l < nlev; l += stride) {
    const long ll = std::min(l, nlev - 1);
    const double t = times[ll];
    const std::vector<Vec4>& L = solution.levels()[ll];

    std::vector<StripBounds> strips(fans.size());
    for (std::size_t f = 0; f < fans.size(); ++f)
      strips[f] = strip_at(fans[f], t);

    double instW = 0.0, instV = 0.0, instU = 0.0;
    for (long j = 0; j < nx; ++j) {
      const Vec4& u = L[j];
      instU = std::max(instU, u.norm());
      const long jm = std::max<long>(0, j - 1);
      const long jp = std::min(nx - 1, j + 1);
      const Vec4 ux = (L[jp] - L[jm]) / (dx * static_cast<double>(jp - jm));
      bool outside_all = true;
      for (const StripBounds& s : strips) {
        if (!s.empty() && xs[j] >= s.lo && xs[j] <= s.hi) {
          outside_all = false;
          break;
        }
      }
      if (fast) {
        const crystal::Frame4 fr = crystal::frame4(*model.crystal_params, u);
        for (int i = 0; i < 4; ++i) {
          double w = 0.0;
          for (int k = 0; k < 4; ++k) w += fr.estar[i][k] * ux[k];
          const double aw = std::abs(w);
          instW = std::max(instW, aw);
          if (outside_all) instV = std::max(instV, aw);
        }
      } else {
        const EigenFrame fr = eigenframe(model, Vec(u));
        const Vec w = fr.estar * Vec(ux);
        for (int i = 0; i < dim; ++i) {
          const double aw = std::abs(w[i]);
          instW = std::max(instW, aw);
          if (outside_all) instV = std::max(instV, aw);
        }
      }
    }

    double instS = fans.empty() ? 1.0 : 0.0;
    double instJ = 0.0;
    for (const CharacteristicFan& fan : fans) {
      for (const CharacteristicTrace& tr : fan.traces) {
        if (tr.t.empty() || tr.t.front() > t) continue;
        instS = std::max(instS, trace_value_at(tr.t, tr.rho, t));
        instJ = std::max(instJ, std::abs(trace_value_at(tr.t, tr.v, t)));
      }
    }

    runW = std::max(runW, instW);
    runV = std::max(runV, instV);
    runS = std::max(runS, instS);
    runJ = std::max(runJ, instJ);
    runU = std::max(runU, instU);
    h.t.push_back(t);
    h.W.push_back(runW);
    h.V.push_back(runV);
    h.S.push_back(runS);
    h.J.push_back(runJ);
    h.U.push_back(runU);
    if (ll == nlev - 1) break;
  }
  // Always close with the final level.
  if (!h.t.empty() && h.t.back() < times.back()) {
    const long ll = nlev - 1;
    const double t = times[ll];
    h.t.push_back(t);
    h.W.push_back(runW);
    h.V.push_back(runV);
    h.S.push_back(runS);
    h.J.push_back(runJ);
    h.U.push_back(runU);
  }
  return h;
}

FanDerivatives second_order_diagnostics(const CharacteristicFan& fan) {
  const std::size_t n = fan.traces.size();
  if (n < 3)
    throw DegenerateFan("fan derivatives need at least three traces");

  FanDerivatives out;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const CharacteristicTrace& a = fan.traces[k - 1];
    const CharacteristicTrace& b = fan.traces[k];
    const CharacteristicTrace& c = fan.traces[k + 1];
    const double hl = b.z - a.z;
    const double hr = c.z - b.z;
    if (!(hl > 0.0) || !(hr > 0.0))
      throw DegenerateFan("launch points must be strictly increasing");
    // Nonuniform three-point centered difference weights.
    const double wl = -hr / (hl * (hl + hr));
    const double wc = (hr - hl) / (hl * hr);
    const double wr = hl / (hr * (hl + hr));

    const std::size_t len =
        std::min({a.t.size(), b.t.size(), c.t.size()});
    double rmax = 0.0, vmax = 0.0;
    for (std::size_t j = 0; j < len; ++j) {
      const double rz = wl * a.rho[j] + wc * b.rho[j] + wr * c.rho[j];
      const double vz = wl * a.v[j] + wc * b.v[j] + wr * c.v[j];
      rmax = std::max(rmax, std::abs(rz));
      vmax = std::max(vmax, std::abs(vz));
    }
    out.z.push_back(b.z);
    out.rho_z_max.push_back(rmax);
    out.v_z_max.push_back(vmax);
  }
  return out;
}

} // namespace shockfan
