#include "shockfan/tracer.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "shockfan/crystal.hpp"
#include "shockfan/eigenframe.hpp"
#include "shockfan/errors.hpp"

namespace shockfan {

bool CharacteristicFan::any_stopped() const {
  for (const CharacteristicTrace& tr : traces)
    if (tr.stopped_on_rho) return true;
  return false;
}

std::vector<double> standard_z_grid(int n, double lo, double hi) {
  if (n < 2) throw InvalidParams("z grid needs at least two points");
  if (!(hi > lo)) throw InvalidParams("z grid needs hi > lo");
  std::vector<double> z(n);
  for (int k = 0; k < n; ++k)
    z[k] = lo + (hi - lo) * static_cast<double>(k) / (n - 1);
  for (double endpoint : {-1.0, 1.0}) {
    bool present = false;
    for (double zz : z)
      if (std::abs(zz - endpoint) < 1e-12) {
        present = true;
        break;
      }
    if (!present && endpoint > lo && endpoint < hi) z.push_back(endpoint);
  }
  std::sort(z.begin(), z.end());
  return z;
}

namespace {

// The coefficients feeding one right-hand-side evaluation of the transported
// pair (rho, v) for family `fam`. The own-family gradient component never
// appears: the substitution v = rho * w^i removed it, which is what makes the
// system regular through rho -> 0.
struct RhsEval {
  double lambda = 0.0; // transport speed dX/dt
  double drho = 0.0;
  double dv = 0.0;
};

struct CrystalRhs {
  crystal::CrystalParams p;
  double boost = 0.0;
  int fam = 0;

  RhsEval operator()(const Vec4& u, const Vec4& ux, double rho,
                     double v) const {
    const crystal::Frame4 f = crystal::frame4(p, u);
    const std::array<double, 64> c = crystal::full_cjkl4(p, u);
    const std::array<double, 16> ov = crystal::overlaps4(p, f);
    const std::array<double, 64> g = crystal::gamma_from_c4(f.lambda, c, ov);
    double w[4];
    for (int m = 0; m < 4; ++m) {
      double acc = 0.0;
      for (int k = 0; k < 4; ++k) acc += f.estar[m][k] * ux[k];
      w[m] = acc;
    }
    const int i = fam;
    auto cjkl = [&](int j, int k, int l) { return c[(j * 4 + k) * 4 + l]; };
    auto gam = [&](int a, int l, int m) { return g[(a * 4 + l) * 4 + m]; };
    RhsEval r;
    r.lambda = f.lambda[i] - boost;
    double rho_rate = 0.0, v_rate = 0.0, quad = 0.0;
    for (int m = 0; m < 4; ++m) {
      if (m == i) continue;
      rho_rate += cjkl(i, i, m) * w[m];
      v_rate += (2.0 * gam(i, i, m) + cjkl(i, i, m)) * w[m];
      for (int l = 0; l < 4; ++l) {
        if (l == i || l == m) continue;
        quad += gam(i, l, m) * w[l] * w[m];
      }
    }
    r.drho = cjkl(i, i, i) * v + rho_rate * rho;
    r.dv = v_rate * v + quad * rho;
    return r;
  }

  double own_w(const Vec4& u, const Vec4& ux) const {
    const crystal::Frame4 f = crystal::frame4(p, u);
    double acc = 0.0;
    for (int k = 0; k < 4; ++k) acc += f.estar[fam][k] * ux[k];
    return acc;
  }
};

struct GenericRhs {
  const SystemModel* model;
  int fam = 0;

  RhsEval operator()(const Vec4& u, const Vec4& ux, double rho,
                     double v) const {
    const Vec uu = u;
    const EigenFrame f = eigenframe(*model, uu);
    const StructureCoefficients sc = structure_coeffs(*model, uu, f);
    const int n = model->dimension;
    Vec w = f.estar * Vec(ux);
    const int i = fam;
    RhsEval r;
    r.lambda = f.lambda[i];
    double rho_rate = 0.0, v_rate = 0.0, quad = 0.0;
    for (int m = 0; m < n; ++m) {
      if (m == i) continue;
      rho_rate += sc.cjkl(i, i, m) * w[m];
      v_rate += (2.0 * sc.g(i, i, m) + sc.cjkl(i, i, m)) * w[m];
      for (int l = 0; l < n; ++l) {
        if (l == i || l == m) continue;
        quad += sc.g(i, l, m) * w[l] * w[m];
      }
    }
    r.drho = sc.cjkl(i, i, i) * v + rho_rate * rho;
    r.dv = v_rate * v + quad * rho;
    return r;
  }

  double own_w(const Vec4& u, const Vec4& ux) const {
    const EigenFrame f = eigenframe(*model, Vec(u));
    return f.estar.row(fam).dot(Vec(ux));
  }
};

struct TraceState {
  double X, rho, v;
};

template <class Rhs>
CharacteristicTrace trace_one(const Rhs& rhs, const GridSolution& sol,
                              double z, double dt, double record_dt,
                              double rho_stop) {
  CharacteristicTrace tr;
  tr.z = z;
  const double t0 = sol.times().front();
  const double t_end = sol.t_end();
  const double xlo = sol.x_lo(), xhi = sol.x_hi();

  Vec4 u, ux;
  auto sample_ok = [&](double x, double t) {
    if (x < xlo || x > xhi) return false;
    sol.sample(x, t, u, ux);
    return true;
  };

  if (!sample_ok(z, t0)) {
    tr.valid_until = t0;
    return tr;
  }
  TraceState y{z, 1.0, rhs.own_w(u, ux)};
  auto record = [&](double t) {
    tr.t.push_back(t);
    tr.X.push_back(y.X);
    tr.rho.push_back(y.rho);
    tr.v.push_back(y.v);
    tr.w.push_back(sample_ok(y.X, t) ? rhs.own_w(u, ux) : 0.0);
  };
  record(t0);
  tr.valid_until = t0;

  double t = t0;
  double next_rec = t0 + record_dt;
  const double eps = 1e-12 * std::max(1.0, t_end);
  while (t < t_end - eps) {
    const double h = std::min(dt, t_end - t);
    // Classic RK4 on the frozen grid data.
    TraceState k1y = y;
    if (!sample_ok(k1y.X, t)) break;
    const RhsEval k1 = rhs(u, ux, k1y.rho, k1y.v);

    TraceState k2y{y.X + 0.5 * h * k1.lambda, y.rho + 0.5 * h * k1.drho,
                   y.v + 0.5 * h * k1.dv};
    if (!sample_ok(k2y.X, t + 0.5 * h)) break;
    const RhsEval k2 = rhs(u, ux, k2y.rho, k2y.v);

    TraceState k3y{y.X + 0.5 * h * k2.lambda, y.rho + 0.5 * h * k2.drho,
                   y.v + 0.5 * h * k2.dv};
    if (!sample_ok(k3y.X, t + 0.5 * h)) break;
    const RhsEval k3 = rhs(u, ux, k3y.rho, k3y.v);

    TraceState k4y{y.X + h * k3.lambda, y.rho + h * k3.drho,
                   y.v + h * k3.dv};
    if (!sample_ok(k4y.X, t + h)) break;
    const RhsEval k4 = rhs(u, ux, k4y.rho, k4y.v);

    const double nX =
        y.X + h / 6.0 * (k1.lambda + 2.0 * k2.lambda + 2.0 * k3.lambda + k4.lambda);
    if (nX < xlo || nX > xhi) break;
    y.X = nX;
    y.rho += h / 6.0 * (k1.drho + 2.0 * k2.drho + 2.0 * k3.drho + k4.drho);
    y.v += h / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
    t += h;
    tr.valid_until = t;

    const bool stopping = rho_stop > 0.0 && y.rho <= rho_stop;
    if (t >= next_rec - eps || t >= t_end - eps || stopping) {
      record(t);
      while (next_rec <= t + eps) next_rec += record_dt;
    }
    if (stopping) {
      tr.stopped_on_rho = true;
      return tr;
    }
  }
  return tr;
}

} // namespace

CharacteristicFan trace_characteristics(const SystemModel& model,
                                        const GridSolution& solution,
                                        int family,
                                        const std::vector<double>& z_grid,
                                        const TraceOptions& opt) {
  if (family < 0 || family >= model.dimension)
    throw InvalidParams("characteristic family out of range");
  if (z_grid.empty()) throw InvalidParams("empty launch grid");

  const std::size_t nlev = solution.times().size();
  const double span = solution.t_end() - solution.times().front();
  double dt = opt.dt;
  if (dt <= 0.0) {
    // Twice the stored cadence: the grid data is linear in t between stored
    // levels, so finer integration steps add cost but no accuracy.
    dt = nlev >= 2 ? 2.0 * span / static_cast<double>(nlev - 1) : span;
    if (dt <= 0.0) dt = 1.0;
  }
  double record_dt = opt.record_dt > 0.0 ? opt.record_dt : dt;

  CharacteristicFan fan;
  fan.family = family;
  fan.traces.resize(z_grid.size());

  const int nt = effective_threads(opt.threads);
  (void)nt;
  if (model.crystal_params) {
    const CrystalRhs rhs{*model.crystal_params, model.frame_speed, family};
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(nt)
#endif
    for (long k = 0; k < static_cast<long>(z_grid.size()); ++k)
      fan.traces[k] =
          trace_one(rhs, solution, z_grid[k], dt, record_dt, opt.rho_stop);
  } else {
    const GenericRhs rhs{&model, family};
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(nt)
#endif
    for (long k = 0; k < static_cast<long>(z_grid.size()); ++k)
      fan.traces[k] =
          trace_one(rhs, solution, z_grid[k], dt, record_dt, opt.rho_stop);
  }
  return fan;
}

} // namespace shockfan
