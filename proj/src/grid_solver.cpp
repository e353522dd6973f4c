#include "shockfan/grid_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "shockfan/crystal.hpp"
#include "shockfan/eigenframe.hpp"
#include "shockfan/errors.hpp"

namespace shockfan {

int effective_threads(int requested) {
#ifdef _OPENMP
  if (requested <= 0) return omp_get_max_threads();
  return requested;
#else
  (void)requested;
  return 1;
#endif
}

namespace {

// Fixed-size operation bundles the kernels are templated over. The crystal
// bundle is fully inlinable; the generic one routes through the model's
// std::function providers and exists for hand-built test models.
struct CrystalOps {
  crystal::CrystalParams p;
  double boost;

  Vec4 flux(const Vec4& u) const {
    return crystal::conserved_flux4(p, u) - boost * u;
  }
  double speed(const Vec4& u) const {
    return crystal::max_wave_speed4(p, u) + std::abs(boost);
  }
  crystal::Frame4 frame(const Vec4& u) const {
    crystal::Frame4 f = crystal::frame4(p, u);
    for (double& l : f.lambda) l -= boost;
    return f;
  }
};

struct GenericOps {
  const SystemModel* m;

  Vec4 flux(const Vec4& u) const {
    Vec r = m->conserved_flux(Vec(u));
    return Vec4(r[0], r[1], r[2], r[3]);
  }
  double speed(const Vec4& u) const { return m->max_wave_speed(Vec(u)); }
  crystal::Frame4 frame(const Vec4& u) const {
    EigenFrame f = eigenframe(*m, Vec(u));
    crystal::Frame4 out;
    for (int i = 0; i < 4; ++i) {
      out.lambda[i] = f.lambda[i];
      for (int k = 0; k < 4; ++k) {
        out.e[i][k] = f.e(k, i);
        out.estar[i][k] = f.estar(i, k);
      }
    }
    return out;
  }
};

inline double minmod(double a, double b) {
  if (a > 0.0 && b > 0.0) return std::min(a, b);
  if (a < 0.0 && b < 0.0) return std::max(a, b);
  return 0.0;
}

inline double minmod3(double a, double b, double c) {
  return minmod(a, minmod(b, c));
}

enum class Limiter { None, Minmod, Mc };

Limiter parse_limiter(const std::string& s) {
  if (s == "none") return Limiter::None;
  if (s == "minmod") return Limiter::Minmod;
  if (s == "mc") return Limiter::Mc;
  throw InvalidParams("unknown limiter '" + s + "' (none | minmod | mc)");
}

struct Storage {
  std::vector<double> times;
  std::vector<std::vector<Vec4>> levels;
  long stride = 1;
  long capacity = 8;

  void store(double t, const std::vector<Vec4>& u, long nx) {
    if (static_cast<long>(levels.size()) >= capacity) thin();
    std::vector<Vec4> interior(nx + 1);
    std::copy(u.begin() + 2, u.begin() + 2 + nx + 1, interior.begin());
    levels.push_back(std::move(interior));
    times.push_back(t);
  }

  // Halve the stored cadence in place once the budget is reached: keep every
  // second level (always the first) and double the stride going forward.
  void thin() {
    std::size_t w = 0;
    for (std::size_t r = 0; r < levels.size(); r += 2, ++w) {
      if (w != r) {
        levels[w] = std::move(levels[r]);
        times[w] = times[r];
      }
    }
    levels.resize(w);
    times.resize(w);
    stride *= 2;
  }
};

template <class Ops>
GridSolution solve_kernel(const SystemModel& model, const Ops& ops,
                          const std::function<Vec4(double)>& init,
                          const SolveOptions& opt) {
  if (!(opt.dx > 0.0)) throw InvalidParams("dx must be positive");
  if (!(opt.cfl > 0.0 && opt.cfl <= 1.0))
    throw InvalidParams("cfl must lie in (0, 1]");
  if (!(opt.x_hi > opt.x_lo)) throw InvalidParams("empty spatial domain");
  if (opt.t_end < 0.0) throw InvalidParams("t_end must be non-negative");
  const bool conservative = opt.scheme == "conservative";
  if (!conservative && opt.scheme != "primitive")
    throw InvalidParams("unknown scheme '" + opt.scheme +
                        "' (conservative | primitive)");
  const Limiter lim = parse_limiter(opt.limiter);

  const long nx = std::max<long>(4, std::llround((opt.x_hi - opt.x_lo) / opt.dx));
  const double dx = (opt.x_hi - opt.x_lo) / static_cast<double>(nx);
  const long n_tot = nx + 5; // two ghost nodes on each side
  const int nt = effective_threads(opt.threads);
  (void)nt;

  const double delta = model.ball_radius;
  std::vector<Vec4> u(n_tot), u1(n_tot), rhs(n_tot, Vec4::Zero());
  std::vector<Vec4> slope(n_tot, Vec4::Zero()), fhat(n_tot, Vec4::Zero());

  auto xof = [&](long j) { return opt.x_lo + dx * static_cast<double>(j - 2); };
  for (long j = 2; j <= nx + 2; ++j) u[j] = init(xof(j));
  auto fill_ghosts = [&](std::vector<Vec4>& a) {
    a[0] = a[1] = a[2];
    a[nx + 3] = a[nx + 4] = a[nx + 2];
  };
  fill_ghosts(u);

  auto check_ball = [&](const std::vector<Vec4>& a, double t) {
    if (!opt.enforce_ball) return;
    for (long j = 2; j <= nx + 2; ++j) {
      if (a[j].squaredNorm() >= delta * delta)
        throw OutOfBall("solution left the safety ball |u| < delta at x = " +
                        std::to_string(xof(j)) + ", t = " + std::to_string(t));
    }
  };
  check_ball(u, 0.0);

  // rhs <- L(a); returns the largest signal speed met while assembling.
  auto eval_rhs = [&](const std::vector<Vec4>& a) -> double {
    double vmax = 0.0;
    if (conservative) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nt)
#endif
      for (long j = 1; j <= nx + 3; ++j) {
        switch (lim) {
          case Limiter::None:
            slope[j] = 0.5 * (a[j + 1] - a[j - 1]);
            break;
          case Limiter::Minmod:
            for (int k = 0; k < 4; ++k)
              slope[j][k] = minmod(a[j][k] - a[j - 1][k], a[j + 1][k] - a[j][k]);
            break;
          case Limiter::Mc:
            for (int k = 0; k < 4; ++k)
              slope[j][k] = minmod3(0.5 * (a[j + 1][k] - a[j - 1][k]),
                                    2.0 * (a[j][k] - a[j - 1][k]),
                                    2.0 * (a[j + 1][k] - a[j][k]));
            break;
        }
      }
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : vmax) num_threads(nt)
#endif
      for (long j = 1; j <= nx + 2; ++j) {
        const Vec4 ul = a[j] + 0.5 * slope[j];
        const Vec4 ur = a[j + 1] - 0.5 * slope[j + 1];
        const double al = std::max(ops.speed(ul), ops.speed(ur));
        vmax = std::max(vmax, al);
        fhat[j] = 0.5 * (ops.flux(ul) + ops.flux(ur)) - 0.5 * al * (ur - ul);
      }
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nt)
#endif
      for (long j = 2; j <= nx + 2; ++j)
        rhs[j] = (fhat[j - 1] - fhat[j]) / dx;
    } else {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : vmax) num_threads(nt)
#endif
      for (long j = 2; j <= nx + 2; ++j) {
        const crystal::Frame4 f = ops.frame(a[j]);
        const Vec4 dm = (a[j] - a[j - 1]) / dx;
        const Vec4 dp = (a[j + 1] - a[j]) / dx;
        Vec4 acc = Vec4::Zero();
        for (int i = 0; i < 4; ++i) {
          const double lam = f.lambda[i];
          const Vec4& g = lam > 0.0 ? dm : dp;
          double w = 0.0;
          for (int k = 0; k < 4; ++k) w += f.estar[i][k] * g[k];
          const double coef = lam * w;
          for (int k = 0; k < 4; ++k) acc[k] += coef * f.e[i][k];
          vmax = std::max(vmax, std::abs(lam));
        }
        rhs[j] = -acc;
      }
    }
    return vmax;
  };

  Storage st;
  {
    const double bytes_per_level = 32.0 * static_cast<double>(nx + 1);
    st.capacity = std::max<long>(
        8, static_cast<long>(opt.level_budget_mb * 1048576.0 / bytes_per_level));
    double alpha0 = 0.0;
    for (long j = 2; j <= nx + 2; ++j) alpha0 = std::max(alpha0, ops.speed(u[j]));
    const double est_steps =
        alpha0 > 0.0 ? opt.t_end * alpha0 / (opt.cfl * dx) : 1.0;
    st.stride = std::max<long>(
        1, static_cast<long>(est_steps / std::max<long>(1, st.capacity - 2)) + 1);
  }

  std::vector<SteepnessEvent> events;
  auto maybe_record_steepness = [&](const std::vector<Vec4>& a, double t) {
    if (!(opt.gradient_cap > 0.0)) return;
    double worst = 0.0;
    long jworst = 2;
    for (long j = 2; j <= nx + 2; ++j) {
      const double g =
          (a[j + 1] - a[j - 1]).cwiseAbs().maxCoeff() / (2.0 * dx);
      if (g > worst) {
        worst = g;
        jworst = j;
      }
    }
    if (worst > opt.gradient_cap)
      events.push_back({t, xof(jworst), worst});
  };

  st.store(0.0, u, nx);
  maybe_record_steepness(u, 0.0);

  double t = 0.0;
  long step = 0;
  const double t_eps = 1e-12 * std::max(1.0, opt.t_end);
  while (t < opt.t_end - t_eps) {
    double alpha = 0.0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : alpha) num_threads(nt)
#endif
    for (long j = 2; j <= nx + 2; ++j)
      alpha = std::max(alpha, ops.speed(u[j]));
    if (!(alpha > 0.0))
      throw CFLViolation("wave speeds vanished; cannot advance");
    double dt = opt.cfl * dx / alpha;
    if (t + dt > opt.t_end) dt = opt.t_end - t;

    // Heun / SSP-RK2. The speed check guards against mid-step growth past
    // the CFL bound that the step size was chosen for.
    double vmax = eval_rhs(u);
    if (vmax * dt > dx * (1.0 + 1e-9))
      throw CFLViolation("signal speed grew past the CFL bound mid-step");
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nt)
#endif
    for (long j = 2; j <= nx + 2; ++j) u1[j] = u[j] + dt * rhs[j];
    fill_ghosts(u1);
    check_ball(u1, t + dt);

    vmax = eval_rhs(u1);
    if (vmax * dt > dx * (1.0 + 1e-9))
      throw CFLViolation("signal speed grew past the CFL bound mid-step");
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nt)
#endif
    for (long j = 2; j <= nx + 2; ++j)
      u[j] = 0.5 * (u[j] + u1[j] + dt * rhs[j]);
    fill_ghosts(u);

    t += dt;
    ++step;
    check_ball(u, t);
    const bool final_step = t >= opt.t_end - t_eps;
    if (step % st.stride == 0 || final_step) {
      st.store(t, u, nx);
      maybe_record_steepness(u, t);
    }
  }

  std::vector<double> xs(nx + 1);
  for (long j = 0; j <= nx; ++j) xs[j] = xof(j + 2);
  GridSolution sol(std::move(xs), std::move(st.times), std::move(st.levels), 4);
  sol.steepness_events = std::move(events);
  return sol;
}

} // namespace

GridSolution reference_solve(const SystemModel& model,
                             const std::function<Vec4(double)>& init,
                             const SolveOptions& opt) {
  if (model.dimension != 4)
    throw InvalidParams("the grid solver handles 4-component systems");
  const bool conservative = opt.scheme == "conservative";
  if (conservative && !model.crystal_params && !model.conserved_flux)
    throw InvalidParams(
        "conservative scheme needs a conserved flux; use scheme = primitive");
  if (!model.crystal_params && !model.max_wave_speed)
    throw InvalidParams("model must provide max_wave_speed");

  if (model.crystal_params) {
    CrystalOps ops{*model.crystal_params, model.frame_speed};
    return solve_kernel(model, ops, init, opt);
  }
  GenericOps ops{&model};
  return solve_kernel(model, ops, init, opt);
}

GridSolution reference_solve(const SystemModel& model, const SeedProfile& seed,
                             const SolveOptions& opt) {
  return reference_solve(
      model, [&seed](double x) { return seed.f(x); }, opt);
}

// ---------------------------------------------------------------------------
// Dense output
// ---------------------------------------------------------------------------

GridSolution::GridSolution(std::vector<double> x, std::vector<double> times,
                           std::vector<std::vector<Vec4>> levels, int dim)
    : x_(std::move(x)), times_(std::move(times)), levels_(std::move(levels)),
      dim_(dim) {
  if (x_.size() < 4 || times_.empty() || times_.size() != levels_.size())
    throw InvalidParams("grid solution needs a grid and matching time levels");
  dx_ = (x_.back() - x_.front()) / static_cast<double>(x_.size() - 1);
}

int GridSolution::level_index(double t) const {
  const double slack = 1e-9 * std::max(1.0, times_.back());
  if (t < times_.front() - slack || t > times_.back() + slack)
    throw InterpolationOutOfRange("time " + std::to_string(t) +
                                  " outside the stored range [0, " +
                                  std::to_string(times_.back()) + "]");
  if (times_.size() == 1) return 0;
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  long idx = std::distance(times_.begin(), it) - 1;
  idx = std::clamp<long>(idx, 0, static_cast<long>(times_.size()) - 2);
  return static_cast<int>(idx);
}

void GridSolution::sample_level(int level, double x, Vec4& u, Vec4& ux) const {
  const long n = static_cast<long>(x_.size());
  double pos = (x - x_.front()) / dx_;
  long j = static_cast<long>(std::floor(pos));
  long s = std::clamp<long>(j - 1, 0, n - 4);
  const double xi = pos - static_cast<double>(s);
  const double a = xi - 1.0, b = xi - 2.0, c = xi - 3.0;
  const double w0 = -a * b * c / 6.0;
  const double w1 = xi * b * c / 2.0;
  const double w2 = -xi * a * c / 2.0;
  const double w3 = xi * a * b / 6.0;
  const double d0 = -(b * c + a * c + a * b) / 6.0;
  const double d1 = (b * c + xi * c + xi * b) / 2.0;
  const double d2 = -(a * c + xi * c + xi * a) / 2.0;
  const double d3 = (a * b + xi * b + xi * a) / 6.0;
  const std::vector<Vec4>& L = levels_[level];
  u = w0 * L[s] + w1 * L[s + 1] + w2 * L[s + 2] + w3 * L[s + 3];
  ux = (d0 * L[s] + d1 * L[s + 1] + d2 * L[s + 2] + d3 * L[s + 3]) / dx_;
}

void GridSolution::sample(double x, double t, Vec4& u, Vec4& ux) const {
  const double slack = 1e-9 * std::max(1.0, x_.back() - x_.front());
  if (x < x_.front() - slack || x > x_.back() + slack)
    throw InterpolationOutOfRange("position " + std::to_string(x) +
                                  " outside the grid");
  const double xc = std::clamp(x, x_.front(), x_.back());
  const int l = level_index(t);
  if (times_.size() == 1) {
    sample_level(0, xc, u, ux);
    return;
  }
  Vec4 u0, ux0, u1s, ux1;
  sample_level(l, xc, u0, ux0);
  sample_level(l + 1, xc, u1s, ux1);
  const double span = times_[l + 1] - times_[l];
  const double th = span > 0.0 ? std::clamp((t - times_[l]) / span, 0.0, 1.0)
                               : 0.0;
  u = (1.0 - th) * u0 + th * u1s;
  ux = (1.0 - th) * ux0 + th * ux1;
}

Vec4 GridSolution::state_at(double x, double t) const {
  Vec4 u, ux;
  sample(x, t, u, ux);
  return u;
}

Vec4 GridSolution::gradient_at(double x, double t) const {
  Vec4 u, ux;
  sample(x, t, u, ux);
  return ux;
}

} // namespace shockfan
