#include "shockfan/eigenframe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "shockfan/errors.hpp"

namespace shockfan {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double unit_double(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

void check_in_domain(const SystemModel& model, const Vec& u) {
  if (u.norm() >= 2.0 * model.ball_radius)
    throw OutOfDomain("state norm " + std::to_string(u.norm()) +
                      " outside the open ball of radius 2 * " +
                      std::to_string(model.ball_radius));
}

} // namespace

Mat flux_directional_derivative(const SystemModel& model, const Vec& u,
                                const Vec& v, double fd_step_rel) {
  if (model.flux_dir_deriv) return model.flux_dir_deriv(u, v);
  const double h = fd_step_rel * model.ball_radius;
  const double lim = 2.0 * model.ball_radius;
  if ((u + 2.0 * h * v).norm() >= lim || (u - 2.0 * h * v).norm() >= lim)
    throw OutOfDomain("finite-difference stencil leaves the state ball");
  Mat ap2 = model.flux_matrix(u + 2.0 * h * v);
  Mat ap1 = model.flux_matrix(u + h * v);
  Mat am1 = model.flux_matrix(u - h * v);
  Mat am2 = model.flux_matrix(u - 2.0 * h * v);
  // Difference first, scale last: entries constant along v then cancel
  // exactly instead of leaving an O(eps / h) floor.
  return (8.0 * (ap1 - am1) - (ap2 - am2)) / (12.0 * h);
}

EigenFrame eigenframe(const SystemModel& model, const Vec& u) {
  check_in_domain(model, u);
  if (model.analytic_frame) return model.analytic_frame(u);

  const int n = model.dimension;
  Mat a = model.flux_matrix(u);
  Eigen::EigenSolver<Mat> solver(a, true);
  if (solver.info() != Eigen::Success)
    throw NonHyperbolic("eigenvalue iteration failed to converge");

  const double scale = 1.0 + a.cwiseAbs().maxCoeff();
  const double imag_tol = 1e-9 * scale;
  for (int i = 0; i < n; ++i) {
    if (std::abs(solver.eigenvalues()[i].imag()) > imag_tol)
      throw NonHyperbolic("complex eigenvalue encountered");
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return solver.eigenvalues()[i].real() > solver.eigenvalues()[j].real();
  });

  EigenFrame f;
  f.u = u;
  f.lambda.resize(n);
  f.e.resize(n, n);
  for (int i = 0; i < n; ++i) {
    f.lambda[i] = solver.eigenvalues()[order[i]].real();
    for (int r = 0; r < n; ++r) {
      auto entry = solver.eigenvectors()(r, order[i]);
      if (std::abs(entry.imag()) > imag_tol)
        throw NonHyperbolic("complex eigenvector encountered");
      f.e(r, i) = entry.real();
    }
  }
  for (int i = 0; i + 1 < n; ++i) {
    if (f.lambda[i] - f.lambda[i + 1] <= kGapTol)
      throw NonHyperbolic("eigenvalue gap below tolerance between families " +
                          std::to_string(i) + " and " + std::to_string(i + 1));
  }

  for (int i = 0; i < n; ++i)
    f.e.col(i) /= model.metric.norm(f.e.col(i));

  Eigen::FullPivLU<Mat> lu(f.e);
  if (!lu.isInvertible())
    throw NonHyperbolic("eigenvector matrix is singular");
  f.estar = lu.inverse();

  // Orientation: flip each pair (e_i, e*^i) so the self-interaction
  // coefficient c^i_ii is negative; when it vanishes, fall back to a positive
  // base-frame overlap so linear families still get a reproducible sign.
  for (int i = 0; i < n; ++i) {
    Mat d = flux_directional_derivative(model, u, f.e.col(i));
    double ciii = f.estar.row(i).dot(d * f.e.col(i));
    bool flip;
    if (std::abs(ciii) >= kSignTol) {
      flip = ciii > 0.0;
    } else {
      flip = model.metric.inner(f.e.col(i), model.base_frame.col(i)) < 0.0;
    }
    if (flip) {
      f.e.col(i) = -f.e.col(i);
      f.estar.row(i) = -f.estar.row(i);
    }
  }
  return f;
}

std::vector<double> assemble_gamma(const Vec& lambda,
                                   const std::vector<double>& c,
                                   const Mat& overlaps) {
  const int n = static_cast<int>(lambda.size());
  auto C = [&](int j, int k, int l) { return c[(j * n + k) * n + l]; };
  std::vector<double> g(static_cast<std::size_t>(n) * n * n, 0.0);
  auto G = [&](int i, int l, int m) -> double& {
    return g[(i * n + l) * n + m];
  };

  for (int i = 0; i < n; ++i) {
    G(i, i, i) = -C(i, i, i);
    for (int m = 0; m < n; ++m) {
      if (m == i) continue;
      double sum = 0.0;
      for (int l = 0; l < n; ++l) {
        if (l == i) continue;
        sum += (lambda[i] - lambda[m]) / (lambda[i] - lambda[l]) *
               C(l, i, m) * overlaps(l, i);
      }
      double val = 0.5 * (-C(i, m, i) - C(i, i, m) + sum);
      G(i, i, m) = val;
      G(i, m, i) = val;
    }
    for (int l = 0; l < n; ++l) {
      if (l == i) continue;
      for (int m = 0; m < n; ++m) {
        if (m == i || m == l) continue;
        G(i, l, m) = 0.5 * ((lambda[l] - lambda[m]) / (lambda[i] - lambda[l]) *
                                C(i, l, m) +
                            (lambda[m] - lambda[l]) / (lambda[i] - lambda[m]) *
                                C(i, m, l));
      }
    }
  }
  return g;
}

StructureCoefficients structure_coeffs(const SystemModel& model, const Vec& u,
                                       const EigenFrame& frame,
                                       double fd_step_rel) {
  const int n = model.dimension;
  StructureCoefficients sc;
  sc.n = n;
  sc.c.assign(static_cast<std::size_t>(n) * n * n, 0.0);
  for (int l = 0; l < n; ++l) {
    Mat d = flux_directional_derivative(model, u, frame.e.col(l), fd_step_rel);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        sc.c[(j * n + k) * n + l] = frame.estar.row(j).dot(d * frame.e.col(k));
  }
  Mat overlaps(n, n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      overlaps(l, i) = model.metric.inner(frame.e.col(l), frame.e.col(i));
  sc.gamma = assemble_gamma(frame.lambda, sc.c, overlaps);
  return sc;
}

std::vector<Vec> sample_ball(int dim, double radius, int count,
                             std::uint64_t seed) {
  if (dim <= 0) throw InvalidParams("sample_ball: dimension must be positive");
  if (!(radius > 0.0))
    throw InvalidParams("sample_ball: radius must be positive");
  if (count < 0) throw InvalidParams("sample_ball: negative count");

  // Additive-recurrence sequence with irrational steps from the root of
  // x^{dim+1} = x + 1, offset by a seeded point. Low-discrepancy and fully
  // deterministic. Points falling outside the ball are skipped.
  double phi = 1.5;
  for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / (dim + 1));
  std::vector<double> alpha(dim), state(dim);
  double inv = 1.0;
  std::uint64_t s = seed ^ 0xD1B54A32D192ED03ull;
  for (int j = 0; j < dim; ++j) {
    inv /= phi;
    alpha[j] = inv;
    state[j] = unit_double(splitmix64(s));
  }

  std::vector<Vec> out;
  out.reserve(count);
  Vec p(dim);
  while (static_cast<int>(out.size()) < count) {
    double norm2 = 0.0;
    for (int j = 0; j < dim; ++j) {
      state[j] += alpha[j];
      state[j] -= std::floor(state[j]);
      p[j] = radius * (2.0 * state[j] - 1.0);
      norm2 += p[j] * p[j];
    }
    if (norm2 < radius * radius) out.push_back(p);
  }
  return out;
}

double hyperbolicity_margin(const SystemModel& model, double delta,
                            int samples, std::uint64_t seed) {
  if (samples < 1)
    throw InvalidParams("hyperbolicity_margin: needs at least one sample");
  if (!(delta > 0.0))
    throw InvalidParams("hyperbolicity_margin: delta must be positive");

  const int n = model.dimension;
  Vec lo = Vec::Constant(n, std::numeric_limits<double>::infinity());
  Vec hi = Vec::Constant(n, -std::numeric_limits<double>::infinity());
  auto absorb = [&](const Vec& u) {
    EigenFrame f = eigenframe(model, u);
    lo = lo.cwiseMin(f.lambda);
    hi = hi.cwiseMax(f.lambda);
  };
  absorb(Vec::Zero(n));
  // The margin pairs an infimum of one family with a supremum of another at
  // possibly different states, hence one shared sample cloud over the whole
  // 2 delta ball.
  for (const Vec& u : sample_ball(n, 2.0 * delta, samples, seed)) absorb(u);

  double sigma = std::numeric_limits<double>::infinity();
  for (int k = 0; k + 1 < n; ++k) sigma = std::min(sigma, lo[k] - hi[k + 1]);
  return sigma;
}

double separation_time(double sigma) {
  if (!(sigma > 0.0))
    throw NonPositiveMargin("separation time undefined for margin " +
                            std::to_string(sigma));
  return 2.0 / sigma;
}

GenuineNonlinearity genuine_nonlinearity_check(const SystemModel& model,
                                               double delta, int samples,
                                               std::uint64_t seed) {
  const int n = model.dimension;
  GenuineNonlinearity res;
  res.family.assign(n, true);
  res.tested = samples > 0;
  if (!res.tested) return res;
  if (!(delta > 0.0))
    throw InvalidParams("genuine_nonlinearity_check: delta must be positive");

  std::vector<Vec> pts = sample_ball(n, 2.0 * delta, samples, seed);
  pts.insert(pts.begin(), Vec::Zero(n));
  for (const Vec& u : pts) {
    EigenFrame f = eigenframe(model, u);
    for (int i = 0; i < n; ++i) {
      if (!res.family[i]) continue;
      Mat d = flux_directional_derivative(model, u, f.e.col(i));
      double ciii = f.estar.row(i).dot(d * f.e.col(i));
      // The frame orientation already makes c^i_ii non-positive; the family
      // counts as genuinely nonlinear only if it is bounded away from zero.
      if (!(ciii <= -kSignTol)) res.family[i] = false;
    }
  }
  return res;
}

} // namespace shockfan
