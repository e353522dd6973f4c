#include "shockfan/system_model.hpp"

#include "shockfan/errors.hpp"

namespace shockfan {

void validate_model(const SystemModel& model) {
  if (model.dimension <= 0)
    throw InvalidParams("model dimension must be positive");
  if (!(model.ball_radius > 0.0))
    throw InvalidParams("model ball radius must be positive");
  if (model.base_frame.rows() != model.dimension ||
      model.base_frame.cols() != model.dimension)
    throw InvalidParams("base frame must be square of the model dimension");
  if (!model.flux_matrix)
    throw InvalidParams("model must provide a flux matrix");
  Mat a = model.flux_matrix(Vec::Zero(model.dimension));
  if (a.rows() != model.dimension || a.cols() != model.dimension)
    throw InvalidParams("flux matrix has the wrong shape");

  Eigen::FullPivLU<Mat> lu(model.base_frame);
  if (!lu.isInvertible())
    throw InvalidParams("base frame matrix is singular");

  // Each base-frame column must be an eigenvector of a(0). The Rayleigh
  // quotient gives the candidate eigenvalue; the residual is measured
  // relative to the size of a.
  const double scale = 1.0 + a.cwiseAbs().maxCoeff();
  for (int i = 0; i < model.dimension; ++i) {
    Vec b = model.base_frame.col(i);
    Vec y = a * b;
    double lambda = b.dot(y) / b.squaredNorm();
    if ((y - lambda * b).norm() > 1e-10 * scale * b.norm())
      throw InvalidParams("base frame column " + std::to_string(i) +
                          " is not an eigenvector of the flux matrix at 0");
  }
}

SystemModel boosted(const SystemModel& model, double s) {
  if (s == 0.0) return model;
  SystemModel out = model;
  out.frame_speed = model.frame_speed + s;
  out.name = model.name + "+boost";

  auto flux = model.flux_matrix;
  int n = model.dimension;
  out.flux_matrix = [flux, s, n](const Vec& u) -> Mat {
    Mat a = flux(u);
    a -= s * Mat::Identity(n, n);
    return a;
  };
  // The directional derivative of a - s I equals that of a.
  out.flux_dir_deriv = model.flux_dir_deriv;

  if (model.analytic_frame) {
    auto frame = model.analytic_frame;
    out.analytic_frame = [frame, s](const Vec& u) -> EigenFrame {
      EigenFrame f = frame(u);
      f.lambda.array() -= s;
      return f;
    };
  }
  if (model.conserved_flux) {
    auto cons = model.conserved_flux;
    out.conserved_flux = [cons, s](const Vec& u) -> Vec {
      return cons(u) - s * u;
    };
  }
  if (model.max_wave_speed) {
    auto speed = model.max_wave_speed;
    // Exact for spectra symmetric about zero, a valid bound otherwise.
    out.max_wave_speed = [speed, s](const Vec& u) -> double {
      return speed(u) + std::abs(s);
    };
  }
  return out;
}

} // namespace shockfan
