#pragma once

#include "shockfan/errors.hpp"
#include "shockfan/types.hpp"

namespace shockfan {

// Scalar product in which the eigenvectors of the flux matrix at the trivial
// state form an orthonormal basis. Given that basis as columns of B, the
// product is <v,w> = (B^-1 v) . (B^-1 w), i.e. the Gram matrix is
// G = B^-T B^-1. All frame normalizations in the toolkit use this product.
class BaseMetric {
 public:
  BaseMetric() = default;

  explicit BaseMetric(const Mat& base_frame) : b_(base_frame) {
    Eigen::FullPivLU<Mat> lu(b_);
    if (!lu.isInvertible())
      throw InvalidParams("base frame matrix is singular");
    binv_ = lu.inverse();
    gram_ = binv_.transpose() * binv_;
  }

  int dim() const { return static_cast<int>(b_.rows()); }

  double inner(const Vec& v, const Vec& w) const {
    return v.dot(gram_ * w);
  }

  double norm(const Vec& v) const { return std::sqrt(inner(v, v)); }

  const Mat& gram() const { return gram_; }
  const Mat& frame() const { return b_; }
  const Mat& frame_inverse() const { return binv_; }

 private:
  Mat b_;     // columns: eigenbasis at the trivial state
  Mat binv_;
  Mat gram_;
};

} // namespace shockfan
