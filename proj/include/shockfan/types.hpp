#pragma once

#include <Eigen/Dense>

namespace shockfan {

// The generic layer works with dynamically sized vectors so that models of any
// dimension N fit through the same interfaces. Hot loops for the 4-dimensional
// crystal model use fixed-size arrays internally (see crystal.hpp).
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

} // namespace shockfan
