#pragma once

#include <complex>

#include <Eigen/Dense>

namespace passage {

using Complex = std::complex<double>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vec2 = Eigen::Vector2d;
using VectorXd = Eigen::VectorXd;
using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/// Principal square root; Re(result) >= 0.
inline Complex principal_sqrt(Complex s) { return std::sqrt(s); }

}  // namespace passage
