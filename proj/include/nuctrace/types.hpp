#pragma once

#include <complex>
#include <limits>

#include <Eigen/Dense>

namespace nuctrace {

using Real = double;
using Complex = std::complex<double>;

using RVector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;
using IVector = Eigen::VectorXi;
using RMatrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr Real kInfinity = std::numeric_limits<Real>::infinity();

}  // namespace nuctrace
