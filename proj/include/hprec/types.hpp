#pragma once

#include <complex>
#include <random>

#include <Eigen/Dense>

namespace hprec {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Every stochastic routine takes this engine explicitly; nothing in the
// library owns global random state.
using Rng = std::mt19937_64;

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace hprec
