#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Core>

namespace feller {

template <class Scalar, int Rows = Eigen::Dynamic>
using vec_type = Eigen::Matrix<Scalar, Rows, 1>;

template <class Scalar, int Rows = Eigen::Dynamic, int Cols = Eigen::Dynamic>
using mat_type = Eigen::Matrix<Scalar, Rows, Cols>;

using Vector = vec_type<double>;
using Matrix = mat_type<double>;
using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace feller
