#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Core>

namespace dantzig {

using Index = Eigen::Index;
using Complex = std::complex<double>;

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using RealVec = Vec<double>;
using ComplexVec = Vec<Complex>;
using RealMat = Mat<double>;
using ComplexMat = Mat<Complex>;

template <typename Scalar>
inline constexpr bool is_complex_v = false;
template <>
inline constexpr bool is_complex_v<Complex> = true;

// Solver code is instantiated for exactly these two scalar types.
template <typename Scalar>
concept SolverScalar = std::same_as<Scalar, double> || std::same_as<Scalar, Complex>;

}  // namespace dantzig
