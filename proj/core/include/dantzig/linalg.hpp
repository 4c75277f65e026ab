#pragma once

#include "dantzig/types.hpp"

namespace dantzig {

/// out = M x (or Mᵀx) for a real matrix M and a real or complex vector x.
///
/// For complex x the real and imaginary parts are handled as the two columns of a
/// row-major p x 2 view, so the product stays a single real GEMM.
template <typename Scalar>
void real_matvec(const RealMat& m, const Eigen::Ref<const Vec<Scalar>>& x,
                 Eigen::Ref<Vec<Scalar>> out, bool transpose = false) {
  if constexpr (std::is_same_v<Scalar, double>) {
    if (transpose) {
      out.noalias() = m.transpose() * x;
    } else {
      out.noalias() = m * x;
    }
  } else {
    using Pairs = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;
    Eigen::Map<const Pairs> in(reinterpret_cast<const double*>(x.data()), x.size(), 2);
    Eigen::Map<Pairs> res(reinterpret_cast<double*>(out.data()), out.size(), 2);
    if (transpose) {
      res.noalias() = m.transpose() * in;
    } else {
      res.noalias() = m * in;
    }
  }
}

template <typename Scalar>
Vec<Scalar> real_matvec(const RealMat& m, const Vec<Scalar>& x, bool transpose = false) {
  Vec<Scalar> out(transpose ? m.cols() : m.rows());
  real_matvec<Scalar>(m, x, out, transpose);
  return out;
}

}  // namespace dantzig
