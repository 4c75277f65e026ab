#pragma once

#include <functional>

#include "dantzig/types.hpp"

namespace dantzig {

/// Matrix-free linear map with its conjugate transpose.
template <typename Scalar>
struct LinearOperator {
  Index rows = 0;
  Index cols = 0;
  std::function<void(const Vec<Scalar>&, Vec<Scalar>&)> apply;
  std::function<void(const Vec<Scalar>&, Vec<Scalar>&)> adjoint;
};

template <typename Scalar>
LinearOperator<Scalar> dense_operator(const Mat<Scalar>& m) {
  return {m.rows(), m.cols(), [m](const Vec<Scalar>& x, Vec<Scalar>& y) { y.noalias() = m * x; },
          [m](const Vec<Scalar>& x, Vec<Scalar>& y) { y.noalias() = m.adjoint() * x; }};
}

/// Relative headroom added on top of the power-iteration estimate.
inline constexpr double kSpectralSafety = 1e-3;

/// Upper estimate (1 + 1e-3)·σ_max(A) from power iteration on A*A, stopping when the
/// Rayleigh quotient changes by at most `tol` relatively between sweeps.
/// Returns 0 for the zero operator. Throws NoConvergence after `max_iters` sweeps.
template <typename Scalar>
double spectral_bound(const LinearOperator<Scalar>& op, double tol = 1e-10,
                      int max_iters = 20000);

}  // namespace dantzig
