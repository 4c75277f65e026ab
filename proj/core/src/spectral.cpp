#include "dantzig/spectral.hpp"

#include <cmath>
#include <string>

#include "dantzig/errors.hpp"
#include "dantzig/rng.hpp"

namespace dantzig {

template <typename Scalar>
double spectral_bound(const LinearOperator<Scalar>& op, double tol, int max_iters) {
  if (op.cols < 1) return 0.0;
  // Fixed start so the bound (and every solve that depends on it) is reproducible.
  Rng rng(0x5EC7A1ULL);
  Vec<Scalar> v(op.cols);
  for (Index i = 0; i < v.size(); ++i) {
    if constexpr (is_complex_v<Scalar>) {
      const double re = rng.normal();
      const double im = rng.normal();
      v[i] = Complex(re, im);
    } else {
      v[i] = rng.normal();
    }
  }
  v.normalize();

  Vec<Scalar> av(op.rows);
  Vec<Scalar> w(op.cols);
  double previous = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    op.apply(v, av);
    const double rayleigh = av.squaredNorm();
    // A random start has a component along every singular vector almost surely.
    if (rayleigh == 0.0) return 0.0;
    if (it > 0 && std::abs(rayleigh - previous) <= tol * rayleigh) {
      return (1.0 + kSpectralSafety) * std::sqrt(rayleigh);
    }
    previous = rayleigh;
    op.adjoint(av, w);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
  }
  throw NoConvergence("spectral_bound: power iteration did not converge in " +
                      std::to_string(max_iters) + " sweeps");
}

template double spectral_bound<double>(const LinearOperator<double>&, double, int);
template double spectral_bound<Complex>(const LinearOperator<Complex>&, double, int);

}  // namespace dantzig
