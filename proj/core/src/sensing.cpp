#include "dantzig/sensing.hpp"

#include <cmath>

#include "dantzig/errors.hpp"
#include "dantzig/linalg.hpp"
#include "dantzig/rng.hpp"

namespace dantzig {

std::string to_string(SensingKind kind) {
  switch (kind) {
    case SensingKind::GaussianUnitColumns:
      return "gaussian";
    case SensingKind::BernoulliSigned:
      return "bernoulli";
    case SensingKind::Custom:
      return "custom";
  }
  return "unknown";
}

namespace {

void check_shape(Index n, Index p) {
  if (n < 1 || p < 1) throw DimensionError("sensing matrix: dimensions must be positive");
  if (n > p) {
    throw DimensionError("sensing matrix: n = " + std::to_string(n) + " exceeds p = " +
                         std::to_string(p));
  }
}

}  // namespace

SensingMatrix gaussian_sensing(Index n, Index p, std::uint64_t seed) {
  check_shape(n, p);
  Rng rng(seed);
  SensingMatrix x{SensingKind::GaussianUnitColumns, seed, RealMat(n, p)};
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < n; ++i) x.entries(i, j) = rng.normal();
    x.entries.col(j).normalize();
  }
  return x;
}

SensingMatrix bernoulli_sensing(Index n, Index p, std::uint64_t seed) {
  check_shape(n, p);
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  SensingMatrix x{SensingKind::BernoulliSigned, seed, RealMat(n, p)};
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < n; ++i) x.entries(i, j) = rng.coin() ? scale : -scale;
  }
  return x;
}

SensingMatrix custom_sensing(RealMat entries) {
  check_shape(entries.rows(), entries.cols());
  return SensingMatrix{SensingKind::Custom, 0, std::move(entries)};
}

template <typename Scalar>
Vec<Scalar> observe(const SensingMatrix& x, const Vec<Scalar>& beta, const NoiseSpec& noise) {
  if (beta.size() != x.cols()) throw DimensionError("observe: signal length does not match X");
  if (!(noise.sigma >= 0.0)) throw std::invalid_argument("observe: sigma must be nonnegative");
  Vec<Scalar> y = real_matvec<Scalar>(x.entries, beta);
  if (noise.sigma > 0.0) {
    Rng rng(noise.seed);
    for (Index i = 0; i < y.size(); ++i) {
      if constexpr (is_complex_v<Scalar>) {
        const double re = rng.normal();
        const double im = noise.circular ? rng.normal() : 0.0;
        y[i] += noise.sigma * Complex(re, im);
      } else {
        y[i] += noise.sigma * rng.normal();
      }
    }
  }
  return y;
}

template RealVec observe<double>(const SensingMatrix&, const RealVec&, const NoiseSpec&);
template ComplexVec observe<Complex>(const SensingMatrix&, const ComplexVec&, const NoiseSpec&);

}  // namespace dantzig
