#pragma once

#include <cstdint>
#include <string>

#include "dantzig/types.hpp"

namespace dantzig {

enum class SensingKind { GaussianUnitColumns, BernoulliSigned, Custom };

std::string to_string(SensingKind kind);

/// Dense real n x p measurement matrix X with n <= p.
struct SensingMatrix {
  SensingKind kind = SensingKind::Custom;
  std::uint64_t seed = 0;
  RealMat entries;

  Index rows() const noexcept { return entries.rows(); }
  Index cols() const noexcept { return entries.cols(); }
};

/// I.i.d. standard normal entries, each column rescaled to unit l2 norm.
SensingMatrix gaussian_sensing(Index n, Index p, std::uint64_t seed);

/// I.i.d. entries uniform on {+1/sqrt(n), -1/sqrt(n)}.
SensingMatrix bernoulli_sensing(Index n, Index p, std::uint64_t seed);

/// Wraps a caller-provided matrix (e.g. read from disk). Throws DimensionError if n > p.
SensingMatrix custom_sensing(RealMat entries);

struct NoiseSpec {
  double sigma = 0.0;
  std::uint64_t seed = 0;
  /// Also perturb the imaginary part of complex observations with independent N(0, σ²)
  /// draws. Off by default: the observation model has z real even when β is complex.
  bool circular = false;
};

/// y = Xβ + z with z i.i.d. N(0, σ²).
template <typename Scalar>
Vec<Scalar> observe(const SensingMatrix& x, const Vec<Scalar>& beta, const NoiseSpec& noise);

}  // namespace dantzig
