#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "dantzig/dictionary.hpp"
#include "dantzig/sensing.hpp"
#include "dantzig/spectral.hpp"
#include "dantzig/types.hpp"

namespace dantzig {

/// The Dantzig selector with an overcomplete dictionary:
///
///   min ‖c‖₁  subject to  ‖D⁻¹B*Xᵀ(XBc − y)‖∞ ≤ δ,   d_jj = ‖(XB)_j‖₂.
template <SolverScalar Scalar>
struct Problem {
  SensingMatrix x;
  Dictionary dictionary;
  Vec<Scalar> y;
  double delta = 0.0;
};

/// Universal threshold σ·sqrt(2 ln q); used when the caller does not pick δ.
double default_delta(double sigma, Index q);

enum class ApplyMode { MatrixFree, Dense };

struct AssemblyOptions {
  ApplyMode mode = ApplyMode::MatrixFree;
  double spectral_tol = 1e-10;
  int spectral_max_iters = 20000;
};

template <SolverScalar Scalar>
class Precomputed;

/// Throws DimensionError on inconsistent shapes (or a complex dictionary with a real
/// solver) and SingularNormalization if some d_jj <= 1e-14.
template <SolverScalar Scalar>
Precomputed<Scalar> assemble(Problem<Scalar> problem, const AssemblyOptions& options = {});

/// Derived quantities of a problem: D, γ = D⁻¹B*Xᵀy, the operator A = D⁻¹B*XᵀXB and an
/// upper bound on ‖A‖₂. Immutable; safe to share between concurrent solves.
template <SolverScalar Scalar>
class Precomputed {
 public:
  const Problem<Scalar>& problem() const noexcept { return *problem_; }
  const RealVec& normalization() const noexcept { return d_; }
  const Vec<Scalar>& gamma() const noexcept { return gamma_; }
  double a_norm() const noexcept { return a_norm_; }
  double delta() const noexcept { return problem_->delta; }
  Index size() const noexcept { return d_.size(); }
  ApplyMode mode() const noexcept { return mode_; }

  /// out = A c
  void apply(const Vec<Scalar>& c, Vec<Scalar>& out) const;
  /// out = A* v = B*XᵀXB D⁻¹ v
  void adjoint_apply(const Vec<Scalar>& v, Vec<Scalar>& out) const;

  LinearOperator<Scalar> op() const;

  /// Dense A; built from the operator (q applications) in matrix-free mode.
  Mat<Scalar> dense() const;

  /// Copy with a different δ; D, γ and the bound on ‖A‖ do not depend on it.
  Precomputed with_delta(double delta) const;

 private:
  friend Precomputed assemble<Scalar>(Problem<Scalar> problem, const AssemblyOptions& options);

  Precomputed() = default;

  std::shared_ptr<const Problem<Scalar>> problem_;
  RealVec d_;
  Vec<Scalar> gamma_;
  double a_norm_ = 0.0;
  ApplyMode mode_ = ApplyMode::MatrixFree;
  std::shared_ptr<const Mat<Scalar>> gram_;  ///< (XB)*(XB), dense mode only
};

enum class StopReason { ResidualTolerance, SupportStationary, MaxIter };

std::string to_string(StopReason reason);

struct SolverConfig {
  double alpha = 1.0;
  double epsilon = 1e-4;
  int eta = 20;
  long max_iter = 50000;
  /// When set, one CSV row per iteration: k,l1_norm,feasibility_gap,support_size.
  std::ostream* trace = nullptr;
};

/// Iterate (c^k, τ^k, τ^{k-1}) of the proximity-operator algorithm. `image` caches A c^k.
template <SolverScalar Scalar>
struct SolverState {
  Vec<Scalar> c;
  Vec<Scalar> tau;
  Vec<Scalar> tau_prev;
  Vec<Scalar> image;
  long k = 0;
  long support_age = 0;

  static SolverState zero(Index q);
};

/// Scale-matched α = ‖A‖/‖γ‖∞ (1 when γ = 0). Soft-thresholding at 1/α is then of
/// the order of the largest correlation divided by ‖A‖, independent of signal amplitude.
template <SolverScalar Scalar>
double balanced_alpha(const Precomputed<Scalar>& pre);

/// Step-size ratio λ/α = 0.999/‖A‖² for a given bound on ‖A‖.
double step_ratio(double a_norm);

/// One POA step:
///   c ← soft(c − (λ/α)A*(2τ − τ_prev), 1/α),   τ ← (I − P_F)(Ac + τ).
template <SolverScalar Scalar>
SolverState<Scalar> iterate(SolverState<Scalar> state, const Precomputed<Scalar>& pre,
                            const SolverConfig& cfg);

/// In-place variant of iterate(); returns true if the support changed.
template <SolverScalar Scalar>
bool step(SolverState<Scalar>& state, const Precomputed<Scalar>& pre, const SolverConfig& cfg);

template <SolverScalar Scalar>
struct Solution {
  Vec<Scalar> c_raw;
  Vec<Scalar> c_hat;
  std::vector<Index> support;
  long iterations = 0;
  StopReason stop_reason = StopReason::MaxIter;
  double residual = 0.0;
  double elapsed_seconds = 0.0;
};

/// ‖Ac − γ‖∞ / max(‖c‖₂, 1), the first stopping quantity.
template <SolverScalar Scalar>
double relative_residual(const SolverState<Scalar>& state, const Precomputed<Scalar>& pre);

/// Runs POA from zero until a stopping rule fires, then debiases on the support.
template <SolverScalar Scalar>
Solution<Scalar> solve(const Precomputed<Scalar>& pre, const SolverConfig& cfg);

template <SolverScalar Scalar>
std::vector<Index> support_of(const Vec<Scalar>& c);

/// Least-squares refit argmin ‖Xᵀ(XB_Λ c − y)‖₂ on Λ = supp(c_raw); zero elsewhere.
template <SolverScalar Scalar>
Vec<Scalar> debias(const Vec<Scalar>& c_raw, const SensingMatrix& x, const Dictionary& b,
                   const Vec<Scalar>& y);

}  // namespace dantzig
