#include "dantzig/solver.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

#include <Eigen/SVD>

#include "dantzig/errors.hpp"
#include "dantzig/linalg.hpp"
#include "dantzig/prox.hpp"

namespace dantzig {

namespace {

constexpr double kSingularColumn = 1e-14;
constexpr double kStepSafety = 0.999;
constexpr double kSvdCutoff = 1e-12;

template <typename Scalar>
Mat<Scalar> real_matmul(const RealMat& x, const Mat<Scalar>& m, bool transpose) {
  Mat<Scalar> out(transpose ? x.cols() : x.rows(), m.cols());
  for (Index j = 0; j < m.cols(); ++j) {
    Vec<Scalar> col = m.col(j);
    real_matvec<Scalar>(x, col, out.col(j), transpose);
  }
  return out;
}

// XB built row by row: row i of XB is (B^T x_i)^T = conj(B* x_i)^T for real x_i.
template <typename Scalar>
Mat<Scalar> sensing_times_dictionary(const RealMat& x, const Dictionary& b) {
  Mat<Scalar> xb(x.rows(), b.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    const Vec<Scalar> row = x.row(i).transpose().template cast<Scalar>();
    xb.row(i) = b.adjoint_apply<Scalar>(row).conjugate().transpose();
  }
  return xb;
}

template <typename Scalar>
void check_problem(const Problem<Scalar>& p) {
  if (p.x.cols() != p.dictionary.rows()) {
    throw DimensionError("assemble: X has " + std::to_string(p.x.cols()) +
                         " columns but the dictionary has " +
                         std::to_string(p.dictionary.rows()) + " rows");
  }
  if (p.y.size() != p.x.rows()) {
    throw DimensionError("assemble: y has length " + std::to_string(p.y.size()) +
                         ", expected " + std::to_string(p.x.rows()));
  }
  if constexpr (!is_complex_v<Scalar>) {
    if (!p.dictionary.is_real()) {
      throw DimensionError("assemble: a complex dictionary needs the complex solver");
    }
  }
  if (!(p.delta >= 0.0)) throw std::invalid_argument("assemble: delta must be nonnegative");
}

template <typename Scalar>
double l1_norm(const Vec<Scalar>& v) {
  return v.cwiseAbs().sum();
}

}  // namespace

template <SolverScalar Scalar>
Precomputed<Scalar> Precomputed<Scalar>::with_delta(double delta) const {
  if (!(delta >= 0.0)) throw std::invalid_argument("with_delta: delta must be nonnegative");
  Precomputed out = *this;
  auto problem = std::make_shared<Problem<Scalar>>(*problem_);
  problem->delta = delta;
  out.problem_ = std::move(problem);
  return out;
}

double default_delta(double sigma, Index q) {
  return sigma * std::sqrt(2.0 * std::log(static_cast<double>(q)));
}

double step_ratio(double a_norm) { return kStepSafety / (a_norm * a_norm); }

template <SolverScalar Scalar>
double balanced_alpha(const Precomputed<Scalar>& pre) {
  const double peak = pre.gamma().size() > 0 ? pre.gamma().cwiseAbs().maxCoeff() : 0.0;
  if (peak == 0.0 || pre.a_norm() == 0.0) return 1.0;
  return pre.a_norm() / peak;
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::ResidualTolerance:
      return "residual_tolerance";
    case StopReason::SupportStationary:
      return "support_stationary";
    case StopReason::MaxIter:
      return "max_iter";
  }
  return "unknown";
}

template <SolverScalar Scalar>
Precomputed<Scalar> assemble(Problem<Scalar> problem, const AssemblyOptions& options) {
  check_problem(problem);
  const RealMat& x = problem.x.entries;
  const Dictionary& b = problem.dictionary;

  const Mat<Scalar> xb = sensing_times_dictionary<Scalar>(x, b);
  RealVec d = xb.colwise().norm().transpose();
  for (Index j = 0; j < d.size(); ++j) {
    if (d[j] <= kSingularColumn) {
      throw SingularNormalization("assemble: column " + std::to_string(j) +
                                  " of XB has zero norm; D is not invertible");
    }
  }

  Precomputed<Scalar> pre;
  const Vec<Scalar> xty = real_matvec<Scalar>(x, problem.y, true);
  pre.gamma_ = b.adjoint_apply<Scalar>(xty).cwiseQuotient(d.template cast<Scalar>());
  pre.d_ = std::move(d);
  pre.mode_ = options.mode;
  if (options.mode == ApplyMode::Dense) {
    // Symmetrized so that G* = G holds exactly and both products below can use the
    // row-oriented kernel, which scales far better than the column one for complex data.
    const Mat<Scalar> g = xb.adjoint() * xb;
    pre.gram_ = std::make_shared<const Mat<Scalar>>((g + g.adjoint()) * 0.5);
  }
  pre.problem_ = std::make_shared<const Problem<Scalar>>(std::move(problem));

  try {
    pre.a_norm_ = spectral_bound<Scalar>(pre.op(), options.spectral_tol, options.spectral_max_iters);
  } catch (const NoConvergence&) {
    // ‖A‖ <= ‖D⁻¹(XB)*‖_F ‖XB‖_F and every row of D⁻¹(XB)* has unit norm.
    pre.a_norm_ = std::sqrt(static_cast<double>(pre.size())) * xb.norm();
  }
  return pre;
}

template <SolverScalar Scalar>
void Precomputed<Scalar>::apply(const Vec<Scalar>& c, Vec<Scalar>& out) const {
  if (mode_ == ApplyMode::Dense) {
    out.noalias() = gram_->adjoint() * c;
    out.array() /= d_.template cast<Scalar>().array();
    return;
  }
  const RealMat& x = problem_->x.entries;
  const Vec<Scalar> signal = problem_->dictionary.template apply<Scalar>(c);
  Vec<Scalar> measured(x.rows());
  real_matvec<Scalar>(x, signal, measured);
  Vec<Scalar> back(x.cols());
  real_matvec<Scalar>(x, measured, back, true);
  out = problem_->dictionary.template adjoint_apply<Scalar>(back).cwiseQuotient(
      d_.template cast<Scalar>());
}

template <SolverScalar Scalar>
void Precomputed<Scalar>::adjoint_apply(const Vec<Scalar>& v, Vec<Scalar>& out) const {
  if (mode_ == ApplyMode::Dense) {
    const Vec<Scalar> scaled = v.cwiseQuotient(d_.template cast<Scalar>());
    out.noalias() = gram_->adjoint() * scaled;
    return;
  }
  const RealMat& x = problem_->x.entries;
  const Vec<Scalar> scaled = v.cwiseQuotient(d_.template cast<Scalar>());
  const Vec<Scalar> signal = problem_->dictionary.template apply<Scalar>(scaled);
  Vec<Scalar> measured(x.rows());
  real_matvec<Scalar>(x, signal, measured);
  Vec<Scalar> back(x.cols());
  real_matvec<Scalar>(x, measured, back, true);
  out = problem_->dictionary.template adjoint_apply<Scalar>(back);
}

template <SolverScalar Scalar>
LinearOperator<Scalar> Precomputed<Scalar>::op() const {
  // The copy shares the problem and the dense Gram matrix; both are immutable.
  auto self = std::make_shared<const Precomputed<Scalar>>(*this);
  return {size(), size(), [self](const Vec<Scalar>& c, Vec<Scalar>& out) { self->apply(c, out); },
          [self](const Vec<Scalar>& v, Vec<Scalar>& out) { self->adjoint_apply(v, out); }};
}

template <SolverScalar Scalar>
Mat<Scalar> Precomputed<Scalar>::dense() const {
  if (mode_ == ApplyMode::Dense) {
    return d_.cwiseInverse().template cast<Scalar>().asDiagonal() * (*gram_);
  }
  const Index q = size();
  Mat<Scalar> a(q, q);
  Vec<Scalar> unit = Vec<Scalar>::Zero(q);
  Vec<Scalar> col(q);
  for (Index j = 0; j < q; ++j) {
    unit[j] = Scalar(1);
    apply(unit, col);
    a.col(j) = col;
    unit[j] = Scalar(0);
  }
  return a;
}

template <SolverScalar Scalar>
SolverState<Scalar> SolverState<Scalar>::zero(Index q) {
  SolverState s;
  s.c = Vec<Scalar>::Zero(q);
  s.tau = Vec<Scalar>::Zero(q);
  s.tau_prev = Vec<Scalar>::Zero(q);
  s.image = Vec<Scalar>::Zero(q);
  return s;
}

template <SolverScalar Scalar>
bool step(SolverState<Scalar>& state, const Precomputed<Scalar>& pre, const SolverConfig& cfg) {
  const Index q = pre.size();
  if (state.c.size() != q || state.tau.size() != q || state.tau_prev.size() != q) {
    throw DimensionError("step: state does not match the problem size");
  }
  const double ratio = step_ratio(pre.a_norm());
  const double threshold = 1.0 / cfg.alpha;

  const Vec<Scalar> extrapolated = Scalar(2) * state.tau - state.tau_prev;
  Vec<Scalar> grad(q);
  pre.adjoint_apply(extrapolated, grad);
  Vec<Scalar> next = state.c - ratio * grad;

  bool changed = false;
  for (Index i = 0; i < q; ++i) {
    next[i] = soft_threshold(next[i], threshold);
    changed = changed || ((next[i] != Scalar(0)) != (state.c[i] != Scalar(0)));
  }

  pre.apply(next, state.image);
  Vec<Scalar> shifted = state.image + state.tau;
  const Vec<Scalar>& gamma = pre.gamma();
  for (Index i = 0; i < q; ++i) {
    shifted[i] -= project_disk(shifted[i], gamma[i], pre.delta());
  }

  state.tau_prev.swap(state.tau);
  state.tau.swap(shifted);
  state.c.swap(next);
  ++state.k;
  state.support_age = changed ? 0 : state.support_age + 1;
  return changed;
}

template <SolverScalar Scalar>
SolverState<Scalar> iterate(SolverState<Scalar> state, const Precomputed<Scalar>& pre,
                            const SolverConfig& cfg) {
  step(state, pre, cfg);
  return state;
}

template <SolverScalar Scalar>
double relative_residual(const SolverState<Scalar>& state, const Precomputed<Scalar>& pre) {
  const double gap = (state.image - pre.gamma()).cwiseAbs().maxCoeff();
  return gap / std::max(state.c.norm(), 1.0);
}

template <SolverScalar Scalar>
std::vector<Index> support_of(const Vec<Scalar>& c) {
  std::vector<Index> s;
  for (Index i = 0; i < c.size(); ++i) {
    if (c[i] != Scalar(0)) s.push_back(i);
  }
  return s;
}

template <SolverScalar Scalar>
Solution<Scalar> solve(const Precomputed<Scalar>& pre, const SolverConfig& cfg) {
  if (!(cfg.alpha > 0.0)) throw std::invalid_argument("solve: alpha must be positive");
  if (cfg.eta < 1) throw std::invalid_argument("solve: eta must be positive");
  if (cfg.max_iter < 1) throw std::invalid_argument("solve: max_iter must be positive");

  const auto start = std::chrono::steady_clock::now();
  const Index q = pre.size();
  Solution<Scalar> sol;
  SolverState<Scalar> state = SolverState<Scalar>::zero(q);

  if (cfg.trace != nullptr) *cfg.trace << "k,l1_norm,feasibility_gap,support_size\n";

  if (pre.a_norm() == 0.0) {
    // A = 0 forces γ = 0, and c = 0 is optimal.
    sol.stop_reason = StopReason::ResidualTolerance;
  } else {
    for (;;) {
      step(state, pre, cfg);
      const double residual = relative_residual(state, pre);
      const double gap = (state.image - pre.gamma()).cwiseAbs().maxCoeff();
      sol.residual = residual;
      if (cfg.trace != nullptr) {
        const auto supp = (state.c.array() != Scalar(0)).count();
        *cfg.trace << state.k << ',' << l1_norm(state.c) << ','
                   << std::max(gap - pre.delta(), 0.0) << ',' << supp << '\n';
      }
      if (residual <= cfg.epsilon) {
        sol.stop_reason = StopReason::ResidualTolerance;
        break;
      }
      // An empty support only counts as stationary once c = 0 is feasible; before the
      // dual variable has built up, c stays at zero for reasons unrelated to optimality.
      const bool empty = (state.c.array() == Scalar(0)).all();
      if (state.support_age >= cfg.eta && (!empty || gap <= pre.delta())) {
        sol.stop_reason = StopReason::SupportStationary;
        break;
      }
      if (state.k >= cfg.max_iter) {
        sol.stop_reason = StopReason::MaxIter;
        break;
      }
    }
  }

  sol.iterations = state.k;
  sol.support = support_of<Scalar>(state.c);
  const Problem<Scalar>& p = pre.problem();
  sol.c_hat = debias<Scalar>(state.c, p.x, p.dictionary, p.y);
  sol.c_raw = std::move(state.c);
  sol.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

template <SolverScalar Scalar>
Vec<Scalar> debias(const Vec<Scalar>& c_raw, const SensingMatrix& x, const Dictionary& b,
                   const Vec<Scalar>& y) {
  if (c_raw.size() != b.cols()) throw DimensionError("debias: coefficient length mismatch");
  if (y.size() != x.rows()) throw DimensionError("debias: observation length mismatch");
  Vec<Scalar> c_hat = Vec<Scalar>::Zero(c_raw.size());
  const std::vector<Index> support = support_of<Scalar>(c_raw);
  if (support.empty()) return c_hat;

  const Mat<Scalar> b_support = b.columns<Scalar>(support);
  const Mat<Scalar> xb = real_matmul<Scalar>(x.entries, b_support, false);
  const Mat<Scalar> normal = real_matmul<Scalar>(x.entries, xb, true);
  const Vec<Scalar> rhs = real_matvec<Scalar>(x.entries, y, true);

  Eigen::BDCSVD<Mat<Scalar>> svd(normal, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kSvdCutoff);
  const Vec<Scalar> coeffs = svd.solve(rhs);
  for (std::size_t i = 0; i < support.size(); ++i) {
    c_hat[support[i]] = coeffs[static_cast<Index>(i)];
  }
  return c_hat;
}

#define DANTZIG_INSTANTIATE(S)                                                                \
  template class Precomputed<S>;                                                              \
  template Precomputed<S> assemble<S>(Problem<S>, const AssemblyOptions&);                    \
  template struct SolverState<S>;                                                             \
  template bool step<S>(SolverState<S>&, const Precomputed<S>&, const SolverConfig&);         \
  template SolverState<S> iterate<S>(SolverState<S>, const Precomputed<S>&,                   \
                                     const SolverConfig&);                                    \
  template double balanced_alpha<S>(const Precomputed<S>&);                                   \
  template double relative_residual<S>(const SolverState<S>&, const Precomputed<S>&);         \
  template std::vector<Index> support_of<S>(const Vec<S>&);                                   \
  template Solution<S> solve<S>(const Precomputed<S>&, const SolverConfig&);                  \
  template Vec<S> debias<S>(const Vec<S>&, const SensingMatrix&, const Dictionary&,           \
                            const Vec<S>&);

DANTZIG_INSTANTIATE(double)
DANTZIG_INSTANTIATE(Complex)

#undef DANTZIG_INSTANTIATE

}  // namespace dantzig
