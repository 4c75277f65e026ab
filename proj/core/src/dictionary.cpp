#include "dantzig/dictionary.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <istream>
#include <mutex>
#include <ostream>

#include <fftw3.h>

#include "dantzig/errors.hpp"
#include "dantzig/linalg.hpp"

namespace dantzig {

std::string to_string(BlockKind kind) {
  switch (kind) {
    case BlockKind::Identity:
      return "identity";
    case BlockKind::Dft:
      return "dft";
    case BlockKind::Dct:
      return "dct";
    case BlockKind::Haar:
      return "haar";
    case BlockKind::Learned:
      return "learned";
  }
  return "unknown";
}

namespace detail {

// FFTW planning is not thread-safe; execution through the new-array interface is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwPlans {
  fftw_plan synthesis = nullptr;
  fftw_plan analysis = nullptr;

  FftwPlans() = default;
  FftwPlans(const FftwPlans&) = delete;
  FftwPlans& operator=(const FftwPlans&) = delete;

  ~FftwPlans() {
    std::lock_guard lock(fftw_planner_mutex());
    if (synthesis != nullptr) fftw_destroy_plan(synthesis);
    if (analysis != nullptr) fftw_destroy_plan(analysis);
  }
};

namespace {

constexpr unsigned kPlanFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

std::shared_ptr<const FftwPlans> make_dft_plans(Index p) {
  auto plans = std::make_shared<FftwPlans>();
  std::lock_guard lock(fftw_planner_mutex());
  auto* buf = fftw_alloc_complex(static_cast<std::size_t>(p));
  const int n = static_cast<int>(p);
  plans->synthesis = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, kPlanFlags);
  plans->analysis = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, kPlanFlags);
  fftw_free(buf);
  return plans;
}

std::shared_ptr<const FftwPlans> make_dct_plans(Index p) {
  auto plans = std::make_shared<FftwPlans>();
  std::lock_guard lock(fftw_planner_mutex());
  auto* buf = fftw_alloc_real(static_cast<std::size_t>(p));
  const int n = static_cast<int>(p);
  plans->synthesis = fftw_plan_r2r_1d(n, buf, buf, FFTW_REDFT01, kPlanFlags);
  plans->analysis = fftw_plan_r2r_1d(n, buf, buf, FFTW_REDFT10, kPlanFlags);
  fftw_free(buf);
  return plans;
}

}  // namespace
}  // namespace detail

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void require_positive(Index p, const char* what) {
  if (p < 1) throw DimensionError(std::string(what) + ": size must be positive");
}

// Orthonormal DCT-II: analysis X_k = s_k Σ x_n cos(π(2n+1)k / 2N).
// FFTW's REDFT10 omits s_k and carries a factor 2; REDFT01 is its unnormalized inverse.
void dct_analysis(const detail::FftwPlans& plans, double* data, Index p) {
  fftw_execute_r2r(plans.analysis, data, data);
  const double s0 = std::sqrt(1.0 / static_cast<double>(p)) / 2.0;
  const double sk = std::sqrt(2.0 / static_cast<double>(p)) / 2.0;
  data[0] *= s0;
  for (Index k = 1; k < p; ++k) data[k] *= sk;
}

void dct_synthesis(const detail::FftwPlans& plans, double* data, Index p) {
  data[0] *= std::sqrt(1.0 / static_cast<double>(p));
  const double sk = std::sqrt(2.0 / static_cast<double>(p)) / 2.0;
  for (Index k = 1; k < p; ++k) data[k] *= sk;
  fftw_execute_r2r(plans.synthesis, data, data);
}

template <typename Scalar>
void haar_analysis(Eigen::Ref<Vec<Scalar>> data, int levels) {
  Vec<Scalar> scratch(data.size());
  Index len = data.size();
  for (int level = 0; level < levels; ++level) {
    const Index half = len / 2;
    for (Index i = 0; i < half; ++i) {
      const Scalar even = data[2 * i];
      const Scalar odd = data[2 * i + 1];
      scratch[i] = (even + odd) * kInvSqrt2;
      scratch[half + i] = (even - odd) * kInvSqrt2;
    }
    data.head(len) = scratch.head(len);
    len = half;
  }
}

template <typename Scalar>
void haar_synthesis(Eigen::Ref<Vec<Scalar>> data, int levels) {
  Vec<Scalar> scratch(data.size());
  Index len = data.size() >> (levels - 1);
  for (int level = 0; level < levels; ++level) {
    const Index half = len / 2;
    for (Index i = 0; i < half; ++i) {
      const Scalar approx = data[i];
      const Scalar detail = data[half + i];
      scratch[2 * i] = (approx + detail) * kInvSqrt2;
      scratch[2 * i + 1] = (approx - detail) * kInvSqrt2;
    }
    data.head(len) = scratch.head(len);
    len *= 2;
  }
}

template <typename Scalar, typename Fn>
void for_each_real_part(Eigen::Ref<Vec<Scalar>> data, Fn&& fn) {
  if constexpr (std::is_same_v<Scalar, double>) {
    fn(data.data());
  } else {
    RealVec part = data.real();
    fn(part.data());
    RealVec imag = data.imag();
    fn(imag.data());
    data.real() = part;
    data.imag() = imag;
  }
}

}  // namespace

TransformBlock TransformBlock::identity(Index p) {
  require_positive(p, "identity");
  return TransformBlock(BlockKind::Identity, p, p);
}

TransformBlock TransformBlock::dft(Index p) {
  require_positive(p, "dft");
  TransformBlock b(BlockKind::Dft, p, p);
  b.plans_ = detail::make_dft_plans(p);
  return b;
}

TransformBlock TransformBlock::dct(Index p) {
  require_positive(p, "dct");
  TransformBlock b(BlockKind::Dct, p, p);
  b.plans_ = detail::make_dct_plans(p);
  return b;
}

TransformBlock TransformBlock::haar(Index p, int levels) {
  require_positive(p, "haar");
  if (levels < 1) throw DimensionError("haar: levels must be positive");
  if (levels >= 62 || p % (Index{1} << levels) != 0) {
    throw DimensionError("haar: p = " + std::to_string(p) + " is not divisible by 2^" +
                         std::to_string(levels));
  }
  TransformBlock b(BlockKind::Haar, p, p);
  b.levels_ = levels;
  return b;
}

TransformBlock TransformBlock::learned(RealMat columns, double tol) {
  if (columns.rows() < 1 || columns.cols() < 1) {
    throw DimensionError("learned: block must be nonempty");
  }
  if (columns.cols() > columns.rows()) {
    throw DimensionError("learned: more columns than rows cannot be orthonormal");
  }
  const RealMat gram = columns.transpose() * columns;
  const double dev =
      (gram - RealMat::Identity(columns.cols(), columns.cols())).cwiseAbs().maxCoeff();
  if (dev > tol) {
    throw DimensionError("learned: columns are not orthonormal (deviation " +
                         std::to_string(dev) + ")");
  }
  TransformBlock b(BlockKind::Learned, columns.rows(), columns.cols());
  b.matrix_ = std::move(columns);
  return b;
}

template <typename Scalar>
void TransformBlock::apply(const Eigen::Ref<const Vec<Scalar>>& coeffs,
                           Eigen::Ref<Vec<Scalar>> out) const {
  if (coeffs.size() != cols_ || out.size() != rows_) {
    throw DimensionError("TransformBlock::apply: length mismatch");
  }
  switch (kind_) {
    case BlockKind::Identity:
      out = coeffs;
      return;
    case BlockKind::Dft:
      if constexpr (std::is_same_v<Scalar, double>) {
        throw DimensionError("TransformBlock::apply: DFT block needs a complex vector");
      } else {
        out = coeffs;
        auto* data = reinterpret_cast<fftw_complex*>(out.data());
        fftw_execute_dft(plans_->synthesis, data, data);
        out /= std::sqrt(static_cast<double>(rows_));
      }
      return;
    case BlockKind::Dct:
      out = coeffs;
      for_each_real_part<Scalar>(out, [&](double* d) { dct_synthesis(*plans_, d, rows_); });
      return;
    case BlockKind::Haar:
      out = coeffs;
      haar_synthesis<Scalar>(out, levels_);
      return;
    case BlockKind::Learned:
      real_matvec<Scalar>(matrix_, coeffs, out, false);
      return;
  }
}

template <typename Scalar>
void TransformBlock::adjoint_apply(const Eigen::Ref<const Vec<Scalar>>& signal,
                                   Eigen::Ref<Vec<Scalar>> out) const {
  if (signal.size() != rows_ || out.size() != cols_) {
    throw DimensionError("TransformBlock::adjoint_apply: length mismatch");
  }
  switch (kind_) {
    case BlockKind::Identity:
      out = signal;
      return;
    case BlockKind::Dft:
      if constexpr (std::is_same_v<Scalar, double>) {
        throw DimensionError("TransformBlock::adjoint_apply: DFT block needs a complex vector");
      } else {
        out = signal;
        auto* data = reinterpret_cast<fftw_complex*>(out.data());
        fftw_execute_dft(plans_->analysis, data, data);
        out /= std::sqrt(static_cast<double>(rows_));
      }
      return;
    case BlockKind::Dct:
      out = signal;
      for_each_real_part<Scalar>(out, [&](double* d) { dct_analysis(*plans_, d, rows_); });
      return;
    case BlockKind::Haar:
      out = signal;
      haar_analysis<Scalar>(out, levels_);
      return;
    case BlockKind::Learned:
      real_matvec<Scalar>(matrix_, signal, out, true);
      return;
  }
}

ComplexMat TransformBlock::materialize() const {
  ComplexMat m(rows_, cols_);
  ComplexVec unit = ComplexVec::Zero(cols_);
  for (Index j = 0; j < cols_; ++j) {
    unit[j] = 1.0;
    apply<Complex>(unit, m.col(j));
    unit[j] = 0.0;
  }
  return m;
}

template void TransformBlock::apply<double>(const Eigen::Ref<const RealVec>&,
                                            Eigen::Ref<RealVec>) const;
template void TransformBlock::apply<Complex>(const Eigen::Ref<const ComplexVec>&,
                                             Eigen::Ref<ComplexVec>) const;
template void TransformBlock::adjoint_apply<double>(const Eigen::Ref<const RealVec>&,
                                                    Eigen::Ref<RealVec>) const;
template void TransformBlock::adjoint_apply<Complex>(const Eigen::Ref<const ComplexVec>&,
                                                     Eigen::Ref<ComplexVec>) const;

Dictionary::Dictionary(std::vector<TransformBlock> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw DimensionError("Dictionary: needs at least one block");
  rows_ = blocks_.front().rows();
  for (const auto& b : blocks_) {
    if (b.rows() != rows_) {
      throw DimensionError("Dictionary: blocks have different row counts (" +
                           std::to_string(rows_) + " vs " + std::to_string(b.rows()) + ")");
    }
    offsets_.push_back(cols_);
    cols_ += b.cols();
    real_ = real_ && b.is_real();
  }
}

template <typename Scalar>
Vec<Scalar> Dictionary::apply(const Vec<Scalar>& coeffs) const {
  if (coeffs.size() != cols_) throw DimensionError("Dictionary::apply: length mismatch");
  Vec<Scalar> out = Vec<Scalar>::Zero(rows_);
  Vec<Scalar> part(rows_);
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    blocks_[i].apply<Scalar>(coeffs.segment(offsets_[i], blocks_[i].cols()), part);
    out += part;
  }
  return out;
}

template <typename Scalar>
Vec<Scalar> Dictionary::adjoint_apply(const Vec<Scalar>& signal) const {
  if (signal.size() != rows_) throw DimensionError("Dictionary::adjoint_apply: length mismatch");
  Vec<Scalar> out(cols_);
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    blocks_[i].adjoint_apply<Scalar>(signal, out.segment(offsets_[i], blocks_[i].cols()));
  }
  return out;
}

template <typename Scalar>
Vec<Scalar> Dictionary::component(const Vec<Scalar>& coeffs, std::size_t i) const {
  if (coeffs.size() != cols_) throw DimensionError("Dictionary::component: length mismatch");
  Vec<Scalar> out(rows_);
  blocks_.at(i).apply<Scalar>(coeffs.segment(offsets_[i], blocks_[i].cols()), out);
  return out;
}

template <typename Scalar>
Mat<Scalar> Dictionary::columns(const std::vector<Index>& indices) const {
  Mat<Scalar> out(rows_, static_cast<Index>(indices.size()));
  for (std::size_t c = 0; c < indices.size(); ++c) {
    const Index j = indices[c];
    if (j < 0 || j >= cols_) throw DimensionError("Dictionary::columns: index out of range");
    const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), j);
    const auto b = static_cast<std::size_t>(std::distance(offsets_.begin(), it) - 1);
    Vec<Scalar> unit = Vec<Scalar>::Zero(blocks_[b].cols());
    unit[j - offsets_[b]] = Scalar(1);
    blocks_[b].apply<Scalar>(unit, out.col(static_cast<Index>(c)));
  }
  return out;
}

ComplexMat Dictionary::materialize() const {
  ComplexMat m(rows_, cols_);
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    m.middleCols(offsets_[i], blocks_[i].cols()) = blocks_[i].materialize();
  }
  return m;
}

template RealVec Dictionary::apply<double>(const RealVec&) const;
template ComplexVec Dictionary::apply<Complex>(const ComplexVec&) const;
template RealVec Dictionary::adjoint_apply<double>(const RealVec&) const;
template ComplexVec Dictionary::adjoint_apply<Complex>(const ComplexVec&) const;
template RealVec Dictionary::component<double>(const RealVec&, std::size_t) const;
template ComplexVec Dictionary::component<Complex>(const ComplexVec&, std::size_t) const;
template RealMat Dictionary::columns<double>(const std::vector<Index>&) const;
template ComplexMat Dictionary::columns<Complex>(const std::vector<Index>&) const;

namespace {

void write_le32(std::ostream& out, std::uint32_t v) {
  const unsigned char bytes[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                  static_cast<unsigned char>(v >> 16),
                                  static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

void write_le64(std::ostream& out, std::uint64_t v) {
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

std::uint64_t read_le(std::istream& in, int width) {
  unsigned char bytes[8] = {};
  in.read(reinterpret_cast<char*>(bytes), width);
  if (!in) throw FormatError("materialized matrix: truncated input", 0);
  std::uint64_t v = 0;
  for (int i = width - 1; i >= 0; --i) v = (v << 8) | bytes[i];
  return v;
}

}  // namespace

void write_materialized(std::ostream& out, const ComplexMat& m) {
  write_le32(out, static_cast<std::uint32_t>(m.rows()));
  write_le32(out, static_cast<std::uint32_t>(m.cols()));
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      write_le64(out, std::bit_cast<std::uint64_t>(m(i, j).real()));
      write_le64(out, std::bit_cast<std::uint64_t>(m(i, j).imag()));
    }
  }
}

ComplexMat read_materialized(std::istream& in) {
  const auto rows = static_cast<Index>(read_le(in, 4));
  const auto cols = static_cast<Index>(read_le(in, 4));
  ComplexMat m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = std::bit_cast<double>(read_le(in, 8));
      const double im = std::bit_cast<double>(read_le(in, 8));
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

}  // namespace dantzig
