#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "dantzig/types.hpp"

namespace dantzig {

enum class BlockKind { Identity, Dft, Dct, Haar, Learned };

std::string to_string(BlockKind kind);

namespace detail {
struct FftwPlans;
}

/// One orthonormal (or column-orthonormal) synthesis block Φ of a dictionary.
///
/// Blocks are immutable and cheap to copy; fast transforms share their FFTW plans.
/// `apply` computes Φc, `adjoint_apply` computes Φ*v. Real-valued blocks accept both
/// real and complex vectors, the DFT block only complex ones.
class TransformBlock {
 public:
  static TransformBlock identity(Index p);

  /// Unitary DFT synthesis matrix, entry (j, k) = p^(-1/2) exp(+2πi jk/p).
  static TransformBlock dft(Index p);

  /// Orthonormal DCT-II synthesis matrix (columns are the DCT-II basis vectors).
  static TransformBlock dct(Index p);

  /// Orthonormal Haar synthesis matrix of depth `levels`. Coefficients are ordered
  /// [scaling, detail level L, ..., detail level 1]. Requires p % 2^levels == 0.
  static TransformBlock haar(Index p, int levels);

  /// Column-orthonormal learned block; throws DimensionError if U*U deviates from the
  /// identity by more than `tol` in max norm.
  static TransformBlock learned(RealMat columns, double tol = 1e-8);

  BlockKind kind() const noexcept { return kind_; }
  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  int levels() const noexcept { return levels_; }
  bool is_real() const noexcept { return kind_ != BlockKind::Dft; }

  /// Dense matrix of a learned block; empty for the fast kinds.
  const RealMat& matrix() const noexcept { return matrix_; }

  template <typename Scalar>
  void apply(const Eigen::Ref<const Vec<Scalar>>& coeffs, Eigen::Ref<Vec<Scalar>> out) const;

  template <typename Scalar>
  void adjoint_apply(const Eigen::Ref<const Vec<Scalar>>& signal,
                     Eigen::Ref<Vec<Scalar>> out) const;

  ComplexMat materialize() const;

 private:
  TransformBlock(BlockKind kind, Index rows, Index cols) : kind_(kind), rows_(rows), cols_(cols) {}

  BlockKind kind_;
  Index rows_;
  Index cols_;
  int levels_ = 0;
  RealMat matrix_;
  std::shared_ptr<const detail::FftwPlans> plans_;
};

/// Horizontal concatenation B = [Φ_1 Φ_2 ...] of blocks with a common row count p.
class Dictionary {
 public:
  /// Throws DimensionError on an empty list or mismatched row counts.
  explicit Dictionary(std::vector<TransformBlock> blocks);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  bool is_real() const noexcept { return real_; }

  const std::vector<TransformBlock>& blocks() const noexcept { return blocks_; }
  const TransformBlock& block(std::size_t i) const { return blocks_.at(i); }

  /// Column offset of block i inside the coefficient vector.
  Index offset(std::size_t i) const { return offsets_.at(i); }

  template <typename Scalar>
  Vec<Scalar> apply(const Vec<Scalar>& coeffs) const;

  template <typename Scalar>
  Vec<Scalar> adjoint_apply(const Vec<Scalar>& signal) const;

  /// Φ_i c_i for block i alone (the component that block contributes to Bc).
  template <typename Scalar>
  Vec<Scalar> component(const Vec<Scalar>& coeffs, std::size_t i) const;

  /// Columns B_j for j in `indices`, as a p x |indices| matrix.
  template <typename Scalar>
  Mat<Scalar> columns(const std::vector<Index>& indices) const;

  ComplexMat materialize() const;

 private:
  std::vector<TransformBlock> blocks_;
  std::vector<Index> offsets_;
  Index rows_ = 0;
  Index cols_ = 0;
  bool real_ = true;
};

/// Writes a dense matrix as: int32 LE rows, int32 LE cols, then column-major
/// (real, imag) float64 LE pairs.
void write_materialized(std::ostream& out, const ComplexMat& m);
ComplexMat read_materialized(std::istream& in);

}  // namespace dantzig
