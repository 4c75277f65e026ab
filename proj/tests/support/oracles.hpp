#pragma once

// Independent reference computations used by the unit and acceptance tests. Nothing here
// calls into the library's numerics: matrices come from closed-form entry formulas,
// proximity operators from direct minimization, and the Dantzig selector from an LP.

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using RealMat = Eigen::MatrixXd;
using RealVec = Eigen::VectorXd;
using ComplexMat = Eigen::MatrixXcd;

/// Entry (j, k) = p^(-1/2) exp(+2πi jk/p).
ComplexMat dft_matrix(int p);

/// Column k = s_k cos(π(2j+1)k / 2p), s_0 = sqrt(1/p), s_k = sqrt(2/p).
RealMat dct_matrix(int p);

/// Haar synthesis matrix built from box functions, columns [scaling, detail L, ..., detail 1],
/// detail functions positive on their first half.
RealMat haar_matrix(int p, int levels);

/// argmin_v |v - u|²/(2λ) + |v| by nested grid refinement.
Complex brute_soft_threshold(Complex u, double lambda);

/// argmin_v |v - u| subject to |v - center| <= radius: u itself when feasible, otherwise by
/// grid refinement over the angle on the boundary circle.
Complex brute_project_disk(Complex u, Complex center, double radius);

/// Largest singular value from a full SVD.
double spectral_norm(const ComplexMat& m);
double spectral_norm(const RealMat& m);

/// min cᵀx subject to Ax <= b, x >= 0, by the two-phase tableau simplex method with
/// Bland's rule. Returns nullopt if infeasible or unbounded.
std::optional<RealVec> simplex_leq(const RealVec& c, const RealMat& a, const RealVec& b);

/// Dantzig selector LP for the real normalized system: min ‖c‖₁ s.t. ‖Mc − γ‖∞ <= δ, with
/// c = u − v, u, v >= 0.
struct LpSolution {
  RealVec c;
  double l1 = 0.0;
};

std::optional<LpSolution> dantzig_lp(const RealMat& m, const RealVec& gamma, double delta);

/// Normalized real Dantzig system from dense X (n × p) and B (p × q): M = D⁻¹(XB)ᵀ(XB),
/// γ = D⁻¹(XB)ᵀy, d_j = ‖(XB)_j‖₂.
struct DenseSystem {
  RealMat m;
  RealVec gamma;
  RealVec d;
};

DenseSystem dense_system(const RealMat& x, const RealMat& b, const RealVec& y);

/// Indices with |c_j| > rel·‖c‖∞. An LP vertex carries O(δ) entries off the true support, so
/// supports are compared at this relative level rather than exactly.
std::vector<Eigen::Index> numerical_support(const RealVec& c, double rel = 1e-4);

}  // namespace oracle
