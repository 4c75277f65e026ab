#pragma once

#include "dantzig/types.hpp"

namespace dantzig {

/// prox of λ|·|: max(|u| - λ, 0)·u/|u|, with 0 ↦ 0.
template <typename Scalar>
Scalar soft_threshold(Scalar u, double lambda);

/// Euclidean projection of u onto the disk {v : |v - center| <= radius}.
template <typename Scalar>
Scalar project_disk(Scalar u, Scalar center, double radius);

/// Componentwise complex (or real) soft-thresholding.
template <typename Scalar>
Vec<Scalar> soft_threshold(const Vec<Scalar>& u, double lambda);

/// Componentwise projection onto the feasible box {v : ‖v - γ‖∞ <= δ}.
template <typename Scalar>
Vec<Scalar> project_feasible(const Vec<Scalar>& u, const Vec<Scalar>& gamma, double delta);

}  // namespace dantzig
