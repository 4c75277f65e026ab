#include "dantzig/prox.hpp"

#include <cmath>
#include <stdexcept>

#include "dantzig/errors.hpp"

namespace dantzig {

template <typename Scalar>
Scalar soft_threshold(Scalar u, double lambda) {
  const double mag = std::abs(u);
  if (mag <= lambda) return Scalar(0);
  return u * ((mag - lambda) / mag);
}

template <typename Scalar>
Scalar project_disk(Scalar u, Scalar center, double radius) {
  const Scalar offset = u - center;
  const double dist = std::abs(offset);
  if (dist <= radius) return u;
  return center + offset * (radius / dist);
}

template <typename Scalar>
Vec<Scalar> soft_threshold(const Vec<Scalar>& u, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("soft_threshold: lambda must be positive");
  return u.unaryExpr([lambda](Scalar v) { return soft_threshold(v, lambda); });
}

template <typename Scalar>
Vec<Scalar> project_feasible(const Vec<Scalar>& u, const Vec<Scalar>& gamma, double delta) {
  if (u.size() != gamma.size()) throw DimensionError("project_feasible: length mismatch");
  if (!(delta >= 0.0)) throw std::invalid_argument("project_feasible: delta must be nonnegative");
  Vec<Scalar> out(u.size());
  for (Index i = 0; i < u.size(); ++i) out[i] = project_disk(u[i], gamma[i], delta);
  return out;
}

template double soft_threshold<double>(double, double);
template Complex soft_threshold<Complex>(Complex, double);
template double project_disk<double>(double, double, double);
template Complex project_disk<Complex>(Complex, Complex, double);
template RealVec soft_threshold<double>(const RealVec&, double);
template ComplexVec soft_threshold<Complex>(const ComplexVec&, double);
template RealVec project_feasible<double>(const RealVec&, const RealVec&, double);
template ComplexVec project_feasible<Complex>(const ComplexVec&, const ComplexVec&, double);

}  // namespace dantzig
