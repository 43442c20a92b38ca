#pragma once

#include <Eigen/Core>

namespace gipsa {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
// Row-major so the on-disk payload order matches memory order.
using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Sign with the convention sgn(0) = +1.
inline constexpr double sgn(double v) noexcept { return v >= 0.0 ? 1.0 : -1.0; }

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& v) {
  return v.allFinite();
}

}  // namespace gipsa
