#pragma once

#include <vector>

#include "gipsa/linalg.hpp"
#include "gipsa/problem.hpp"

namespace gipsa {

/// Signs in {+1, -1} attached to an increasing index set E.
class SignPattern {
 public:
  SignPattern() = default;
  /// Throws InvalidInput unless sizes agree, indices strictly increase and
  /// every sign is exactly +1 or -1.
  SignPattern(std::vector<Index> indices, std::vector<int> signs);
  /// Pattern over E = {0, ..., signs.size() - 1}.
  explicit SignPattern(std::vector<int> signs);

  const std::vector<Index>& indices() const noexcept { return indices_; }
  const std::vector<int>& signs() const noexcept { return signs_; }
  std::size_t size() const noexcept { return signs_.size(); }
  bool empty() const noexcept { return signs_.empty(); }

  friend bool operator==(const SignPattern&, const SignPattern&) = default;

 private:
  std::vector<Index> indices_;
  std::vector<int> signs_;
};

/// sgn(v) * max(|v| - nu, 0). |v| == nu yields exactly 0.
double soft_threshold_scalar(double v, double nu);

/// Coordinatewise soft_threshold_scalar; the prox of nu * |.|_1.
Vector prox_l1(const Vector& y, double nu);

/// T_lambda(x) = prox_{lambda g}(x - lambda grad f(x)); requires 0 < lambda < 2/L.
Vector forward_backward(const CompositeProblem& problem, const Vector& x, double lambda);

/// Projection onto {v : pattern_j * v_j >= 0}.
Vector project_orthant(const Vector& v_E, const SignPattern& pattern);

}  // namespace gipsa
