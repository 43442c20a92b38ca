#include "gipsa/prox.hpp"

#include <cmath>
#include <numeric>

#include "gipsa/errors.hpp"

namespace gipsa {

SignPattern::SignPattern(std::vector<Index> indices, std::vector<int> signs)
    : indices_(std::move(indices)), signs_(std::move(signs)) {
  if (indices_.size() != signs_.size()) {
    throw InvalidInput("SignPattern: index and sign lists differ in length");
  }
  for (std::size_t j = 0; j < signs_.size(); ++j) {
    if (signs_[j] != 1 && signs_[j] != -1) {
      throw InvalidInput("SignPattern: signs must be +1 or -1");
    }
    if (indices_[j] < 0 || (j > 0 && indices_[j] <= indices_[j - 1])) {
      throw InvalidInput("SignPattern: indices must be nonnegative and strictly increasing");
    }
  }
}

SignPattern::SignPattern(std::vector<int> signs)
    : SignPattern(
          [&] {
            std::vector<Index> idx(signs.size());
            std::iota(idx.begin(), idx.end(), Index{0});
            return idx;
          }(),
          signs) {}

double soft_threshold_scalar(double v, double nu) {
  const double magnitude = std::abs(v) - nu;
  if (std::isnan(magnitude)) {
    return magnitude;  // keep divergence visible
  }
  if (!(magnitude > 0.0)) {
    return 0.0;
  }
  return sgn(v) * magnitude;
}

Vector prox_l1(const Vector& y, double nu) {
  if (nu < 0.0) {
    throw InvalidInput("prox_l1: threshold must be nonnegative");
  }
  return y.unaryExpr([nu](double v) { return soft_threshold_scalar(v, nu); });
}

Vector forward_backward(const CompositeProblem& problem, const Vector& x, double lambda) {
  if (!(lambda > 0.0 && lambda * problem.lipschitz() < 2.0)) {
    throw InvalidInput("forward_backward: stepsize must lie in (0, 2/L)");
  }
  if (x.size() != problem.dimension()) {
    throw InvalidInput("forward_backward: dimension mismatch");
  }
  return problem.prox_g(x - lambda * problem.grad_f(x), lambda);
}

Vector project_orthant(const Vector& v_E, const SignPattern& pattern) {
  if (static_cast<std::size_t>(v_E.size()) != pattern.size()) {
    throw InvalidInput("project_orthant: length mismatch");
  }
  Vector out(v_E.size());
  const auto& signs = pattern.signs();
  for (Index j = 0; j < v_E.size(); ++j) {
    out[j] = signs[static_cast<std::size_t>(j)] * v_E[j] >= 0.0 ? v_E[j] : 0.0;
  }
  return out;
}

}  // namespace gipsa
