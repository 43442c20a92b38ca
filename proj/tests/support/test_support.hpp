#pragma once

// Independent reference computations for tests. Nothing here calls the
// library's own estimators for the quantity being checked.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/SVD>

#include "gipsa/bench/generator.hpp"
#include "gipsa/linalg.hpp"
#include "gipsa/problem.hpp"

namespace gipsa::test {

inline DenseMatrix matrix(Index rows, Index cols, std::initializer_list<double> values) {
  DenseMatrix A(rows, cols);
  auto it = values.begin();
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) A(i, j) = *it++;
  }
  return A;
}

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (const double x : values) v[i++] = x;
  return v;
}

/// Largest eigenvalue of A^T A as the squared top singular value (Jacobi SVD).
inline double dense_lambda_max(const DenseMatrix& A) {
  const Eigen::MatrixXd M = A;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const double s = svd.singularValues()(0);
  return s * s;
}

inline double soft(double v, double nu) {
  const double mag = std::abs(v) - nu;
  if (mag <= 0.0) return 0.0;
  return v >= 0.0 ? mag : -mag;
}

/// Identity-matrix lasso: x* = S_rho(b), h* = x* - b.
inline Vector identity_lasso_solution(const Vector& b, double rho) {
  Vector x(b.size());
  for (Index i = 0; i < b.size(); ++i) x[i] = soft(b[i], rho);
  return x;
}

inline LassoInstance identity_instance(const Vector& b, double rho) {
  return LassoInstance(DenseMatrix::Identity(b.size(), b.size()), b, rho);
}

inline Vector random_vector(std::mt19937_64& rng, Index n, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

inline DenseMatrix random_matrix(std::mt19937_64& rng, Index m, Index n) {
  std::normal_distribution<double> d(0.0, 1.0);
  DenseMatrix A(m, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) A(i, j) = d(rng);
  }
  return A;
}

inline bench::GeneratedInstance desk_instance(std::uint64_t seed) {
  return bench::generate_instance(bench::GenSpec::desk(seed));
}

/// Small instance for quick property tests.
inline bench::GeneratedInstance small_instance(std::uint64_t seed) {
  bench::GenSpec spec;
  spec.n = 40;
  spec.m = 20;
  spec.nnz = 5;
  spec.seed = seed;
  return bench::generate_instance(spec);
}

}  // namespace gipsa::test

#include "gipsa/prox.hpp"

namespace gipsa::test {

struct LemmaCounts {
  std::int64_t checked = 0;
  std::int64_t violations = 0;
};

struct SoftThresholdLemmaResult {
  LemmaCounts nonexpansive;
  LemmaCounts sign_flip;
  LemmaCounts kill_margin;
};

/// Samples `samples` triples for each of the three contraction properties of
/// soft-thresholding, drawing until each property's premise holds.
inline SoftThresholdLemmaResult check_soft_threshold_lemma(std::int64_t samples,
                                                           std::uint64_t seed, double slack) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> val(-4.0, 4.0);
  std::uniform_real_distribution<double> thr(0.0, 2.0);
  auto S = [](double v, double nu) { return soft_threshold_scalar(v, nu); };
  SoftThresholdLemmaResult r;
  while (r.nonexpansive.checked < samples) {
    const double a = val(rng), b = val(rng), nu = thr(rng);
    ++r.nonexpansive.checked;
    if (std::abs(S(a, nu) - S(b, nu)) > std::abs(a - b) + slack) ++r.nonexpansive.violations;
  }
  while (r.sign_flip.checked < samples) {
    const double a = val(rng), b = val(rng), nu = thr(rng);
    if (!(std::abs(b) >= nu && sgn(a) != sgn(b))) continue;
    ++r.sign_flip.checked;
    if (std::abs(S(a, nu) - S(b, nu)) > std::abs(a - b) - nu + slack) ++r.sign_flip.violations;
  }
  while (r.kill_margin.checked < samples) {
    const double a = val(rng), b = val(rng), nu = thr(rng);
    if (!(S(a, nu) != 0.0 && S(b, nu) == 0.0)) continue;
    ++r.kill_margin.checked;
    if (std::abs(S(a, nu) - S(b, nu)) > std::abs(a - b) - (nu - std::abs(b)) + slack) {
      ++r.kill_margin.violations;
    }
  }
  return r;
}

}  // namespace gipsa::test
