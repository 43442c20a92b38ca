#pragma once

#include <cstdint>
#include <string>

#include "gipsa/linalg.hpp"
#include "gipsa/problem.hpp"

namespace gipsa {

struct ReferenceSolution {
  Vector x_star;
  double F_star = 0.0;
  /// |x* - T_{1/L}(x*)|_inf
  double residual = 0.0;
  /// e.g. "fista-cd-re+support-refinement"
  std::string method;
  bool support_refined = false;
  /// False when phase 1 stopped on its iteration cap above the residual target.
  bool converged = true;
  std::int64_t phase1_iterations = 0;
};

struct OracleOptions {
  double phase1_residual = 1e-9;
  std::int64_t phase1_max_iterations = 1'000'000;
  double fista_a = 2.1;
};

/// Two-phase reference solve: FISTA-CD with objective restart down to a
/// fixed-point residual of 1e-9, then an exact solve of the normal equations
/// on the identified support and sign, kept only if it lowers the residual.
ReferenceSolution high_accuracy_solve(const LassoInstance& inst, const OracleOptions& options = {});

/// Subgradient optimality test with h = A^T (A x - b):
/// x_i != 0 -> |h_i + rho sgn(x_i)| <= tol, x_i == 0 -> |h_i| <= rho + tol.
bool certify_optimality(const LassoInstance& inst, const Vector& x, double tol);

/// Solves A_S^T A_S u = A_S^T b - rho * s on the support S of x with signs s.
/// Minimum-norm least squares when the Gram matrix is singular. Returns the
/// full-length point (zeros off S).
Vector refine_on_support(const LassoInstance& inst, const Vector& x);

}  // namespace gipsa
