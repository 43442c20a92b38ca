#include "gipsa/oracle.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "gipsa/diagnostics.hpp"
#include "gipsa/solver.hpp"

namespace gipsa {

Vector refine_on_support(const LassoInstance& inst, const Vector& x) {
  std::vector<Index> support;
  for (Index i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) support.push_back(i);
  }
  Vector refined = Vector::Zero(x.size());
  if (support.empty()) {
    return refined;
  }
  const auto s = static_cast<Index>(support.size());
  Eigen::MatrixXd A_S(inst.rows(), s);
  Vector signs(s);
  for (Index j = 0; j < s; ++j) {
    A_S.col(j) = inst.A().col(support[static_cast<std::size_t>(j)]);
    signs[j] = sgn(x[support[static_cast<std::size_t>(j)]]);
  }
  const Eigen::MatrixXd gram = A_S.transpose() * A_S;
  const Vector rhs = A_S.transpose() * inst.b() - inst.rho() * signs;

  Vector u;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  const double diag_max = gram.diagonal().maxCoeff();
  const bool well_posed = ldlt.info() == Eigen::Success && ldlt.isPositive() &&
                          ldlt.vectorD().minCoeff() > 1e-12 * diag_max;
  if (well_posed) {
    u = ldlt.solve(rhs);
  } else {
    u = gram.completeOrthogonalDecomposition().solve(rhs);
  }
  for (Index j = 0; j < s; ++j) {
    refined[support[static_cast<std::size_t>(j)]] = u[j];
  }
  return refined;
}

namespace {

// Accepts the refined point only if it keeps the signs it was built from and
// lowers the residual.
bool try_refine(const LassoInstance& inst, double lambda, ReferenceSolution& ref) {
  const Vector refined = refine_on_support(inst, ref.x_star);
  if (!refined.allFinite()) return false;
  for (Index i = 0; i < refined.size(); ++i) {
    if (ref.x_star[i] != 0.0 && !(sgn(ref.x_star[i]) * refined[i] > 0.0)) return false;
  }
  const double refined_residual = fixed_point_residual(inst, refined, lambda);
  if (!(refined_residual < ref.residual)) return false;
  ref.x_star = refined;
  ref.residual = refined_residual;
  ref.support_refined = true;
  return true;
}

}  // namespace

ReferenceSolution high_accuracy_solve(const LassoInstance& inst, const OracleOptions& options) {
  const double lambda = 1.0 / inst.lipschitz();
  ReferenceSolution ref;
  ref.x_star = Vector::Zero(inst.cols());
  ref.residual = fixed_point_residual(inst, ref.x_star, lambda);

  // Phase 1 to the requested residual; if the support read off it cannot be
  // refined (not yet identified), continue from where it stopped with a
  // tighter target.
  double target = options.phase1_residual;
  std::int64_t budget = options.phase1_max_iterations;
  for (int attempt = 0; attempt < 3 && budget > 0; ++attempt, target *= 1e-2) {
    StoppingRule stop = StoppingRule::max_iters(budget);
    stop.with_fixed_point(target);
    const RunResult phase1 =
        run_with_restart(inst, FistaCd{options.fista_a, lambda}, ref.x_star, stop);
    ref.phase1_iterations += static_cast<std::int64_t>(phase1.records.size());
    budget -= static_cast<std::int64_t>(phase1.records.size());
    ref.x_star = phase1.final;
    ref.residual = fixed_point_residual(inst, ref.x_star, lambda);
    if (try_refine(inst, lambda, ref)) break;
  }

  ref.method = ref.support_refined ? "fista-cd-re+support-refinement" : "fista-cd-re";
  ref.F_star = lasso_objective(inst, ref.x_star);
  ref.converged = ref.residual <= options.phase1_residual;
  if (!ref.converged) {
    ref.method += " (low-accuracy: residual above target)";
  }
  return ref;
}

bool certify_optimality(const LassoInstance& inst, const Vector& x, double tol) {
  const Vector h = lasso_gradient(inst, x);
  for (Index i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) {
      if (std::abs(h[i] + inst.rho() * sgn(x[i])) > tol) return false;
    } else if (std::abs(h[i]) > inst.rho() + tol) {
      return false;
    }
  }
  return true;
}

}  // namespace gipsa
