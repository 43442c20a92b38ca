#include "gipsa/problem.hpp"

#include <algorithm>
#include <cmath>

#include "gipsa/errors.hpp"
#include "gipsa/prox.hpp"
#include "gipsa/rng.hpp"

namespace gipsa {

namespace {

void check_instance(const DenseMatrix& A, const Vector& b, double rho) {
  if (A.rows() < 1 || A.cols() < 1) {
    throw InvalidInput("LassoInstance: A must have at least one row and column");
  }
  if (b.size() != A.rows()) {
    throw InvalidInput("LassoInstance: b length must equal the row count of A");
  }
  if (!all_finite(A) || !all_finite(b)) {
    throw InvalidInput("LassoInstance: A and b must be finite");
  }
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw InvalidInput("LassoInstance: rho must be positive");
  }
}

}  // namespace

LassoInstance::LassoInstance(DenseMatrix A, Vector b, double rho)
    : A_(std::move(A)), b_(std::move(b)), rho_(rho), lipschitz_(0.0) {
  check_instance(A_, b_, rho_);
  lipschitz_ = estimate_lipschitz(A_);
}

LassoInstance::LassoInstance(DenseMatrix A, Vector b, double rho, double lipschitz)
    : A_(std::move(A)), b_(std::move(b)), rho_(rho), lipschitz_(lipschitz) {
  check_instance(A_, b_, rho_);
  if (!(lipschitz_ > 0.0) || !std::isfinite(lipschitz_)) {
    throw InvalidInput("LassoInstance: Lipschitz constant must be positive");
  }
}

void LassoInstance::check_dimension(const Vector& x) const {
  if (x.size() != A_.cols()) {
    throw InvalidInput("lasso: vector length " + std::to_string(x.size()) +
                       " does not match column count " + std::to_string(A_.cols()));
  }
}

double LassoInstance::eval_f(const Vector& x) const {
  check_dimension(x);
  return 0.5 * (A_ * x - b_).squaredNorm();
}

Vector LassoInstance::grad_f(const Vector& x) const {
  check_dimension(x);
  const Vector residual = A_ * x - b_;
  return A_.transpose() * residual;
}

double LassoInstance::eval_f_and_grad(const Vector& x, Vector& grad) const {
  check_dimension(x);
  const Vector residual = A_ * x - b_;
  grad.noalias() = A_.transpose() * residual;
  return 0.5 * residual.squaredNorm();
}

double LassoInstance::eval_g(const Vector& x) const {
  check_dimension(x);
  return rho_ * x.lpNorm<1>();
}

Vector LassoInstance::prox_g(const Vector& y, double lambda) const {
  check_dimension(y);
  return prox_l1(y, lambda * rho_);
}

Vector lasso_gradient(const LassoInstance& inst, const Vector& x) { return inst.grad_f(x); }

double lasso_objective(const LassoInstance& inst, const Vector& x) { return inst.objective(x); }

double power_iteration_lambda_max(const DenseMatrix& A) {
  if (A.rows() < 1 || A.cols() < 1) {
    throw InvalidInput("power iteration: empty matrix");
  }
  if (A.cwiseAbs().maxCoeff() == 0.0) {
    throw DegenerateMatrix("power iteration: all-zero matrix has no usable spectrum");
  }
  constexpr double kRelTol = 1e-10;
  constexpr int kMaxIter = 10'000;

  // Fixed pseudo-random start: deterministic, and almost surely not
  // orthogonal to the dominant eigenvector.
  CounterRng rng(0x4C495053ULL);
  Vector v(A.cols());
  for (Index i = 0; i < v.size(); ++i) {
    v[i] = rng.next_normal();
  }
  v.normalize();

  double estimate = 0.0;
  Vector w(A.cols());
  for (int iter = 0; iter < kMaxIter; ++iter) {
    const Vector Av = A * v;
    w.noalias() = A.transpose() * Av;
    const double rayleigh = Av.squaredNorm();  // v^T A^T A v with |v| = 1
    const double norm = w.norm();
    if (norm == 0.0) {
      // v landed in the null space; restart from a coordinate vector.
      v.setZero();
      v[iter % v.size()] = 1.0;
      continue;
    }
    v = w / norm;
    if (iter > 0 && std::abs(rayleigh - estimate) <= kRelTol * rayleigh) {
      estimate = rayleigh;
      break;
    }
    estimate = rayleigh;
  }
  // One last Rayleigh quotient at the final vector.
  return std::max(estimate, (A * v).squaredNorm());
}

double estimate_lipschitz(const DenseMatrix& A) {
  return power_iteration_lambda_max(A) * (1.0 + kLipschitzInflation);
}

double gradient_finite_difference_check(const CompositeProblem& problem, const Vector& x,
                                        double h) {
  if (!(h > 0.0 && h <= 1e-3)) {
    throw InvalidInput("finite-difference step must lie in (0, 1e-3]");
  }
  const Vector grad = problem.grad_f(x);
  double worst = 0.0;
  Vector probe = x;
  for (Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double forward = problem.eval_f(probe);
    probe[i] = x[i] - h;
    const double backward = problem.eval_f(probe);
    probe[i] = x[i];
    worst = std::max(worst, std::abs((forward - backward) / (2.0 * h) - grad[i]));
  }
  return worst;
}

}  // namespace gipsa
