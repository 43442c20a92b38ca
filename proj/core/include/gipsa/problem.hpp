#pragma once

#include "gipsa/linalg.hpp"

namespace gipsa {

/// Composite objective F = f + g with f smooth (L-Lipschitz gradient) and g
/// proximable. Implementations are immutable once constructed.
class CompositeProblem {
 public:
  virtual ~CompositeProblem() = default;

  virtual Index dimension() const = 0;
  virtual double lipschitz() const = 0;

  virtual double eval_f(const Vector& x) const = 0;
  virtual Vector grad_f(const Vector& x) const = 0;
  virtual double eval_g(const Vector& x) const = 0;
  /// argmin_u 0.5 * |u - y|^2 + lambda * g(u)
  virtual Vector prox_g(const Vector& y, double lambda) const = 0;

  /// f(x) and grad f(x) together; overridden where the two share work.
  virtual double eval_f_and_grad(const Vector& x, Vector& grad) const {
    grad = grad_f(x);
    return eval_f(x);
  }

  double objective(const Vector& x) const { return eval_f(x) + eval_g(x); }
};

/// 0.5 * |Ax - b|^2 + rho * |x|_1 over dense A.
class LassoInstance final : public CompositeProblem {
 public:
  /// Computes L with estimate_lipschitz.
  LassoInstance(DenseMatrix A, Vector b, double rho);
  /// Uses a caller-provided Lipschitz constant (e.g. read from a cache).
  LassoInstance(DenseMatrix A, Vector b, double rho, double lipschitz);

  const DenseMatrix& A() const noexcept { return A_; }
  const Vector& b() const noexcept { return b_; }
  double rho() const noexcept { return rho_; }
  Index rows() const noexcept { return A_.rows(); }
  Index cols() const noexcept { return A_.cols(); }

  Index dimension() const override { return A_.cols(); }
  double lipschitz() const override { return lipschitz_; }
  double eval_f(const Vector& x) const override;
  Vector grad_f(const Vector& x) const override;
  double eval_g(const Vector& x) const override;
  Vector prox_g(const Vector& y, double lambda) const override;
  double eval_f_and_grad(const Vector& x, Vector& grad) const override;

 private:
  void check_dimension(const Vector& x) const;

  DenseMatrix A_;
  Vector b_;
  double rho_;
  double lipschitz_;
};

/// A^T (A x - b).
Vector lasso_gradient(const LassoInstance& inst, const Vector& x);

/// 0.5 * |b - A x|^2 + rho * |x|_1.
double lasso_objective(const LassoInstance& inst, const Vector& x);

inline constexpr double kLipschitzInflation = 1e-8;

/// Largest eigenvalue of A^T A by power iteration (relative tolerance 1e-10 on
/// the Rayleigh quotient, at most 10'000 sweeps). Never exceeds the true value
/// beyond roundoff.
double power_iteration_lambda_max(const DenseMatrix& A);

/// power_iteration_lambda_max(A) * (1 + 1e-8), so a stepsize of 1/L is safe
/// under floating point. Throws DegenerateMatrix for an all-zero A.
double estimate_lipschitz(const DenseMatrix& A);

/// max_i |(f(x + h e_i) - f(x - h e_i)) / 2h - grad_f(x)_i|; h in (0, 1e-3].
double gradient_finite_difference_check(const CompositeProblem& problem, const Vector& x,
                                        double h);

}  // namespace gipsa
