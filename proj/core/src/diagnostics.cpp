#include "gipsa/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "gipsa/errors.hpp"

namespace gipsa {

namespace {

DenseMatrix columns(const DenseMatrix& A, const std::vector<Index>& idx) {
  DenseMatrix out(A.rows(), static_cast<Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) {
    out.col(static_cast<Index>(j)) = A.col(idx[j]);
  }
  return out;
}

// (x_E, 0) embedded back into R^n.
Vector embed(const LassoInstance& inst, const ActiveSetEstimate& est, const Vector& x_E) {
  if (static_cast<std::size_t>(x_E.size()) != est.E.size()) {
    throw InvalidInput("reduced model: vector length does not match |E|");
  }
  Vector x = Vector::Zero(inst.cols());
  for (std::size_t j = 0; j < est.E.size(); ++j) {
    x[est.E[j]] = x_E[static_cast<Index>(j)];
  }
  return x;
}

// h*_E snapped to its exact value -rho * pattern.
Vector snapped_h_E(const ActiveSetEstimate& est) {
  Vector h(static_cast<Index>(est.E.size()));
  const auto& signs = est.pattern.signs();
  for (std::size_t j = 0; j < signs.size(); ++j) {
    h[static_cast<Index>(j)] = -est.rho * signs[j];
  }
  return h;
}

}  // namespace

ActiveSetEstimate estimate_active_set(const LassoInstance& inst, const Vector& x_star,
                                      double tol_E, double stale_residual) {
  if (x_star.size() != inst.cols()) {
    throw InvalidInput("estimate_active_set: x_star has the wrong dimension");
  }
  if (!(tol_E > 0.0)) {
    throw InvalidInput("estimate_active_set: tol_E must be positive");
  }
  const double residual = fixed_point_residual(inst, x_star, 1.0 / inst.lipschitz());
  if (residual > stale_residual) {
    throw StaleSolution("estimate_active_set: fixed-point residual " + std::to_string(residual) +
                        " exceeds " + std::to_string(stale_residual));
  }

  ActiveSetEstimate est;
  est.rho = inst.rho();
  est.tol_E = tol_E;
  est.h_star = lasso_gradient(inst, x_star);
  est.in_E.assign(static_cast<std::size_t>(inst.cols()), false);
  est.omega = std::numeric_limits<double>::infinity();

  std::vector<int> signs;
  for (Index i = 0; i < inst.cols(); ++i) {
    const double gap = inst.rho() - std::abs(est.h_star[i]);
    if (gap <= tol_E) {
      est.E.push_back(i);
      est.in_E[static_cast<std::size_t>(i)] = true;
      signs.push_back(-static_cast<int>(sgn(est.h_star[i])));
    } else {
      est.E_complement.push_back(i);
      est.omega = std::min(est.omega, gap);
    }
  }
  est.pattern = SignPattern(est.E, std::move(signs));

  if (!est.E.empty()) {
    const DenseMatrix A_E = columns(inst.A(), est.E);
    const Eigen::MatrixXd gram = A_E.transpose() * A_E;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& values = solver.eigenvalues();  // ascending
    const double largest = values[values.size() - 1];
    est.l_E = std::max(values[0], 0.0);
    const double rank_tol = 1e-10 * largest;
    est.l_E_hat = 0.0;
    for (Index j = 0; j < values.size(); ++j) {
      if (values[j] > rank_tol) {
        est.l_E_hat = values[j];
        break;
      }
    }
  }
  return est;
}

Signature signature_from_forward(const ActiveSetEstimate& est, const Vector& x,
                                 const Vector& forward) {
  Signature s;
  for (Index i : est.E_complement) {
    if (x[i] != 0.0) {
      ++s.support_outside_E;
    }
  }
  const auto& signs = est.pattern.signs();
  for (std::size_t j = 0; j < est.E.size(); ++j) {
    if (static_cast<int>(sgn(forward[est.E[j]])) != signs[j]) {
      ++s.sign_mismatches_on_E;
    }
  }
  return s;
}

Signature signature(const LassoInstance& inst, const ActiveSetEstimate& est, const Vector& x,
                    const Vector& y, double lambda) {
  if (x.size() != inst.cols() || y.size() != inst.cols()) {
    throw InvalidInput("signature: dimension mismatch");
  }
  const Vector forward = y - lambda * lasso_gradient(inst, y);
  return signature_from_forward(est, x, forward);
}

std::int64_t ManifoldTrace::total_sign_mismatches() const {
  std::int64_t total = 0;
  for (const auto& e : entries) total += e.counts.sign_mismatches_on_E;
  return total;
}

std::int64_t ManifoldTrace::total_support_outside() const {
  std::int64_t total = 0;
  for (const auto& e : entries) total += e.counts.support_outside_E;
  return total;
}

std::optional<std::int64_t> identification_iteration(const ManifoldTrace& trace) {
  if (trace.entries.empty()) {
    return 1;
  }
  if (!trace.entries.back().counts.identified()) {
    return std::nullopt;
  }
  std::int64_t last_violation = 0;
  for (auto it = trace.entries.rbegin(); it != trace.entries.rend(); ++it) {
    if (!it->counts.identified()) {
      last_violation = it->k;
      break;
    }
  }
  return last_violation + 1;
}

Vector restrict_to_E(const ActiveSetEstimate& est, const Vector& x) {
  Vector out(static_cast<Index>(est.E.size()));
  for (std::size_t j = 0; j < est.E.size(); ++j) {
    out[static_cast<Index>(j)] = x[est.E[j]];
  }
  return out;
}

Vector reduced_gradient(const LassoInstance& inst, const ActiveSetEstimate& est,
                        const Vector& x_E) {
  const Vector full_grad = lasso_gradient(inst, embed(inst, est, x_E));
  return restrict_to_E(est, full_grad) - snapped_h_E(est);
}

double reduced_objective(const LassoInstance& inst, const ActiveSetEstimate& est,
                         const Vector& x_E) {
  return -snapped_h_E(est).dot(x_E) + inst.eval_f(embed(inst, est, x_E));
}

bool verify_reduced_update(const LassoInstance& inst, const ActiveSetEstimate& est,
                           const Vector& x_next_E, const Vector& y_E, double lambda,
                           double tol) {
  if (x_next_E.size() != y_E.size()) {
    throw InvalidInput("verify_reduced_update: length mismatch");
  }
  const Vector expected =
      project_orthant(y_E - lambda * reduced_gradient(inst, est, y_E), est.pattern);
  return ((expected - x_next_E).cwiseAbs().array() <= tol).all();
}

double check_objective_equals_phi(const LassoInstance& inst, const ActiveSetEstimate& est,
                                  const Vector& x) {
  if (x.size() != inst.cols()) {
    throw InvalidInput("check_objective_equals_phi: dimension mismatch");
  }
  return std::abs(lasso_objective(inst, x) - reduced_objective(inst, est, restrict_to_E(est, x)));
}

double fixed_point_residual(const CompositeProblem& problem, const Vector& x, double lambda) {
  return (x - forward_backward(problem, x, lambda)).lpNorm<Eigen::Infinity>();
}

RateEstimate estimate_rate(std::span<const double> errors, RateWindow window) {
  if (window.end > errors.size() || window.begin >= window.end) {
    throw InvalidInput("estimate_rate: window out of range");
  }
  if (window.size() < kMinRateWindow) {
    throw InvalidInput("estimate_rate: window must hold at least 20 points");
  }
  const auto n = static_cast<double>(window.size());
  double mean_t = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = window.begin; i < window.end; ++i) {
    if (!(errors[i] > 0.0)) {
      throw InvalidInput("estimate_rate: errors must be positive");
    }
    mean_t += static_cast<double>(i);
    mean_y += std::log(errors[i]);
  }
  mean_t /= n;
  mean_y /= n;
  double stt = 0.0;
  double sty = 0.0;
  for (std::size_t i = window.begin; i < window.end; ++i) {
    const double dt = static_cast<double>(i) - mean_t;
    stt += dt * dt;
    sty += dt * (std::log(errors[i]) - mean_y);
  }
  const double slope = sty / stt;
  double worst = 0.0;
  for (std::size_t i = window.begin; i < window.end; ++i) {
    const double fit = mean_y + slope * (static_cast<double>(i) - mean_t);
    worst = std::max(worst, std::abs(std::log(errors[i]) - fit));
  }
  RateEstimate est;
  est.q_hat = std::exp(slope);
  est.k_start = static_cast<std::int64_t>(window.begin);
  est.k_end = static_cast<std::int64_t>(window.end - 1);
  est.fit_residual = worst;
  est.predicted_q = std::numeric_limits<double>::quiet_NaN();
  est.F_rate_hat = std::numeric_limits<double>::quiet_NaN();
  return est;
}

std::optional<RateWindow> select_rate_window(std::span<const double> errors,
                                             std::size_t identified_from, double scale) {
  if (identified_from >= errors.size()) {
    return std::nullopt;
  }
  const double floor = 1e2 * std::numeric_limits<double>::epsilon() * std::max(scale, 1.0);
  std::size_t end = identified_from;
  for (std::size_t i = errors.size(); i > identified_from; --i) {
    if (errors[i - 1] > floor) {
      end = i;
      break;
    }
  }
  const std::size_t usable = end - identified_from;
  if (usable < kMinRateWindow) {
    return std::nullopt;
  }
  const std::size_t length = std::max(usable / 4, kMinRateWindow);
  return RateWindow{end - length, end};
}

}  // namespace gipsa
