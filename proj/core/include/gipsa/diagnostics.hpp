#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gipsa/linalg.hpp"
#include "gipsa/problem.hpp"
#include "gipsa/prox.hpp"

namespace gipsa {

inline constexpr double kDefaultActiveSetTol = 1e-4;
inline constexpr double kDefaultStaleResidual = 1e-8;

/// Optimal-gradient structure read off a high-accuracy lasso solution.
struct ActiveSetEstimate {
  Vector h_star;                  // grad f(x*)
  std::vector<Index> E;           // {i : rho - |h*_i| <= tol_E}, increasing
  std::vector<Index> E_complement;
  SignPattern pattern;            // -sgn(h*_i) over E
  double omega = 0.0;             // min over E^c of rho - |h*_i|; +inf if E^c is empty
  double l_E = 0.0;               // smallest eigenvalue of A_E^T A_E
  double l_E_hat = 0.0;           // smallest eigenvalue on the range space
  double rho = 0.0;
  double tol_E = kDefaultActiveSetTol;

  /// Whether coordinate i lies in E.
  std::vector<bool> in_E;
};

/// Throws StaleSolution when the fixed-point residual of x_star at lambda = 1/L
/// exceeds stale_residual. With |E| = 0 both curvature values are 0.
ActiveSetEstimate estimate_active_set(const LassoInstance& inst, const Vector& x_star,
                                      double tol_E = kDefaultActiveSetTol,
                                      double stale_residual = kDefaultStaleResidual);

struct Signature {
  /// #{i in E^c : x_i != 0}
  std::int64_t support_outside_E = 0;
  /// #{i in E : sgn(y_i - lambda grad f(y)_i) != pattern_i}
  std::int64_t sign_mismatches_on_E = 0;

  bool identified() const noexcept { return support_outside_E == 0 && sign_mismatches_on_E == 0; }
};

/// Violation counts of the identification conditions at (x, y).
Signature signature(const LassoInstance& inst, const ActiveSetEstimate& est, const Vector& x,
                    const Vector& y, double lambda);

/// Same counts when the forward point y - lambda grad f(y) is already known.
Signature signature_from_forward(const ActiveSetEstimate& est, const Vector& x,
                                 const Vector& forward);

struct ManifoldEntry {
  std::int64_t k = 0;
  Signature counts;
};

struct ManifoldTrace {
  std::vector<ManifoldEntry> entries;

  void push(std::int64_t k, const Signature& s) { entries.push_back({k, s}); }
  std::int64_t total_sign_mismatches() const;
  std::int64_t total_support_outside() const;
};

/// 1 + (last k with a violation); 1 for a violation-free trace; nullopt if the
/// final entry still violates.
std::optional<std::int64_t> identification_iteration(const ManifoldTrace& trace);

/// grad phi(x_E) = -h*_E + (A^T (A (x_E, 0) - b))_E with h*_E = -rho * pattern
/// (the exact value of h* on E).
Vector reduced_gradient(const LassoInstance& inst, const ActiveSetEstimate& est,
                        const Vector& x_E);

/// phi(x_E) = -(h*_E)^T x_E + f((x_E, 0)).
double reduced_objective(const LassoInstance& inst, const ActiveSetEstimate& est,
                         const Vector& x_E);

inline constexpr double kReducedUpdateTol = 1e-10;

/// x_next_E == P_O(y_E - lambda grad phi(y_E)) coordinatewise within tol.
bool verify_reduced_update(const LassoInstance& inst, const ActiveSetEstimate& est,
                           const Vector& x_next_E, const Vector& y_E, double lambda,
                           double tol = kReducedUpdateTol);

/// |F(x) - phi(x_E)|.
double check_objective_equals_phi(const LassoInstance& inst, const ActiveSetEstimate& est,
                                  const Vector& x);

/// |x - T_lambda(x)|_inf for lambda in (0, 2/L).
double fixed_point_residual(const CompositeProblem& problem, const Vector& x, double lambda);

/// Restriction x_E in the order of est.E.
Vector restrict_to_E(const ActiveSetEstimate& est, const Vector& x);

struct RateWindow {
  std::size_t begin = 0;  // first index into the error sequence
  std::size_t end = 0;    // one past the last index
  std::size_t size() const noexcept { return end - begin; }
};

struct RateEstimate {
  double q_hat = 0.0;
  std::int64_t k_start = 0;
  std::int64_t k_end = 0;
  double fit_residual = 0.0;
  double predicted_q = 0.0;
  double F_rate_hat = 0.0;
};

inline constexpr std::size_t kMinRateWindow = 20;

/// Least-squares line through log(errors[window]); q_hat = exp(slope).
/// k_start / k_end are the window bounds as sequence indices. predicted_q and
/// F_rate_hat are left NaN for the caller to fill.
RateEstimate estimate_rate(std::span<const double> errors, RateWindow window);

/// Last 25% of the post-identification tail whose errors stay above
/// 100 * eps * scale; nullopt if fewer than kMinRateWindow points remain.
std::optional<RateWindow> select_rate_window(std::span<const double> errors,
                                             std::size_t identified_from, double scale);

}  // namespace gipsa
