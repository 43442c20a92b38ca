#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace gipsa {

// Parameter schedules. Stepsizes are absolute (not multiples of 1/L).

struct FixedGipsa {
  double alpha;
  double beta;
  double lambda;
};

/// alpha_k = beta_k = alpha (inertial forward-backward).
struct FixedIfbs {
  double alpha;
  double lambda;
};

/// No inertia.
struct Fbs {
  double lambda;
};

/// alpha_k = beta_k = (k - 1) / (k + a), a > 2.
struct FistaCd {
  double a;
  double lambda;
};

/// alpha_k = beta_k = (1 - sqrt(mu lambda)) / (1 + sqrt(mu lambda)).
struct ConstantMomentum {
  double mu;
  double lambda;
};

using ScheduleSpec = std::variant<FixedGipsa, FixedIfbs, Fbs, FistaCd, ConstantMomentum>;

struct StepParams {
  double alpha;
  double beta;
  double lambda;
};

/// Throws InvalidInput if the spec violates its own invariants (negative
/// entries, a <= 2 for FistaCd, mu * lambda outside (0, 1] for
/// ConstantMomentum).
void check_schedule(const ScheduleSpec& spec);

/// Human-readable label, e.g. "FISTA-CD(a=2.1)".
std::string describe(const ScheduleSpec& spec);

/// (alpha_k, beta_k, lambda_k) for iteration k >= 1.
StepParams schedule_at(const ScheduleSpec& spec, std::int64_t k);

struct ConditionResult {
  std::string name;
  bool pass;
  double worst_margin;
};

struct ValidationReport {
  bool satisfies_global_theorem = false;
  /// min_k 2 - lambda_k L (1 - alpha_k) - beta_k - beta_{k+1}
  double epsilon_margin = 0.0;
  /// 2 - max_k lambda_k L
  double gamma_margin = 0.0;
  std::vector<ConditionResult> per_condition;
  /// Set for FISTA-CD, whose convergence follows from its own lemma.
  bool covered_by_fista_cd_lemma = false;
  std::string note;
};

inline constexpr std::int64_t kDefaultValidationHorizon = 10'000;

/// Evaluates the global-convergence condition set for k = 1..horizon.
/// Non-strict inequalities are judged with 1e-12 slack; epsilon, gamma and
/// 1 - sup beta must be strictly positive.
ValidationReport validate_gipsa(const ScheduleSpec& spec, double L,
                                std::int64_t horizon = kDefaultValidationHorizon);

/// Serializes condition name -> {pass, margin} plus the summary fields.
std::string to_json(const ValidationReport& report);

/// beta / (2 - beta), the inertia maximizing the feasible stepsize range.
double alpha_star_of_beta(double beta);

/// Exclusive upper bound on lambda * L for fixed (alpha, beta).
/// Returns +infinity for alpha = beta = 0 in the beta/alpha branch (0/0).
double max_stepsize_fixed(double alpha, double beta);

/// (1 - sqrt(mu lambda)) / (1 + sqrt(mu lambda)); requires 0 < mu lambda <= 1.
double optimal_inertia(double mu, double lambda);

enum class RateVariant { ConstantMomentum, Fbs, FistaCd, FistaCdRestart };

struct RatePrediction {
  /// Predicted Q-rate of |x^k - x*|.
  double q;
  /// True where the prediction rests on the homogeneous approximation rather
  /// than a proven bound.
  bool approximation;
};

/// Local iterate-error rate at lambda = 1/L; requires 0 < mu <= L.
RatePrediction predicted_local_rate(double mu, double L, RateVariant variant);

}  // namespace gipsa
