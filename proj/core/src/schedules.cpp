#include "gipsa/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "gipsa/errors.hpp"

namespace gipsa {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr double kSlack = 1e-12;

void require_nonnegative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw InvalidInput(std::string("schedule: ") + what + " must be finite and nonnegative");
  }
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidInput(std::string("schedule: ") + what + " must be finite and positive");
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

void check_schedule(const ScheduleSpec& spec) {
  std::visit(overloaded{
                 [](const FixedGipsa& s) {
                   require_nonnegative(s.alpha, "alpha");
                   require_nonnegative(s.beta, "beta");
                   require_positive(s.lambda, "lambda");
                 },
                 [](const FixedIfbs& s) {
                   require_nonnegative(s.alpha, "alpha");
                   require_positive(s.lambda, "lambda");
                 },
                 [](const Fbs& s) { require_positive(s.lambda, "lambda"); },
                 [](const FistaCd& s) {
                   if (!(s.a > 2.0) || !std::isfinite(s.a)) {
                     throw InvalidInput("FISTA-CD requires a > 2");
                   }
                   require_positive(s.lambda, "lambda");
                 },
                 [](const ConstantMomentum& s) {
                   if (!(s.mu > 0.0) || !(s.lambda > 0.0)) {
                     throw InvalidInput("constant momentum requires mu > 0 and lambda > 0");
                   }
                   if (s.mu * s.lambda > 1.0) {
                     throw InvalidInput("constant momentum requires mu * lambda <= 1");
                   }
                 },
             },
             spec);
}

std::string describe(const ScheduleSpec& spec) {
  return std::visit(
      overloaded{
          [](const FixedGipsa& s) {
            return "GIPSA(alpha=" + fmt(s.alpha) + ",beta=" + fmt(s.beta) +
                   ",lambda=" + fmt(s.lambda) + ")";
          },
          [](const FixedIfbs& s) {
            return "I-FBS(alpha=" + fmt(s.alpha) + ",lambda=" + fmt(s.lambda) + ")";
          },
          [](const Fbs& s) { return "FBS(lambda=" + fmt(s.lambda) + ")"; },
          [](const FistaCd& s) {
            return "FISTA-CD(a=" + fmt(s.a) + ",lambda=" + fmt(s.lambda) + ")";
          },
          [](const ConstantMomentum& s) {
            return "ConstantMomentum(mu=" + fmt(s.mu) + ",lambda=" + fmt(s.lambda) + ")";
          },
      },
      spec);
}

StepParams schedule_at(const ScheduleSpec& spec, std::int64_t k) {
  if (k < 1) {
    throw InvalidInput("schedule_at: iteration index must be >= 1");
  }
  return std::visit(
      overloaded{
          [](const FixedGipsa& s) { return StepParams{s.alpha, s.beta, s.lambda}; },
          [](const FixedIfbs& s) { return StepParams{s.alpha, s.alpha, s.lambda}; },
          [](const Fbs& s) { return StepParams{0.0, 0.0, s.lambda}; },
          [k](const FistaCd& s) {
            const double inertia =
                static_cast<double>(k - 1) / (static_cast<double>(k) + s.a);
            return StepParams{inertia, inertia, s.lambda};
          },
          [](const ConstantMomentum& s) {
            const double inertia = optimal_inertia(s.mu, s.lambda);
            return StepParams{inertia, inertia, s.lambda};
          },
      },
      spec);
}

ValidationReport validate_gipsa(const ScheduleSpec& spec, double L, std::int64_t horizon) {
  if (!(L > 0.0)) {
    throw InvalidInput("validate_gipsa: L must be positive");
  }
  if (horizon < 2) {
    throw InvalidInput("validate_gipsa: horizon must be >= 2");
  }
  check_schedule(spec);

  constexpr double inf = std::numeric_limits<double>::infinity();
  double alpha_range = inf;
  double beta_min = inf;
  double beta_sup = -inf;
  double coupling = inf;
  double lambda_min = inf;
  double lambda_max = -inf;
  double lambda_step = inf;
  double epsilon = inf;

  auto absorb = [&](const StepParams& p, const StepParams& next) {
    alpha_range = std::min({alpha_range, p.alpha, 1.0 - p.alpha});
    beta_min = std::min(beta_min, p.beta);
    beta_sup = std::max(beta_sup, p.beta);
    coupling = std::min(coupling, p.beta - p.lambda * p.alpha * L);
    lambda_min = std::min(lambda_min, p.lambda);
    lambda_max = std::max(lambda_max, p.lambda);
    lambda_step = std::min(lambda_step, next.lambda - p.lambda);
    epsilon = std::min(epsilon, 2.0 - p.lambda * L * (1.0 - p.alpha) - p.beta - next.beta);
  };

  StepParams current = schedule_at(spec, 1);
  for (std::int64_t k = 1; k <= horizon; ++k) {
    const StepParams next = schedule_at(spec, k + 1);
    absorb(current, next);
    current = next;
  }

  ValidationReport report;
  if (const auto* fista = std::get_if<FistaCd>(&spec)) {
    // alpha_k = beta_k increase monotonically to 1, so every margin is
    // monotone in k and the infimum over all k is the limit value.
    const StepParams limit{1.0, 1.0, fista->lambda};
    absorb(limit, limit);
    report.covered_by_fista_cd_lemma = true;
    report.note =
        "not covered by the global convergence theorem (inertia tends to 1); "
        "iterate convergence follows from the FISTA-CD lemma";
  }

  report.epsilon_margin = epsilon;
  report.gamma_margin = 2.0 - lambda_max * L;
  report.per_condition = {
      {"alpha_in_unit_interval", alpha_range >= -kSlack, alpha_range},
      {"beta_nonnegative", beta_min >= -kSlack, beta_min},
      {"beta_bar_below_one", 1.0 - beta_sup > kSlack, 1.0 - beta_sup},
      {"lambda_alpha_le_beta_over_L", coupling >= -kSlack, coupling},
      {"lambda_positive", lambda_min > 0.0, lambda_min},
      {"lambda_nondecreasing", lambda_step >= -kSlack, lambda_step},
      {"gamma_stepsize", report.gamma_margin > 0.0, report.gamma_margin},
      {"epsilon_condition", epsilon > 0.0, epsilon},
  };
  report.satisfies_global_theorem =
      std::all_of(report.per_condition.begin(), report.per_condition.end(),
                  [](const ConditionResult& c) { return c.pass; });
  return report;
}

std::string to_json(const ValidationReport& report) {
  nlohmann::ordered_json doc;
  doc["satisfies_global_theorem"] = report.satisfies_global_theorem;
  doc["epsilon_margin"] = report.epsilon_margin;
  doc["gamma_margin"] = report.gamma_margin;
  doc["covered_by_fista_cd_lemma"] = report.covered_by_fista_cd_lemma;
  if (!report.note.empty()) {
    doc["note"] = report.note;
  }
  auto& conditions = doc["conditions"];
  conditions = nlohmann::ordered_json::object();
  for (const auto& c : report.per_condition) {
    conditions[c.name] = {{"pass", c.pass}, {"margin", c.worst_margin}};
  }
  return doc.dump(2);
}

double alpha_star_of_beta(double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw InvalidInput("alpha_star_of_beta: beta must lie in [0, 1)");
  }
  return beta / (2.0 - beta);
}

double max_stepsize_fixed(double alpha, double beta) {
  if (!(alpha >= 0.0 && alpha <= 1.0) || !(beta >= 0.0 && beta < 1.0)) {
    throw InvalidInput("max_stepsize_fixed: need alpha in [0, 1] and beta in [0, 1)");
  }
  if (alpha <= alpha_star_of_beta(beta)) {
    return 2.0 * (1.0 - beta) / (1.0 - alpha);
  }
  if (alpha == 0.0) {
    return beta == 0.0 ? std::numeric_limits<double>::infinity() : beta / alpha;
  }
  return beta / alpha;
}

double optimal_inertia(double mu, double lambda) {
  const double product = mu * lambda;
  if (!(mu > 0.0 && lambda > 0.0) || product > 1.0) {
    throw InvalidInput("optimal_inertia: need 0 < mu * lambda <= 1");
  }
  const double root = std::sqrt(product);
  return (1.0 - root) / (1.0 + root);
}

RatePrediction predicted_local_rate(double mu, double L, RateVariant variant) {
  if (!(mu > 0.0 && L > 0.0) || mu > L) {
    throw InvalidInput("predicted_local_rate: need 0 < mu <= L");
  }
  const double ratio = mu / L;
  switch (variant) {
    case RateVariant::ConstantMomentum:
      return {std::sqrt(1.0 - std::sqrt(ratio)), false};
    case RateVariant::Fbs:
      return {std::sqrt(1.0 - ratio), false};
    case RateVariant::FistaCd:
      return {std::sqrt(1.0 - ratio), true};
    case RateVariant::FistaCdRestart:
      return {std::sqrt(1.0 - std::sqrt(ratio)), true};
  }
  throw InvalidInput("predicted_local_rate: unknown variant");
}

}  // namespace gipsa
