#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "gipsa/errors.hpp"
#include "gipsa/linalg.hpp"
#include "gipsa/problem.hpp"
#include "gipsa/schedules.hpp"

namespace gipsa {

struct SolverState {
  Vector x_curr;
  Vector x_prev;
  /// Completed steps.
  std::int64_t k = 0;
  /// Index fed to schedule_at for the next step; reset to 1 by a restart.
  std::int64_t schedule_k = 1;
  std::int64_t restarts = 0;
  double last_objective = 0.0;

  /// x_prev = x_curr = x0, k = 0, schedule_k = 1.
  static SolverState start(const CompositeProblem& problem, Vector x0);
};

/// Intermediate points of one step, exposed to trace sinks and diagnostics.
struct StepPoints {
  Vector y;         // x + beta * (x - x_prev)
  Vector z;         // x + alpha * (x - x_prev)
  Vector grad_z;    // grad f(z)
  Vector forward;   // y - lambda * grad f(z), the prox argument
};

/// Advances one iteration. Throws NumericalDivergence (iteration = state.k + 1)
/// on non-finite output.
SolverState gipsa_step(const CompositeProblem& problem, const SolverState& state,
                       const StepParams& params);

/// As gipsa_step, also filling the intermediate points.
SolverState gipsa_step(const CompositeProblem& problem, const SolverState& state,
                       const StepParams& params, StepPoints& points);

/// F(x_curr) + beta / (2 lambda) * |x_curr - x_prev|^2.
double lyapunov_energy(const CompositeProblem& problem, const SolverState& state,
                       const StepParams& params);

struct IterationRecord {
  std::int64_t k = 0;
  double objective = 0.0;
  double increment_norm_sq = 0.0;
  /// Parameters of the step that produced this iterate.
  double alpha = 0.0;
  double beta = 0.0;
  double lambda = 0.0;
  /// Energy of this iterate, using the parameters of the step that follows it.
  double lyapunov_energy = 0.0;
  bool restarted = false;
  /// |x - T_lambda(x)|_inf when a fixed-point stopping rule is active, else NaN.
  double fixed_point_residual = 0.0;
};

/// Read-only view handed to a trace sink after each iteration.
struct IterateView {
  const SolverState& state;
  const StepPoints& points;
  const StepParams& params;
};

using TraceSink = std::function<void(const IterationRecord&, const IterateView&)>;

/// Any-of combination of stopping criteria.
struct StoppingRule {
  std::optional<double> fixed_point_tol;
  std::optional<double> f_star;
  std::optional<double> relative_gap_tol;
  std::int64_t max_iterations = 50'000;

  static StoppingRule max_iters(std::int64_t k);
  StoppingRule& with_fixed_point(double tol);
  StoppingRule& with_relative_gap(double F_star, double tol);
};

enum class RunStatus { FixedPointReached, RelativeGapReached, MaxIterations };

const char* to_string(RunStatus status);

struct RunResult {
  Vector final;
  std::vector<IterationRecord> records;
  RunStatus status = RunStatus::MaxIterations;
  std::int64_t restarts = 0;
};

/// Raised when an iterate becomes non-finite or the objective exceeds 1e12
/// times its initial magnitude; carries the records produced so far.
class RunDiverged : public NumericalDivergence {
 public:
  RunDiverged(std::int64_t iteration, const std::string& what,
              std::vector<IterationRecord> partial);
  const std::vector<IterationRecord>& partial_records() const noexcept { return partial_; }

 private:
  std::vector<IterationRecord> partial_;
};

/// Iterates from x_prev = x_curr = x0 with schedule_at(spec, schedule_k)
/// until a stopping rule fires. Parameters are not validated here.
RunResult run(const CompositeProblem& problem, const ScheduleSpec& spec, const Vector& x0,
              const StoppingRule& stop, const TraceSink& trace = {});

/// FISTA-CD with objective restart: whenever a step would increase F, the step
/// is discarded, x_prev = x_curr = the pre-step iterate and the schedule
/// counter returns to 1. Equal objectives do not trigger a restart, and neither
/// does an increase on a step with zero inertia (it would simply repeat).
RunResult run_with_restart(const CompositeProblem& problem, const FistaCd& spec,
                           const Vector& x0, const StoppingRule& stop,
                           const TraceSink& trace = {});

}  // namespace gipsa
