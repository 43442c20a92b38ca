#include "gipsa/solver.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "gipsa/prox.hpp"

namespace gipsa {

SolverState SolverState::start(const CompositeProblem& problem, Vector x0) {
  if (x0.size() != problem.dimension()) {
    throw InvalidInput("solver: x0 has the wrong dimension");
  }
  if (!all_finite(x0)) {
    throw InvalidInput("solver: x0 must be finite");
  }
  SolverState state;
  state.last_objective = problem.objective(x0);
  state.x_prev = x0;
  state.x_curr = std::move(x0);
  return state;
}

namespace {

// The step without any objective evaluation; last_objective is left stale.
SolverState advance(const CompositeProblem& problem, const SolverState& state,
                    const StepParams& params, StepPoints& points) {
  if (!(params.lambda > 0.0)) {
    throw InvalidInput("gipsa_step: stepsize must be positive");
  }
  if (state.x_curr.size() != problem.dimension() ||
      state.x_prev.size() != state.x_curr.size()) {
    throw InvalidInput("gipsa_step: state dimension mismatch");
  }
  const Vector increment = state.x_curr - state.x_prev;
  points.y = state.x_curr + params.beta * increment;
  if (params.alpha == params.beta) {
    points.z = points.y;
  } else {
    points.z = state.x_curr + params.alpha * increment;
  }
  points.grad_z = problem.grad_f(points.z);
  points.forward = points.y - params.lambda * points.grad_z;

  SolverState next;
  next.x_curr = problem.prox_g(points.forward, params.lambda);
  if (!all_finite(next.x_curr)) {
    throw NumericalDivergence(state.k + 1, "non-finite iterate");
  }
  next.x_prev = state.x_curr;
  next.k = state.k + 1;
  next.schedule_k = state.schedule_k + 1;
  next.restarts = state.restarts;
  next.last_objective = state.last_objective;
  return next;
}

// |x - prox(x - lambda grad, lambda)|_inf, without the (0, 2/L) range check so
// it can be reported for deliberately unstable schedules too.
double residual_from_gradient(const CompositeProblem& problem, const Vector& x,
                              const Vector& grad, double lambda) {
  return (x - problem.prox_g(x - lambda * grad, lambda)).lpNorm<Eigen::Infinity>();
}

RunResult run_impl(const CompositeProblem& problem, const ScheduleSpec& spec, const Vector& x0,
                   const StoppingRule& stop, const TraceSink& trace, bool restart) {
  if (stop.max_iterations < 1) {
    throw InvalidInput("stopping rule: max_iterations must be >= 1");
  }
  check_schedule(spec);
  SolverState state = SolverState::start(problem, x0);
  const double initial_objective = state.last_objective;
  const double blowup = 1e12 * std::abs(initial_objective);

  RunResult result;
  result.records.reserve(static_cast<std::size_t>(std::min<std::int64_t>(stop.max_iterations, 100'000)));
  StepPoints points;
  Vector grad_x(problem.dimension());
  const bool want_residual = stop.fixed_point_tol.has_value();
  double current_residual = std::numeric_limits<double>::quiet_NaN();

  while (true) {
    if (state.k >= stop.max_iterations) {
      result.status = RunStatus::MaxIterations;
      break;
    }
    const StepParams params = schedule_at(spec, state.schedule_k);
    SolverState candidate;
    try {
      candidate = advance(problem, state, params, points);
    } catch (const NumericalDivergence& e) {
      throw RunDiverged(e.iteration(), "non-finite iterate", std::move(result.records));
    }

    double objective = 0.0;
    double residual = std::numeric_limits<double>::quiet_NaN();
    if (want_residual) {
      objective = problem.eval_f_and_grad(candidate.x_curr, grad_x) +
                  problem.eval_g(candidate.x_curr);
      residual = residual_from_gradient(problem, candidate.x_curr, grad_x, params.lambda);
    } else {
      objective = problem.objective(candidate.x_curr);
    }
    if (!std::isfinite(objective) || (blowup > 0.0 && objective > blowup)) {
      throw RunDiverged(candidate.k, "objective exploded to " + std::to_string(objective),
                        std::move(result.records));
    }

    IterationRecord record;
    record.k = candidate.k;
    record.alpha = params.alpha;
    record.beta = params.beta;
    record.lambda = params.lambda;

    // A momentum-free step would be recomputed identically after a restart, so
    // an increase there (roundoff near the solution) is accepted.
    const bool inertial = params.alpha != 0.0 || params.beta != 0.0;
    if (restart && inertial && objective > state.last_objective) {
      // Discard the increasing step and restart the inertia at x^k.
      SolverState restarted = std::move(state);
      restarted.x_prev = restarted.x_curr;
      restarted.k = candidate.k;
      restarted.schedule_k = 1;
      restarted.restarts += 1;
      state = std::move(restarted);
      record.objective = state.last_objective;
      record.increment_norm_sq = 0.0;
      record.restarted = true;
      record.fixed_point_residual = current_residual;
    } else {
      candidate.last_objective = objective;
      state = std::move(candidate);
      record.objective = objective;
      record.increment_norm_sq = (state.x_curr - state.x_prev).squaredNorm();
      current_residual = residual;
      record.fixed_point_residual = residual;
    }
    const StepParams following = schedule_at(spec, state.schedule_k);
    record.lyapunov_energy =
        record.objective + following.beta / (2.0 * following.lambda) * record.increment_norm_sq;

    result.records.push_back(record);
    if (trace) {
      trace(record, IterateView{state, points, params});
    }

    if (want_residual && record.fixed_point_residual <= *stop.fixed_point_tol) {
      result.status = RunStatus::FixedPointReached;
      break;
    }
    if (stop.relative_gap_tol && stop.f_star) {
      const double scale = *stop.f_star != 0.0 ? std::abs(*stop.f_star) : 1.0;
      if ((record.objective - *stop.f_star) / scale <= *stop.relative_gap_tol) {
        result.status = RunStatus::RelativeGapReached;
        break;
      }
    }
  }
  result.restarts = state.restarts;
  result.final = std::move(state.x_curr);
  return result;
}

}  // namespace

SolverState gipsa_step(const CompositeProblem& problem, const SolverState& state,
                       const StepParams& params, StepPoints& points) {
  SolverState next = advance(problem, state, params, points);
  next.last_objective = problem.objective(next.x_curr);
  return next;
}

SolverState gipsa_step(const CompositeProblem& problem, const SolverState& state,
                       const StepParams& params) {
  StepPoints points;
  return gipsa_step(problem, state, params, points);
}

double lyapunov_energy(const CompositeProblem& problem, const SolverState& state,
                       const StepParams& params) {
  if (!(params.lambda > 0.0)) {
    throw InvalidInput("lyapunov_energy: stepsize must be positive");
  }
  return problem.objective(state.x_curr) +
         params.beta / (2.0 * params.lambda) * (state.x_curr - state.x_prev).squaredNorm();
}

StoppingRule StoppingRule::max_iters(std::int64_t k) {
  StoppingRule rule;
  rule.max_iterations = k;
  return rule;
}

StoppingRule& StoppingRule::with_fixed_point(double tol) {
  if (!(tol > 0.0)) {
    throw InvalidInput("stopping rule: tolerance must be positive");
  }
  fixed_point_tol = tol;
  return *this;
}

StoppingRule& StoppingRule::with_relative_gap(double F_star, double tol) {
  if (!(tol > 0.0)) {
    throw InvalidInput("stopping rule: tolerance must be positive");
  }
  f_star = F_star;
  relative_gap_tol = tol;
  return *this;
}

const char* to_string(RunStatus status) {
  switch (status) {
    case RunStatus::FixedPointReached:
      return "fixed_point_reached";
    case RunStatus::RelativeGapReached:
      return "relative_gap_reached";
    case RunStatus::MaxIterations:
      return "max_iterations";
  }
  return "unknown";
}

RunDiverged::RunDiverged(std::int64_t iteration, const std::string& what,
                         std::vector<IterationRecord> partial)
    : NumericalDivergence(iteration, what), partial_(std::move(partial)) {}

RunResult run(const CompositeProblem& problem, const ScheduleSpec& spec, const Vector& x0,
              const StoppingRule& stop, const TraceSink& trace) {
  return run_impl(problem, spec, x0, stop, trace, /*restart=*/false);
}

RunResult run_with_restart(const CompositeProblem& problem, const FistaCd& spec,
                           const Vector& x0, const StoppingRule& stop, const TraceSink& trace) {
  return run_impl(problem, ScheduleSpec{spec}, x0, stop, trace, /*restart=*/true);
}

}  // namespace gipsa
