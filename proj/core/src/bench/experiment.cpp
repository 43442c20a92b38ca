#include "gipsa/bench/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "gipsa/bench/instance_io.hpp"
#include "gipsa/bench/reports.hpp"
#include "gipsa/errors.hpp"

namespace gipsa::bench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Per-step outcome of the reduced-update check.
enum class ReducedCheck : std::int8_t { NotApplicable, YOffE, Pass, Fail };

bool vanishes_off_E(const ActiveSetEstimate& est, const Vector& v) {
  for (const Index i : est.E_complement) {
    if (v[i] != 0.0) return false;
  }
  return true;
}

}  // namespace

ExperimentContext prepare_context(LassoInstance instance, std::optional<GenSpec> generated,
                                  const OracleOptions& oracle,
                                  const std::optional<std::filesystem::path>& cache_path) {
  std::optional<ReferenceSolution> ref;
  if (cache_path) {
    ref = read_reference(*cache_path, instance);
  }
  if (!ref) {
    ref = high_accuracy_solve(instance, oracle);
    if (cache_path) write_reference(*cache_path, instance, *ref);
  }
  ActiveSetEstimate est = estimate_active_set(instance, ref->x_star);
  return ExperimentContext{std::move(instance), std::move(*ref), std::move(est),
                           std::move(generated)};
}

double relative_gap(double F, double F_star) {
  return F_star != 0.0 ? (F - F_star) / F_star : F - F_star;
}

double AlgorithmRun::final_gap() const { return trace.empty() ? kNaN : trace.back().F_gap; }

std::vector<double> AlgorithmRun::gaps() const {
  std::vector<double> out;
  out.reserve(trace.size());
  for (const auto& r : trace) out.push_back(r.F_gap);
  return out;
}

std::vector<double> AlgorithmRun::iterate_errors() const {
  std::vector<double> out;
  out.reserve(trace.size());
  for (const auto& r : trace) out.push_back(r.iterate_err);
  return out;
}

namespace {
// lambda = 1/L up to the rounding of the division.
bool unit_step(double lambda, double L) { return std::abs(lambda * L - 1.0) <= 1e-14; }
}  // namespace

double predicted_rate_for(const ResolvedAlgorithm& alg, const ExperimentContext& ctx) {
  const double L = ctx.instance.lipschitz();
  const double mu = std::min(ctx.active_set.l_E_hat, L);
  if (!(mu > 0.0)) return kNaN;
  if (const auto* cm = std::get_if<ConstantMomentum>(&alg.schedule)) {
    if (!unit_step(cm->lambda, L)) return kNaN;
    return predicted_local_rate(cm->mu, L, RateVariant::ConstantMomentum).q;
  }
  if (const auto* f = std::get_if<Fbs>(&alg.schedule)) {
    if (!unit_step(f->lambda, L)) return kNaN;
    return predicted_local_rate(mu, L, RateVariant::Fbs).q;
  }
  if (const auto* ifbs = std::get_if<FixedIfbs>(&alg.schedule)) {
    if (ifbs->alpha != 0.0 || !unit_step(ifbs->lambda, L)) return kNaN;
    return predicted_local_rate(mu, L, RateVariant::Fbs).q;
  }
  if (std::holds_alternative<FistaCd>(alg.schedule)) {
    return predicted_local_rate(
               mu, L, alg.restart ? RateVariant::FistaCdRestart : RateVariant::FistaCd)
        .q;
  }
  return kNaN;
}

AlgorithmRun run_algorithm(const ExperimentContext& ctx, const ResolvedAlgorithm& alg,
                           const RunOptions& options) {
  const LassoInstance& inst = ctx.instance;
  const ActiveSetEstimate& est = ctx.active_set;
  const Vector& x_star = ctx.reference.x_star;
  const double F_star = ctx.reference.F_star;

  AlgorithmRun out;
  out.label = alg.label;
  out.schedule = alg.schedule;
  out.restart = alg.restart;

  ManifoldTrace manifold;
  std::vector<ReducedCheck> checks;
  Signature previous;

  const TraceSink sink = [&](const IterationRecord& record, const IterateView& view) {
    TraceRow row;
    row.k = record.k;
    row.F_gap = relative_gap(record.objective, F_star);
    row.iterate_err = (view.state.x_curr - x_star).norm();
    row.increment_norm_sq = record.increment_norm_sq;
    row.lyapunov_energy = record.lyapunov_energy;
    row.restarted = record.restarted;

    // A restart leaves x^k in place; the discarded step's points say nothing
    // about it.
    const Signature s = record.restarted
                            ? previous
                            : signature_from_forward(est, view.state.x_curr, view.points.forward);
    previous = s;
    row.support_outside_E = s.support_outside_E;
    row.sign_mismatches_on_E = s.sign_mismatches_on_E;
    manifold.push(record.k, s);

    if (options.check_reduced_update) {
      ReducedCheck c = ReducedCheck::NotApplicable;
      if (!record.restarted && record.alpha == record.beta) {
        if (!vanishes_off_E(est, view.points.y)) {
          c = ReducedCheck::YOffE;
        } else {
          c = verify_reduced_update(inst, est, restrict_to_E(est, view.state.x_curr),
                                    restrict_to_E(est, view.points.y), record.lambda)
                  ? ReducedCheck::Pass
                  : ReducedCheck::Fail;
        }
      }
      checks.push_back(c);
    }
    out.trace.push_back(row);
  };

  const Vector x0 = Vector::Zero(inst.cols());
  try {
    RunResult result =
        alg.restart
            ? run_with_restart(inst, std::get<FistaCd>(alg.schedule), x0, options.stop, sink)
            : run(inst, alg.schedule, x0, options.stop, sink);
    out.status = result.status;
    out.restarts = result.restarts;
    out.final_x = std::move(result.final);
  } catch (const RunDiverged& e) {
    out.diverged = true;
    out.failure = e.what();
    return out;
  }

  out.identification_k = identification_iteration(manifold);
  if (out.identification_k && options.check_reduced_update) {
    for (std::size_t i = 0; i < checks.size(); ++i) {
      const auto k = out.trace[i].k;
      if (k < *out.identification_k + 2) continue;
      if (checks[i] == ReducedCheck::NotApplicable) continue;
      ++out.reduced_checks;
      if (checks[i] != ReducedCheck::Pass) ++out.reduced_failures;
    }
  }

  if (options.fit_rate && out.identification_k) {
    const auto from = static_cast<std::size_t>(*out.identification_k - 1);
    const auto gaps = out.gaps();
    auto positive_on = [&](const RateWindow& w) {
      return std::all_of(gaps.begin() + static_cast<std::ptrdiff_t>(w.begin),
                         gaps.begin() + static_cast<std::ptrdiff_t>(w.end),
                         [](double g) { return g > 0.0; });
    };
    std::optional<RateEstimate> rate;
    if (est.l_E > 0.0) {
      const auto errors = out.iterate_errors();
      if (const auto window = select_rate_window(errors, from, x_star.norm())) {
        rate = estimate_rate(errors, *window);
        rate->F_rate_hat = positive_on(*window) ? estimate_rate(gaps, *window).q_hat : kNaN;
      }
    } else if (const auto window = select_rate_window(gaps, from, 1.0);
               window && positive_on(*window)) {
      // x* need not be unique: fit the objective gap, whose rate is q^2.
      rate = estimate_rate(gaps, *window);
      rate->F_rate_hat = rate->q_hat;
      rate->q_hat = std::sqrt(rate->q_hat);
    }
    if (rate) {
      rate->predicted_q = predicted_rate_for(alg, ctx);
      out.rate = rate;
    }
  }
  return out;
}

std::optional<std::int64_t> iters_to_tol(std::span<const double> gaps, double tol) {
  if (gaps.empty() || !(gaps.back() <= tol)) return std::nullopt;
  std::size_t i = gaps.size();
  while (i > 0 && gaps[i - 1] <= tol) --i;
  return static_cast<std::int64_t>(i) + 1;
}

TrialSummary summarize(const AlgorithmRun& run, const std::vector<double>& tolerances) {
  TrialSummary s;
  s.label = run.label;
  s.identification_k = run.identification_k;
  s.restarts = run.restarts;
  s.diverged = run.diverged;
  if (run.rate) s.q_hat = run.rate->q_hat;
  const auto gaps = run.gaps();
  for (const double tol : tolerances) {
    s.iters_to_tol[tol] = run.diverged ? std::nullopt : iters_to_tol(gaps, tol);
  }
  return s;
}

std::vector<AggregateRow> aggregate_trials(const std::vector<std::vector<TrialSummary>>& per_trial,
                                           const std::vector<double>& tolerances) {
  std::vector<AggregateRow> rows;
  if (per_trial.empty()) return rows;
  const std::size_t algorithms = per_trial.front().size();
  for (std::size_t a = 0; a < algorithms; ++a) {
    AggregateRow row;
    row.label = per_trial.front()[a].label;
    double restarts = 0.0;
    for (const auto& trial : per_trial) restarts += static_cast<double>(trial[a].restarts);
    row.mean_restarts = restarts / static_cast<double>(per_trial.size());
    for (const double tol : tolerances) {
      std::vector<double> values;
      AggregateCell cell;
      for (const auto& trial : per_trial) {
        const auto it = trial[a].iters_to_tol.find(tol);
        if (it != trial[a].iters_to_tol.end() && it->second) {
          values.push_back(static_cast<double>(*it->second));
        } else {
          ++cell.censored;
        }
      }
      cell.uncensored = static_cast<std::int64_t>(values.size());
      if (values.empty()) {
        cell.mean = kNaN;
        cell.stddev = kNaN;
      } else {
        const double n = static_cast<double>(values.size());
        cell.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
        double ss = 0.0;
        for (const double v : values) ss += (v - cell.mean) * (v - cell.mean);
        cell.stddev = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
      }
      row.cells[tol] = cell;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

TrialsResult run_trials(const TrialsConfig& config, const TrialProgress& progress) {
  if (config.trials < 1) throw InvalidInput("trials: count must be at least 1");
  if (config.tolerances.empty()) throw InvalidInput("trials: no tolerances given");
  if (config.algorithms.empty()) throw InvalidInput("trials: no algorithms given");
  for (const double tol : config.tolerances) {
    if (!(tol > 0.0)) throw InvalidInput("trials: tolerances must be positive");
  }
  config.base.validate();
  const double stop_gap =
      *std::min_element(config.tolerances.begin(), config.tolerances.end()) * 1e-2;

  TrialsResult result;
  result.config = config;
  for (std::int64_t t = 0; t < config.trials; ++t) {
    GenSpec spec = config.base;
    spec.seed = config.base.seed + static_cast<std::uint64_t>(t);
    GeneratedInstance gen = generate_instance(spec);
    const ExperimentContext ctx =
        prepare_context(std::move(gen.instance), spec, config.oracle, std::nullopt);

    std::vector<TrialSummary> row;
    for (const auto& alg_spec : config.algorithms) {
      ResolvedAlgorithm alg;
      try {
        alg = resolve(alg_spec, ctx.instance.lipschitz(), ctx.active_set.l_E_hat);
      } catch (const InvalidInput&) {
        TrialSummary s;
        s.label = alg_spec.label();
        s.diverged = true;
        for (const double tol : config.tolerances) s.iters_to_tol[tol] = std::nullopt;
        row.push_back(std::move(s));
        continue;
      }
      RunOptions options;
      options.stop = StoppingRule::max_iters(config.max_iterations);
      options.stop.with_relative_gap(ctx.reference.F_star, stop_gap);
      row.push_back(summarize(run_algorithm(ctx, alg, options), config.tolerances));
    }
    result.per_trial.push_back(std::move(row));
    if (progress) progress(t + 1, config.trials);
  }
  result.aggregate = aggregate_trials(result.per_trial, config.tolerances);
  return result;
}

std::string slugify(const std::string& label) {
  std::string out;
  for (const char c : label) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (c == '*') {
      out += "star";
    } else if (c == '.') {
      out += 'p';
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "run" : out;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.algorithms.empty()) throw InvalidInput("experiment: no algorithms given");
  if (!(config.tol > 0.0)) throw InvalidInput("experiment: tolerance must be positive");

  std::optional<ExperimentContext> ctx;
  if (config.instance_path) {
    LoadedInstance loaded = read_instance(*config.instance_path);
    auto cache = *config.instance_path;
    cache += ".ref.json";
    ctx.emplace(prepare_context(std::move(loaded.instance), loaded.metadata.generated,
                                config.oracle, cache));
  } else {
    GeneratedInstance gen = generate_instance(config.gen);
    ctx.emplace(prepare_context(std::move(gen.instance), config.gen, config.oracle));
  }

  std::filesystem::create_directories(config.out_dir);
  ExperimentResult result;
  for (const auto& spec : config.algorithms) {
    const ResolvedAlgorithm alg = resolve(spec, ctx->instance.lipschitz(), ctx->active_set.l_E_hat);
    RunOptions options;
    options.stop = StoppingRule::max_iters(config.max_iterations);
    options.stop.with_relative_gap(ctx->reference.F_star, config.tol);
    options.check_reduced_update = true;
    AlgorithmRun run = run_algorithm(*ctx, alg, options);

    const auto path = config.out_dir / ("trace_" + slugify(run.label) + ".csv");
    std::ofstream csv(path, std::ios::binary | std::ios::trunc);
    if (!csv) throw std::runtime_error("cannot write " + path.string());
    write_trace_csv(csv, run.trace);
    result.trace_files.push_back(path);
    result.runs.push_back(std::move(run));
  }

  result.summary_file = config.out_dir / "summary.json";
  std::ofstream summary(result.summary_file, std::ios::binary | std::ios::trunc);
  if (!summary) throw std::runtime_error("cannot write " + result.summary_file.string());
  summary << experiment_summary_json(*ctx, result.runs, config) << '\n';
  return result;
}

}  // namespace gipsa::bench
