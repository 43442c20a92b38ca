#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gipsa/bench/algorithms.hpp"
#include "gipsa/bench/generator.hpp"
#include "gipsa/bench/trace_csv.hpp"
#include "gipsa/diagnostics.hpp"
#include "gipsa/oracle.hpp"
#include "gipsa/problem.hpp"
#include "gipsa/solver.hpp"

namespace gipsa::bench {

/// An instance with its reference solution and active-set structure.
struct ExperimentContext {
  LassoInstance instance;
  ReferenceSolution reference;
  ActiveSetEstimate active_set;
  std::optional<GenSpec> generated;
};

/// Solves the instance with the oracle (or reuses a matching cache file when
/// cache_path is given, writing it otherwise) and estimates the active set.
/// Throws StaleSolution if the reference is not accurate enough for the
/// active-set estimate.
ExperimentContext prepare_context(LassoInstance instance, std::optional<GenSpec> generated = {},
                                  const OracleOptions& oracle = {},
                                  const std::optional<std::filesystem::path>& cache_path = {});

struct RunOptions {
  StoppingRule stop;
  /// Checks the reduced projected update at every step whose y vanishes off E.
  bool check_reduced_update = false;
  /// Fit a local rate to the post-identification tail of iterate errors.
  bool fit_rate = true;
};

struct AlgorithmRun {
  std::string label;
  ScheduleSpec schedule;
  bool restart = false;
  std::vector<TraceRow> trace;
  RunStatus status = RunStatus::MaxIterations;
  /// Set when the solver raised a divergence; trace holds the partial run.
  bool diverged = false;
  std::string failure;
  std::int64_t restarts = 0;
  std::optional<std::int64_t> identification_k;
  /// Reduced-update checks at steps k >= identification_k + 2.
  std::int64_t reduced_checks = 0;
  std::int64_t reduced_failures = 0;
  std::optional<RateEstimate> rate;
  Vector final_x;

  std::int64_t iterations() const { return static_cast<std::int64_t>(trace.size()); }
  double final_gap() const;
  std::vector<double> gaps() const;
  std::vector<double> iterate_errors() const;
};

/// (F - F*) / F*, or F - F* when F* == 0.
double relative_gap(double F, double F_star);

/// Predicted local iterate rate for a schedule at lambda = 1/L; NaN where no
/// prediction applies.
double predicted_rate_for(const ResolvedAlgorithm& alg, const ExperimentContext& ctx);

/// Runs from x0 = 0 and records the trace against the reference. Divergence
/// is caught and reported through AlgorithmRun::diverged.
AlgorithmRun run_algorithm(const ExperimentContext& ctx, const ResolvedAlgorithm& alg,
                           const RunOptions& options);

/// Smallest k with gap_j <= tol for every j >= k, scanning from the end
/// (gaps[i] belongs to iteration i + 1). nullopt when the last gap exceeds tol.
std::optional<std::int64_t> iters_to_tol(std::span<const double> gaps, double tol);

struct TrialSummary {
  std::string label;
  std::map<double, std::optional<std::int64_t>> iters_to_tol;
  std::optional<std::int64_t> identification_k;
  std::int64_t restarts = 0;
  std::optional<double> q_hat;
  bool diverged = false;
};

struct TrialsConfig {
  GenSpec base;
  std::int64_t trials = 50;
  std::vector<double> tolerances{1e-2, 1e-6};
  std::vector<AlgorithmSpec> algorithms = default_roster();
  std::int64_t max_iterations = 50'000;
  OracleOptions oracle;
};

struct AggregateCell {
  double mean = 0.0;    // over uncensored trials; NaN if none
  double stddev = 0.0;  // sample standard deviation; 0 with one trial
  std::int64_t uncensored = 0;
  std::int64_t censored = 0;
};

struct AggregateRow {
  std::string label;
  std::map<double, AggregateCell> cells;
  double mean_restarts = 0.0;
};

struct TrialsResult {
  TrialsConfig config;
  /// per_trial[t][a]: trial t (seed base.seed + t), algorithm a.
  std::vector<std::vector<TrialSummary>> per_trial;
  std::vector<AggregateRow> aggregate;
};

using TrialProgress = std::function<void(std::int64_t trial, std::int64_t total)>;

/// One instance per trial; each algorithm runs until the relative gap drops
/// to 1e-2 times the smallest tolerance or hits the iteration cap.
TrialsResult run_trials(const TrialsConfig& config, const TrialProgress& progress = {});

/// Deterministic reduction of per-trial summaries in trial order.
std::vector<AggregateRow> aggregate_trials(const std::vector<std::vector<TrialSummary>>& per_trial,
                                           const std::vector<double>& tolerances);

TrialSummary summarize(const AlgorithmRun& run, const std::vector<double>& tolerances);

struct ExperimentConfig {
  std::optional<std::filesystem::path> instance_path;
  GenSpec gen;  // used when instance_path is empty
  std::vector<AlgorithmSpec> algorithms = default_roster();
  double tol = 1e-10;
  std::int64_t max_iterations = 50'000;
  std::filesystem::path out_dir = "out";
  OracleOptions oracle;
};

struct ExperimentResult {
  std::vector<AlgorithmRun> runs;
  std::vector<std::filesystem::path> trace_files;
  std::filesystem::path summary_file;
};

/// Writes trace_<slug>.csv per algorithm and summary.json into out_dir.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Lowercase file-name-safe form of a label.
std::string slugify(const std::string& label);

}  // namespace gipsa::bench
