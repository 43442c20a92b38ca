#pragma once

#include <string>
#include <vector>

#include "gipsa/bench/experiment.hpp"

namespace gipsa::bench {

/// Instance provenance, reference solution, active-set summary and one
/// TrialSummary-shaped entry per run.
std::string experiment_summary_json(const ExperimentContext& ctx,
                                    const std::vector<AlgorithmRun>& runs,
                                    const ExperimentConfig& config);

/// One row per algorithm: mean, std and censored count of iterations to each
/// tolerance, then mean restarts, trial count, base seed and generator.
std::string trials_table_csv(const TrialsResult& result);

/// Config, aggregate and per-trial summaries.
std::string trials_summary_json(const TrialsResult& result);

}  // namespace gipsa::bench
