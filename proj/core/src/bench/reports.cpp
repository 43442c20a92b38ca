#include "gipsa/bench/reports.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "gipsa/bench/instance_io.hpp"
#include "gipsa/bench/trace_csv.hpp"

namespace gipsa::bench {

namespace {

using json = nlohmann::ordered_json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string tol_key(double tol) { return format_double(tol); }

json gen_json(const std::optional<GenSpec>& g) {
  if (!g) return nullptr;
  json j;
  j["n"] = g->n;
  j["m"] = g->m;
  j["rho"] = g->rho;
  j["nnz"] = g->nnz;
  j["sigma2"] = g->sigma2;
  j["seed"] = g->seed;
  j["generator"] = kGeneratorName;
  return j;
}

json summary_json(const TrialSummary& s) {
  json j;
  j["label"] = s.label;
  json iters = json::object();
  for (const auto& [tol, k] : s.iters_to_tol) iters[tol_key(tol)] = optional_json(k);
  j["iters_to_tol"] = iters;
  j["identification_k"] = optional_json(s.identification_k);
  j["restarts"] = s.restarts;
  j["q_hat"] = s.q_hat ? number_or_null(*s.q_hat) : json(nullptr);
  j["diverged"] = s.diverged;
  return j;
}

}  // namespace

std::string experiment_summary_json(const ExperimentContext& ctx,
                                    const std::vector<AlgorithmRun>& runs,
                                    const ExperimentConfig& config) {
  json j;
  json inst;
  inst["n"] = ctx.instance.cols();
  inst["m"] = ctx.instance.rows();
  inst["rho"] = ctx.instance.rho();
  inst["L"] = ctx.instance.lipschitz();
  inst["content_hash"] = content_hash(ctx.instance);
  inst["source"] = config.instance_path ? json(config.instance_path->string()) : json("generated");
  inst["generation"] = gen_json(ctx.generated);
  j["instance"] = inst;

  json ref;
  ref["F_star"] = ctx.reference.F_star;
  ref["residual"] = ctx.reference.residual;
  ref["method"] = ctx.reference.method;
  ref["support_refined"] = ctx.reference.support_refined;
  ref["converged"] = ctx.reference.converged;
  j["reference"] = ref;

  json as;
  as["size_E"] = ctx.active_set.E.size();
  as["omega"] = number_or_null(ctx.active_set.omega);
  as["l_E"] = ctx.active_set.l_E;
  as["l_E_hat"] = ctx.active_set.l_E_hat;
  as["tol_E"] = ctx.active_set.tol_E;
  j["active_set"] = as;

  j["tol"] = config.tol;
  j["max_iterations"] = config.max_iterations;

  json arr = json::array();
  for (const auto& run : runs) {
    json r = summary_json(summarize(run, {config.tol}));
    r["schedule"] = describe(run.schedule);
    r["restart_rule"] = run.restart;
    r["status"] = run.diverged ? "diverged" : to_string(run.status);
    if (run.diverged) r["failure"] = run.failure;
    r["iterations"] = run.iterations();
    r["final_gap"] = number_or_null(run.final_gap());
    if (run.rate) {
      json rate;
      rate["q_hat"] = number_or_null(run.rate->q_hat);
      rate["predicted_q"] = number_or_null(run.rate->predicted_q);
      rate["F_rate_hat"] = number_or_null(run.rate->F_rate_hat);
      rate["k_start"] = run.rate->k_start;
      rate["k_end"] = run.rate->k_end;
      rate["fit_residual"] = number_or_null(run.rate->fit_residual);
      r["rate"] = rate;
    } else {
      r["rate"] = nullptr;
    }
    r["reduced_update_checks"] = run.reduced_checks;
    r["reduced_update_failures"] = run.reduced_failures;
    arr.push_back(r);
  }
  j["runs"] = arr;
  return j.dump(2);
}

std::string trials_table_csv(const TrialsResult& result) {
  std::ostringstream os;
  os << "algorithm";
  for (const double tol : result.config.tolerances) {
    const auto t = tol_key(tol);
    os << ",mean_iters_" << t << ",std_iters_" << t << ",censored_" << t;
  }
  os << ",mean_restarts,trials,base_seed,generator\n";
  for (const auto& row : result.aggregate) {
    os << row.label;
    for (const double tol : result.config.tolerances) {
      const AggregateCell& c = row.cells.at(tol);
      os << ',' << format_double(c.mean) << ',' << format_double(c.stddev) << ',' << c.censored;
    }
    os << ',' << format_double(row.mean_restarts) << ',' << result.config.trials << ','
       << result.config.base.seed << ',' << kGeneratorName << '\n';
  }
  return os.str();
}

std::string trials_summary_json(const TrialsResult& result) {
  json j;
  json cfg = gen_json(result.config.base);
  cfg["trials"] = result.config.trials;
  cfg["tolerances"] = result.config.tolerances;
  cfg["max_iterations"] = result.config.max_iterations;
  json algs = json::array();
  for (const auto& a : result.config.algorithms) algs.push_back(a.token());
  cfg["algorithms"] = algs;
  j["config"] = cfg;

  json agg = json::array();
  for (const auto& row : result.aggregate) {
    json r;
    r["label"] = row.label;
    json cells = json::object();
    for (const auto& [tol, c] : row.cells) {
      json cj;
      cj["mean"] = number_or_null(c.mean);
      cj["std"] = number_or_null(c.stddev);
      cj["uncensored"] = c.uncensored;
      cj["censored"] = c.censored;
      cells[tol_key(tol)] = cj;
    }
    r["iters_to_tol"] = cells;
    r["mean_restarts"] = row.mean_restarts;
    agg.push_back(r);
  }
  j["aggregate"] = agg;

  json trials = json::array();
  for (std::size_t t = 0; t < result.per_trial.size(); ++t) {
    json tj;
    tj["seed"] = result.config.base.seed + t;
    json runs = json::array();
    for (const auto& s : result.per_trial[t]) runs.push_back(summary_json(s));
    tj["runs"] = runs;
    trials.push_back(tj);
  }
  j["trials"] = trials;
  return j.dump(2);
}

}  // namespace gipsa::bench
