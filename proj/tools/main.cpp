// gipsa: instance generation, single runs, repeated trials and schedule
// validation from the command line.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gipsa/bench/algorithms.hpp"
#include "gipsa/bench/experiment.hpp"
#include "gipsa/bench/generator.hpp"
#include "gipsa/bench/instance_io.hpp"
#include "gipsa/bench/reports.hpp"
#include "gipsa/diagnostics.hpp"
#include "gipsa/errors.hpp"
#include "gipsa/schedules.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace gipsa;
using namespace gipsa::bench;

namespace {

// Values given on the command line; unset members fall back to the config
// file, then to the defaults.
struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<Index> n, m, nnz;
  std::optional<double> rho, sigma2;
  std::optional<std::string> tol;
  std::optional<std::int64_t> max_iters;
  std::optional<std::string> algorithms;
  std::optional<std::string> out_dir;
  std::optional<std::string> instance;
  std::optional<std::string> out;
  std::optional<std::int64_t> trials;
  bool full = false;
  bool desk = false;
  std::optional<std::string> schedule;
  std::optional<double> L;
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file " + path);
  json j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  if (!j.is_object()) throw InvalidInput("config file must hold a JSON object");
  return j;
}

template <typename T>
T pick(const std::optional<T>& flag, const json& cfg, const char* key, T fallback) {
  if (flag) return *flag;
  if (cfg.contains(key)) return cfg.at(key).get<T>();
  return fallback;
}

// Strings or arrays in the config; comma-separated on the command line.
std::string list_value(const std::optional<std::string>& flag, const json& cfg, const char* key,
                       const std::string& fallback) {
  if (flag) return *flag;
  if (!cfg.contains(key)) return fallback;
  const json& v = cfg.at(key);
  if (v.is_string()) return v.get<std::string>();
  std::string out;
  for (const auto& item : v) {
    if (!out.empty()) out += ',';
    out += item.is_string() ? item.get<std::string>() : item.dump();
  }
  return out;
}

std::vector<double> parse_tolerances(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find(',', start);
    const auto piece = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    if (!piece.empty()) out.push_back(parse_double(piece));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  if (out.empty()) throw InvalidInput("no tolerance given");
  return out;
}

GenSpec gen_spec(const Flags& f, const json& cfg) {
  GenSpec spec = (f.desk || cfg.value("desk", false)) ? GenSpec::desk(1) : GenSpec::full_scale(1);
  spec.seed = pick(f.seed, cfg, "seed", spec.seed);
  spec.n = pick(f.n, cfg, "n", spec.n);
  spec.m = pick(f.m, cfg, "m", spec.m);
  spec.rho = pick(f.rho, cfg, "rho", spec.rho);
  spec.nnz = pick(f.nnz, cfg, "nnz", spec.nnz);
  spec.sigma2 = pick(f.sigma2, cfg, "sigma2", spec.sigma2);
  spec.validate();
  return spec;
}

void add_gen_flags(CLI::App* app, Flags& f) {
  app->add_option("--seed", f.seed, "Generator seed (trials use seed + trial index)");
  app->add_option("--n", f.n, "Number of unknowns");
  app->add_option("--m", f.m, "Number of measurements");
  app->add_option("--rho", f.rho, "l1 weight");
  app->add_option("--nnz", f.nnz, "Nonzeros of the planted x0");
  app->add_option("--sigma2", f.sigma2, "Entry variance of A");
  app->add_flag("--desk", f.desk, "Start from n=200, m=100, nnz=26 instead of the full size");
}

void add_common_flags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON config file; flags override its keys");
}

int cmd_gen(const Flags& f) {
  const json cfg = load_config(f.config);
  const GenSpec spec = gen_spec(f, cfg);
  const std::string out = pick(f.out, cfg, "out", std::string("instance.gipsa"));
  const GeneratedInstance gen = generate_instance(spec);
  if (const auto parent = fs::path(out).parent_path(); !parent.empty()) {
    fs::create_directories(parent);
  }
  write_instance(out, gen.instance, spec);
  std::cout << "wrote " << out << " (m=" << spec.m << ", n=" << spec.n << ", seed=" << spec.seed
            << ", L=" << format_double(gen.instance.lipschitz())
            << ", hash=" << content_hash(gen.instance) << ")\n";
  return 0;
}

int cmd_solve(const Flags& f) {
  const json cfg = load_config(f.config);
  ExperimentConfig config;
  const std::string instance = pick(f.instance, cfg, "instance", std::string());
  if (!instance.empty()) {
    config.instance_path = instance;
  } else {
    config.gen = gen_spec(f, cfg);
  }
  config.algorithms = parse_algorithm_list(list_value(
      f.algorithms, cfg, "algorithms",
      "gipsa:0.42:0.6:1.39,ifbs:0,ifbs:0.4,ifbs:alpha*,ifbs:0.95,fista-cd:2.1,fista-cd-re:2.1"));
  const auto tols = parse_tolerances(list_value(f.tol, cfg, "tol", "1e-10"));
  if (tols.size() != 1) throw InvalidInput("solve takes a single --tol");
  config.tol = tols.front();
  config.max_iterations = pick(f.max_iters, cfg, "max_iters", config.max_iterations);
  config.out_dir = pick(f.out_dir, cfg, "out_dir", std::string("out"));

  const ExperimentResult result = run_experiment(config);
  for (std::size_t i = 0; i < result.runs.size(); ++i) {
    const AlgorithmRun& run = result.runs[i];
    std::cout << run.label << ": " << (run.diverged ? "diverged" : to_string(run.status))
              << ", iterations " << run.iterations() << ", final gap "
              << format_double(run.final_gap()) << ", identified at "
              << (run.identification_k ? std::to_string(*run.identification_k) : "-")
              << ", q_hat " << (run.rate ? format_double(run.rate->q_hat) : "-") << " -> "
              << result.trace_files[i].string() << '\n';
  }
  std::cout << "summary: " << result.summary_file.string() << '\n';
  return 0;
}

int cmd_trials(const Flags& f) {
  const json cfg = load_config(f.config);
  TrialsConfig config;
  config.base = gen_spec(f, cfg);
  config.trials = pick(f.trials, cfg, "trials", config.trials);
  if (f.full || cfg.value("full", false)) config.trials = 1000;
  config.tolerances = parse_tolerances(list_value(f.tol, cfg, "tol", "1e-2,1e-6"));
  config.max_iterations = pick(f.max_iters, cfg, "max_iters", config.max_iterations);
  if (f.algorithms || cfg.contains("algorithms")) {
    config.algorithms = parse_algorithm_list(list_value(f.algorithms, cfg, "algorithms", ""));
  }
  const fs::path out_dir = pick(f.out_dir, cfg, "out_dir", std::string("out"));

  const TrialsResult result = run_trials(config, [](std::int64_t t, std::int64_t total) {
    std::cerr << "\rtrial " << t << "/" << total << std::flush;
  });
  std::cerr << '\n';

  fs::create_directories(out_dir);
  const std::string table = trials_table_csv(result);
  std::ofstream(out_dir / "table1.csv", std::ios::binary | std::ios::trunc) << table;
  std::ofstream(out_dir / "trials_summary.json", std::ios::binary | std::ios::trunc)
      << trials_summary_json(result) << '\n';
  std::cout << table;
  std::cout << "wrote " << (out_dir / "table1.csv").string() << " and "
            << (out_dir / "trials_summary.json").string() << '\n';
  return 0;
}

int cmd_validate(const Flags& f) {
  const json cfg = load_config(f.config);
  const std::string token = pick(f.schedule, cfg, "schedule", std::string());
  if (token.empty()) throw InvalidInput("validate needs --schedule");
  const AlgorithmSpec spec = parse_algorithm(token);

  double L = 0.0;
  double l_E_hat = 0.0;
  const std::string instance = pick(f.instance, cfg, "instance", std::string());
  if (!instance.empty()) {
    LoadedInstance loaded = read_instance(instance);
    L = loaded.instance.lipschitz();
    if (spec.kind == AlgorithmSpec::Kind::IfbsAlphaStar) {
      fs::path cache = instance;
      cache += ".ref.json";
      l_E_hat = prepare_context(std::move(loaded.instance), {}, {}, cache).active_set.l_E_hat;
    }
  } else {
    L = pick(f.L, cfg, "L", 1.0);
  }
  const ResolvedAlgorithm alg = resolve(spec, L, l_E_hat);
  const ValidationReport report = validate_gipsa(alg.schedule, L);

  std::cout << "schedule: " << describe(alg.schedule) << "  (L = " << format_double(L) << ")\n";
  for (const auto& c : report.per_condition) {
    std::cout << "  " << (c.pass ? "pass" : "FAIL") << "  " << c.name << "  margin "
              << format_double(c.worst_margin) << '\n';
  }
  std::cout << "epsilon margin " << format_double(report.epsilon_margin) << ", gamma margin "
            << format_double(report.gamma_margin) << '\n';
  if (!report.note.empty()) std::cout << report.note << '\n';
  std::string verdict;
  int status = 0;
  if (report.satisfies_global_theorem) {
    verdict = "PASS: satisfies the global convergence conditions";
  } else if (report.covered_by_fista_cd_lemma) {
    verdict = "INFO: not covered by global theorem; covered by FISTA-CD lemma";
  } else {
    verdict = "FAIL: global convergence conditions violated";
    status = 1;
  }
  std::cout << verdict << '\n' << to_json(report) << '\n';
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GIPSA lasso benchmark harness"};
  app.require_subcommand(1);
  Flags f;

  auto* gen = app.add_subcommand("gen", "Generate a random instance file");
  add_common_flags(gen, f);
  add_gen_flags(gen, f);
  gen->add_option("--out", f.out, "Instance file to write (default instance.gipsa)");

  auto* solve = app.add_subcommand("solve", "Run algorithms on one instance; write CSV traces");
  add_common_flags(solve, f);
  add_gen_flags(solve, f);
  solve->add_option("--instance", f.instance, "Instance file (otherwise generated from flags)");
  solve->add_option("--algorithms", f.algorithms, "Comma-separated algorithm tokens");
  solve->add_option("--tol", f.tol, "Stop at this relative objective gap (default 1e-10)");
  solve->add_option("--max-iters", f.max_iters, "Iteration cap per run (default 50000)");
  solve->add_option("--out-dir", f.out_dir, "Output directory (default out)");

  auto* trials = app.add_subcommand("trials", "Repeated seeded trials; mean-iteration table as CSV");
  add_common_flags(trials, f);
  add_gen_flags(trials, f);
  trials->add_option("--trials", f.trials, "Number of trials (default 50)");
  trials->add_flag("--full", f.full, "Run 1000 trials");
  trials->add_option("--tol", f.tol, "Comma-separated tolerances (default 1e-2,1e-6)");
  trials->add_option("--algorithms", f.algorithms, "Comma-separated algorithm tokens");
  trials->add_option("--max-iters", f.max_iters, "Iteration cap per run (default 50000)");
  trials->add_option("--out-dir", f.out_dir, "Output directory (default out)");

  auto* validate = app.add_subcommand("validate", "Check a schedule against the convergence conditions");
  add_common_flags(validate, f);
  validate->add_option("--schedule", f.schedule, "Algorithm token, e.g. ifbs:0.5");
  validate->add_option("--L", f.L, "Lipschitz constant (default 1)");
  validate->add_option("--instance", f.instance, "Take L (and alpha*) from an instance file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(f);
    if (solve->parsed()) return cmd_solve(f);
    if (trials->parsed()) return cmd_trials(f);
    if (validate->parsed()) return cmd_validate(f);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
