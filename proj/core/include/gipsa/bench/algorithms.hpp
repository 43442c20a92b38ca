#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gipsa/schedules.hpp"

namespace gipsa::bench {

/// An algorithm named on the command line. Stepsizes are multiples of 1/L
/// and alpha* depends on the instance, so a spec is resolved per instance.
struct AlgorithmSpec {
  enum class Kind { Fbs, Ifbs, IfbsAlphaStar, Gipsa, FistaCd, FistaCdRestart, ConstantMomentum };
  Kind kind = Kind::Fbs;
  double alpha = 0.0;
  double beta = 0.0;
  double lambda_times_L = 1.0;
  double a = 2.1;
  double mu = 0.0;

  /// Canonical token, e.g. "ifbs:0.4".
  std::string token() const;
  /// Table label, e.g. "I-FBS(0.4)".
  std::string label() const;
};

/// Grammar (lambda given as a multiple of 1/L, default 1):
///   fbs[:lam]   ifbs:<alpha>[:lam]   ifbs:alpha*   gipsa:<alpha>:<beta>:<lam>
///   fista-cd[:a]   fista-cd-re[:a]   cm:<mu>
/// Throws InvalidInput on anything else.
AlgorithmSpec parse_algorithm(std::string_view token);
/// Comma-separated list of tokens.
std::vector<AlgorithmSpec> parse_algorithm_list(std::string_view list);

/// GIPSA(0.42, 0.6, 1.39/L), I-FBS with alpha in {0, 0.4, alpha*, 0.95},
/// FISTA-CD and FISTA-CD-RE with a = 2.1.
std::vector<AlgorithmSpec> default_roster();

struct ResolvedAlgorithm {
  std::string label;
  ScheduleSpec schedule;
  bool restart = false;
};

/// Absolute schedule for an instance with Lipschitz constant L and range-space
/// curvature l_E_hat (used by ifbs:alpha*). Throws InvalidInput when alpha* is
/// requested with l_E_hat <= 0.
ResolvedAlgorithm resolve(const AlgorithmSpec& spec, double L, double l_E_hat);

}  // namespace gipsa::bench
