#pragma once

#include <cstdint>
#include <string>

#include "gipsa/linalg.hpp"
#include "gipsa/problem.hpp"

namespace gipsa::bench {

/// Random sparse least-squares ensemble: A i.i.d. N(0, sigma2), x0 with nnz
/// standard-normal entries on a uniformly random support, b = A x0.
struct GenSpec {
  Index n = 2000;
  Index m = 1000;
  double rho = 0.1;
  Index nnz = 260;
  double sigma2 = 0.01;
  std::uint64_t seed = 1;

  void validate() const;

  /// n = 200, m = 100, nnz = 26: the full-scale ensemble shrunk tenfold.
  static GenSpec desk(std::uint64_t seed);
  static GenSpec full_scale(std::uint64_t seed);
};

struct GeneratedInstance {
  LassoInstance instance;
  Vector x0_true;
  GenSpec spec;
};

inline constexpr const char* kGeneratorName = "splitmix64-counter/inverse-normal-cdf";

/// Fully determined by spec.seed. Draw order on one counter stream: the m*n
/// entries of A in row-major order, then nnz support draws (partial
/// Fisher-Yates over 0..n-1), then the nnz nonzero values in draw order.
GeneratedInstance generate_instance(const GenSpec& spec);

}  // namespace gipsa::bench
