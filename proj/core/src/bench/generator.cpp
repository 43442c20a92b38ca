#include "gipsa/bench/generator.hpp"

#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "gipsa/errors.hpp"
#include "gipsa/rng.hpp"

namespace gipsa::bench {

void GenSpec::validate() const {
  if (n < 1 || m < 1) {
    throw InvalidInput("GenSpec: n and m must be positive");
  }
  if (nnz < 1 || nnz > n) {
    throw InvalidInput("GenSpec: nnz must lie in [1, n]");
  }
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw InvalidInput("GenSpec: rho must be positive");
  }
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw InvalidInput("GenSpec: sigma2 must be positive");
  }
}

GenSpec GenSpec::desk(std::uint64_t seed) {
  GenSpec spec;
  spec.n = 200;
  spec.m = 100;
  spec.nnz = 26;
  spec.seed = seed;
  return spec;
}

GenSpec GenSpec::full_scale(std::uint64_t seed) {
  GenSpec spec;
  spec.seed = seed;
  return spec;
}

GeneratedInstance generate_instance(const GenSpec& spec) {
  spec.validate();
  CounterRng rng(spec.seed);
  const double stddev = std::sqrt(spec.sigma2);

  DenseMatrix A(spec.m, spec.n);
  for (Index i = 0; i < spec.m; ++i) {
    for (Index j = 0; j < spec.n; ++j) {
      A(i, j) = stddev * rng.next_normal();
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(spec.n));
  std::iota(order.begin(), order.end(), Index{0});
  for (Index t = 0; t < spec.nnz; ++t) {
    const auto pick = t + static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(spec.n - t)));
    std::swap(order[static_cast<std::size_t>(t)], order[static_cast<std::size_t>(pick)]);
  }

  Vector x0 = Vector::Zero(spec.n);
  for (Index t = 0; t < spec.nnz; ++t) {
    x0[order[static_cast<std::size_t>(t)]] = rng.next_normal();
  }
  Vector b = A * x0;
  return GeneratedInstance{LassoInstance(std::move(A), std::move(b), spec.rho), std::move(x0),
                           spec};
}

}  // namespace gipsa::bench
