#include <benchmark/benchmark.h>

#include "gipsa/bench/generator.hpp"
#include "gipsa/problem.hpp"
#include "gipsa/prox.hpp"
#include "gipsa/solver.hpp"

namespace {

gipsa::bench::GenSpec spec_for(std::int64_t n) {
  gipsa::bench::GenSpec spec;
  spec.n = n;
  spec.m = n / 2;
  spec.nnz = std::max<std::int64_t>(1, n * 13 / 100);
  spec.seed = 3;
  return spec;
}

void BM_Gradient(benchmark::State& state) {
  const auto gen = gipsa::bench::generate_instance(spec_for(state.range(0)));
  const gipsa::Vector x = gipsa::Vector::Ones(gen.instance.cols());
  for (auto _ : state) benchmark::DoNotOptimize(gipsa::lasso_gradient(gen.instance, x));
}
BENCHMARK(BM_Gradient)->Arg(200)->Arg(2000);

void BM_ProxL1(benchmark::State& state) {
  const gipsa::Vector y = gipsa::Vector::LinSpaced(state.range(0), -1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(gipsa::prox_l1(y, 0.3));
}
BENCHMARK(BM_ProxL1)->Arg(200)->Arg(2000);

void BM_GipsaStep(benchmark::State& state) {
  const auto gen = gipsa::bench::generate_instance(spec_for(state.range(0)));
  const auto& inst = gen.instance;
  auto s = gipsa::SolverState::start(inst, gipsa::Vector::Zero(inst.cols()));
  const gipsa::StepParams p{0.42, 0.6, 1.39 / inst.lipschitz()};
  s = gipsa::gipsa_step(inst, s, p);
  for (auto _ : state) benchmark::DoNotOptimize(gipsa::gipsa_step(inst, s, p));
}
BENCHMARK(BM_GipsaStep)->Arg(200)->Arg(2000);

void BM_PowerIteration(benchmark::State& state) {
  const auto gen = gipsa::bench::generate_instance(spec_for(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gipsa::power_iteration_lambda_max(gen.instance.A()));
  }
}
BENCHMARK(BM_PowerIteration)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
