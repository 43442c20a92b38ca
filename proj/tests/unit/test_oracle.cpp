#include <gtest/gtest.h>

#include <random>

#include "gipsa/diagnostics.hpp"
#include "gipsa/oracle.hpp"
#include "gipsa/solver.hpp"
#include "test_support.hpp"

using namespace gipsa;
using namespace gipsa::test;

TEST(HighAccuracySolve, IdentityClosedForm) {
  std::mt19937_64 rng(1);
  const Vector b = random_vector(rng, 30, 1.5);
  const double rho = 0.7;
  const auto inst = identity_instance(b, rho);
  const auto ref = high_accuracy_solve(inst);
  const Vector x = identity_lasso_solution(b, rho);
  EXPECT_LE((ref.x_star - x).lpNorm<Eigen::Infinity>(), 1e-12);
  const double F = 0.5 * (b - x).squaredNorm() + rho * x.lpNorm<1>();
  EXPECT_NEAR(ref.F_star, F, 1e-12 * (1.0 + F));
  EXPECT_LE(ref.residual, 1e-10);
  EXPECT_TRUE(ref.converged);
}

TEST(HighAccuracySolve, LargeWeightGivesZero) {
  const auto gen = desk_instance(2);
  const auto& g = gen.instance;
  const double rho = 1.01 * (g.A().transpose() * g.b()).lpNorm<Eigen::Infinity>();
  const LassoInstance inst(g.A(), g.b(), rho);
  const auto ref = high_accuracy_solve(inst);
  EXPECT_EQ(ref.x_star, Vector::Zero(inst.cols()));
  EXPECT_DOUBLE_EQ(ref.F_star, 0.5 * inst.b().squaredNorm());
  EXPECT_TRUE(certify_optimality(inst, Vector::Zero(inst.cols()), 0.0));
}

TEST(HighAccuracySolve, DeskInstancesMeetResidualAndDominateProbes) {
  std::mt19937_64 rng(3);
  for (const std::uint64_t seed : {1u, 5u, 9u}) {
    const auto gen = desk_instance(seed);
    const auto& inst = gen.instance;
    const auto ref = high_accuracy_solve(inst);
    EXPECT_LE(ref.residual, 1e-10);
    EXPECT_TRUE(ref.converged);
    EXPECT_NE(ref.method.find("fista-cd-re"), std::string::npos);
    EXPECT_DOUBLE_EQ(ref.F_star, lasso_objective(inst, ref.x_star));
    for (int t = 0; t < 1000; ++t) {
      const Vector probe = t % 2 == 0 ? Vector(ref.x_star + random_vector(rng, inst.cols(), 1e-3))
                                      : random_vector(rng, inst.cols(), 1.0);
      EXPECT_LE(ref.F_star, lasso_objective(inst, probe));
    }
  }
}

TEST(HighAccuracySolve, AgreesWithIndependentSolve) {
  std::mt19937_64 rng(4);
  const auto gen = desk_instance(11);
  const auto& inst = gen.instance;
  const auto ref = high_accuracy_solve(inst);
  StoppingRule stop = StoppingRule::max_iters(500'000);
  stop.with_fixed_point(1e-13);
  const auto other =
      run(inst, FixedIfbs{0.8, 1.0 / inst.lipschitz()}, random_vector(rng, inst.cols()), stop);
  const double F_other = lasso_objective(inst, other.final);
  EXPECT_NEAR(F_other, ref.F_star, 1e-10 * (1.0 + ref.F_star));
}

TEST(CertifyOptimality, Examples) {
  const auto gen = desk_instance(6);
  const auto& inst = gen.instance;
  const auto ref = high_accuracy_solve(inst);
  EXPECT_TRUE(certify_optimality(inst, ref.x_star, 1e-8));
  Vector perturbed = ref.x_star;
  Index i = 0;
  while (perturbed[i] == 0.0) ++i;
  perturbed[i] += 0.1;
  EXPECT_FALSE(certify_optimality(inst, perturbed, 1e-8));
  Vector off = ref.x_star;
  Index j = 0;
  while (off[j] != 0.0) ++j;
  off[j] = 0.1;
  EXPECT_FALSE(certify_optimality(inst, off, 1e-8));
}

TEST(CertifyOptimality, AgreesWithFixedPointResidual) {
  // For x = T(x) up to r, the subgradient error is bounded by r (1/lambda + L),
  // so certification must hold at that tolerance.
  for (std::uint64_t seed = 100; seed < 150; ++seed) {
    bench::GenSpec spec;
    spec.n = 30;
    spec.m = 15;
    spec.nnz = 4;
    spec.seed = seed;
    const auto gen = bench::generate_instance(spec);
    const auto& inst = gen.instance;
    const double L = inst.lipschitz();
    const double lambda = 1.0 / L;
    StoppingRule stop = StoppingRule::max_iters(100'000);
    stop.with_fixed_point(1e-7);
    const auto result = run(inst, Fbs{lambda}, Vector::Zero(inst.cols()), stop);
    const double r = fixed_point_residual(inst, result.final, lambda);
    const double tol = r * std::sqrt(static_cast<double>(inst.cols())) * (1.0 / lambda + L) *
                       (1.0 + lambda);
    EXPECT_TRUE(certify_optimality(inst, forward_backward(inst, result.final, lambda), tol))
        << "seed " << seed;
  }
}

TEST(RefineOnSupport, SignConsistentWhenAccepted) {
  const auto gen = desk_instance(7);
  const auto& inst = gen.instance;
  const auto ref = high_accuracy_solve(inst);
  ASSERT_TRUE(ref.support_refined);
  const Vector refined = refine_on_support(inst, ref.x_star);
  for (Index i = 0; i < refined.size(); ++i) {
    if (ref.x_star[i] != 0.0) {
      EXPECT_GT(sgn(ref.x_star[i]) * refined[i], 0.0);
    } else {
      EXPECT_EQ(refined[i], 0.0);
    }
  }
}

TEST(RefineOnSupport, SingularGramUsesMinimumNorm) {
  // Two identical columns: the Gram matrix is singular.
  DenseMatrix A(3, 2);
  A << 1, 1, 0, 0, 1, 1;
  const LassoInstance inst(A, vec({2, 0, 2}), 0.5);
  const Vector refined = refine_on_support(inst, vec({1, 1}));
  EXPECT_TRUE(refined.allFinite());
  EXPECT_NEAR(refined[0], refined[1], 1e-12);
}
