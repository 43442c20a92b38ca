#include <gtest/gtest.h>

#include <random>

#include "gipsa/errors.hpp"
#include "gipsa/oracle.hpp"
#include "gipsa/prox.hpp"
#include "test_support.hpp"

using namespace gipsa;
using namespace gipsa::test;

TEST(SoftThreshold, SpecExamples) {
  EXPECT_DOUBLE_EQ(soft_threshold_scalar(2.5, 1.0), 1.5);
  EXPECT_EQ(soft_threshold_scalar(-0.5, 1.0), 0.0);
  for (const double v : {-3.25, -1e-300, 0.0, 7.5}) EXPECT_EQ(soft_threshold_scalar(v, 0.0), v);
}

TEST(SoftThreshold, TieAtThresholdIsExactZero) {
  EXPECT_EQ(soft_threshold_scalar(1.0, 1.0), 0.0);
  EXPECT_EQ(soft_threshold_scalar(-1.0, 1.0), 0.0);
  EXPECT_FALSE(std::signbit(soft_threshold_scalar(-1.0, 1.0)));
}

TEST(SoftThreshold, ContractionLemma) {
  const auto r = check_soft_threshold_lemma(20'000, 99, 1e-12);
  EXPECT_EQ(r.nonexpansive.violations, 0);
  EXPECT_EQ(r.sign_flip.violations, 0);
  EXPECT_EQ(r.kill_margin.violations, 0);
}

TEST(ProxL1, SpecExamples) {
  EXPECT_EQ(prox_l1(vec({2, -2}), 1.0), vec({1, -1}));
  EXPECT_EQ(prox_l1(Vector::Zero(4), 0.7), Vector::Zero(4));
  const Vector out = prox_l1(vec({0.3, -1.4, 5}), 0.5);
  EXPECT_EQ(out[0], 0.0);
  EXPECT_NEAR(out[1], -0.9, 1e-15);
  EXPECT_NEAR(out[2], 4.5, 1e-15);
  EXPECT_THROW(prox_l1(vec({1}), -0.1), InvalidInput);
}

TEST(ProxL1, IsExactMinimizer) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> nu_dist(0.0, 2.0);
  for (int t = 0; t < 1000; ++t) {
    const Vector y = random_vector(rng, 5, 2.0);
    const double nu = nu_dist(rng);
    const Vector x = prox_l1(y, nu);
    auto obj = [&](const Vector& u) { return 0.5 * (u - y).squaredNorm() + nu * u.lpNorm<1>(); };
    const double best = obj(x);
    for (int p = 0; p < 100; ++p) {
      EXPECT_GE(obj(x + random_vector(rng, 5, 0.1)), best - 1e-12);
    }
  }
}

TEST(ForwardBackward, SpecExamples) {
  const Vector b = vec({2.0, -0.3, 0.7, -5.0});
  const auto inst = identity_instance(b, 0.5);
  const double lambda = 1.0 / inst.lipschitz();
  const Vector step = forward_backward(inst, b, lambda);
  EXPECT_LE((step - prox_l1(b, 0.5 * lambda)).norm(), 1e-7);

  // rho = 0 is not a valid lasso weight; a tiny weight stands in for the
  // unregularized quadratic step.
  const auto quad = identity_instance(Vector::Zero(3), 1e-300);
  EXPECT_LE(forward_backward(quad, vec({1, -2, 3}), 1.0 / quad.lipschitz()).norm(), 1e-7);

  const auto gen = small_instance(2);
  const auto ref = high_accuracy_solve(gen.instance);
  const double L = gen.instance.lipschitz();
  for (const double lam : {0.25 / L, 0.5 / L, 1.0 / L}) {
    EXPECT_LE((forward_backward(gen.instance, ref.x_star, lam) - ref.x_star).lpNorm<Eigen::Infinity>(),
              1e-8);
  }
}

TEST(ForwardBackward, StepsizeRangeEnforced) {
  const auto inst = identity_instance(vec({1, 2}), 0.1);
  const double L = inst.lipschitz();
  EXPECT_THROW(forward_backward(inst, vec({0, 0}), 0.0), InvalidInput);
  EXPECT_THROW(forward_backward(inst, vec({0, 0}), 2.0 / L), InvalidInput);
  EXPECT_THROW(forward_backward(inst, vec({0, 0, 0}), 1.0 / L), InvalidInput);
  EXPECT_NO_THROW(forward_backward(inst, vec({0, 0}), 1.99 / L));
}

TEST(ProjectOrthant, SpecExamples) {
  EXPECT_EQ(project_orthant(vec({-2}), SignPattern({+1})), vec({0}));
  EXPECT_EQ(project_orthant(vec({3, -4}), SignPattern({+1, -1})), vec({3, -4}));
  EXPECT_EQ(project_orthant(vec({1, -1}), SignPattern({-1, -1})), vec({0, -1}));
  EXPECT_THROW(project_orthant(vec({1, 2}), SignPattern({+1})), InvalidInput);
}

TEST(ProjectOrthant, IdempotentAndNonexpansive) {
  std::mt19937_64 rng(8);
  std::bernoulli_distribution coin(0.5);
  for (int t = 0; t < 2000; ++t) {
    std::vector<int> signs(6);
    for (auto& s : signs) s = coin(rng) ? 1 : -1;
    const SignPattern p(signs);
    const Vector u = random_vector(rng, 6);
    const Vector v = random_vector(rng, 6);
    const Vector pu = project_orthant(u, p);
    EXPECT_EQ(project_orthant(pu, p), pu);
    EXPECT_LE((pu - project_orthant(v, p)).norm(), (u - v).norm() + 1e-15);
  }
}

TEST(SignPattern, Validation) {
  EXPECT_THROW(SignPattern({0, 1}, {1, 0}), InvalidInput);
  EXPECT_THROW(SignPattern({0, 1}, {1, 2}), InvalidInput);
  EXPECT_THROW(SignPattern({1, 0}, {1, 1}), InvalidInput);
  EXPECT_THROW(SignPattern({0, 0}, {1, 1}), InvalidInput);
  EXPECT_THROW(SignPattern({0}, {1, 1}), InvalidInput);
  const SignPattern p({2, 5}, {-1, 1});
  EXPECT_EQ(p.size(), 2u);
  EXPECT_EQ(p.indices()[1], 5);
}

TEST(Sgn, ZeroIsPositive) {
  EXPECT_EQ(sgn(0.0), 1);
  EXPECT_EQ(sgn(-0.0), 1);
  EXPECT_EQ(sgn(-1e-300), -1);
}
