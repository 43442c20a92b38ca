#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "gipsa/diagnostics.hpp"
#include "gipsa/errors.hpp"
#include "gipsa/oracle.hpp"
#include "gipsa/solver.hpp"
#include "test_support.hpp"

using namespace gipsa;
using namespace gipsa::test;

namespace {

struct IdentityExample {
  LassoInstance inst = identity_instance(vec({2, 0.5, -3, 0.05}), 1.0);
  Vector x_star = vec({1, 0, -2, 0});
};

// Counts straight from the definitions, coordinate by coordinate.
Signature brute_force_signature(const LassoInstance& inst, const Vector& h_star, double tol_E,
                                const Vector& x, const Vector& y, double lambda) {
  const Vector g = inst.A().transpose() * (inst.A() * y - inst.b());
  Signature s;
  for (Index i = 0; i < x.size(); ++i) {
    const bool in_E = inst.rho() - std::abs(h_star[i]) <= tol_E;
    if (!in_E && x[i] != 0.0) ++s.support_outside_E;
    if (in_E) {
      const double v = y[i] - lambda * g[i];
      const int sv = v >= 0.0 ? 1 : -1;
      const int pattern = h_star[i] >= 0.0 ? -1 : 1;
      if (sv != pattern) ++s.sign_mismatches_on_E;
    }
  }
  return s;
}

}  // namespace

TEST(EstimateActiveSet, IdentityExample) {
  const IdentityExample ex;
  const auto est = estimate_active_set(ex.inst, ex.x_star);
  EXPECT_LE((est.h_star - vec({-1, -0.5, 1, -0.05})).norm(), 1e-15);
  EXPECT_EQ(est.E, (std::vector<Index>{0, 2}));
  EXPECT_EQ(est.E_complement, (std::vector<Index>{1, 3}));
  EXPECT_EQ(est.pattern.signs(), (std::vector<int>{1, -1}));
  EXPECT_EQ(est.pattern.indices(), est.E);
  EXPECT_NEAR(est.omega, 0.5, 1e-15);
  EXPECT_NEAR(est.l_E, 1.0, 1e-12);
  EXPECT_NEAR(est.l_E_hat, 1.0, 1e-12);
  EXPECT_EQ(est.in_E, (std::vector<bool>{true, false, true, false}));
}

TEST(EstimateActiveSet, ZeroSolutionRegime) {
  const Vector b = vec({0.3, -0.2, 0.1});
  const auto inst = identity_instance(b, 1.0);
  const auto est = estimate_active_set(inst, Vector::Zero(3));
  EXPECT_TRUE(est.E.empty());
  EXPECT_EQ(est.l_E, 0.0);
  EXPECT_EQ(est.l_E_hat, 0.0);
  EXPECT_NEAR(est.omega, 0.7, 1e-15);
}

TEST(EstimateActiveSet, StaleSolutionRejected) {
  const IdentityExample ex;
  EXPECT_THROW(estimate_active_set(ex.inst, vec({0.9, 0, -2, 0})), StaleSolution);
}

TEST(EstimateActiveSet, DeskInstanceStructure) {
  for (const std::uint64_t seed : {1u, 2u, 3u}) {
    const auto gen = desk_instance(seed);
    const auto ref = high_accuracy_solve(gen.instance);
    const auto est = estimate_active_set(gen.instance, ref.x_star);
    for (Index i = 0; i < ref.x_star.size(); ++i) {
      if (ref.x_star[i] != 0.0) {
        EXPECT_TRUE(est.in_E[static_cast<std::size_t>(i)]);
      }
      EXPECT_LE(std::abs(est.h_star[i]), gen.instance.rho() + est.tol_E);
    }
    EXPECT_GT(est.omega, 0.0);
    EXPECT_GT(est.l_E, 0.0);
    EXPECT_LE(est.l_E_hat, gen.instance.lipschitz());
  }
}

TEST(Signature, AtSolutionIsClean) {
  const auto gen = desk_instance(4);
  const auto ref = high_accuracy_solve(gen.instance);
  const auto est = estimate_active_set(gen.instance, ref.x_star);
  const double L = gen.instance.lipschitz();
  for (const double lambda : {0.3 / L, 1.0 / L}) {
    EXPECT_TRUE(signature(gen.instance, est, ref.x_star, ref.x_star, lambda).identified());
  }
}

TEST(Signature, FlippedSignDetected) {
  const IdentityExample ex;
  const auto est = estimate_active_set(ex.inst, ex.x_star);
  const Vector x = vec({-1, 0, -2, 0});
  // At lambda = 1 the forward point is b whatever x is; a short step keeps the flip.
  EXPECT_EQ(signature(ex.inst, est, x, x, 0.1).sign_mismatches_on_E, 1);
  EXPECT_EQ(signature(ex.inst, est, x, x, 1.0).sign_mismatches_on_E, 0);
}

TEST(Signature, MatchesBruteForceAlongTrajectory) {
  std::mt19937_64 rng(3);
  const Vector b = random_vector(rng, 12, 2.0);
  const double rho = 1.0;
  DenseMatrix A = DenseMatrix::Identity(12, 12);
  A(0, 1) = 0.3;
  A(4, 7) = -0.2;
  const LassoInstance inst(A, b, rho);
  const auto ref = high_accuracy_solve(inst);
  const auto est = estimate_active_set(inst, ref.x_star);
  const double lambda = 1.0 / inst.lipschitz();
  std::int64_t compared = 0;
  run(inst, FixedIfbs{0.6, lambda}, random_vector(rng, 12, 3.0), StoppingRule::max_iters(40),
      [&](const IterationRecord&, const IterateView& v) {
        const Signature fast = signature(inst, est, v.state.x_curr, v.points.y, lambda);
        const Signature slow =
            brute_force_signature(inst, est.h_star, est.tol_E, v.state.x_curr, v.points.y, lambda);
        EXPECT_EQ(fast.support_outside_E, slow.support_outside_E);
        EXPECT_EQ(fast.sign_mismatches_on_E, slow.sign_mismatches_on_E);
        EXPECT_EQ(signature_from_forward(est, v.state.x_curr, v.points.forward).support_outside_E,
                  slow.support_outside_E);
        ++compared;
      });
  EXPECT_EQ(compared, 40);
}

TEST(IdentificationIteration, Definition) {
  ManifoldTrace clean;
  for (int k = 1; k <= 10; ++k) clean.push(k, {});
  EXPECT_EQ(identification_iteration(clean), 1);

  ManifoldTrace late;
  for (int k = 1; k <= 60; ++k) late.push(k, k <= 37 ? Signature{2, 0} : Signature{});
  EXPECT_EQ(identification_iteration(late), 38);
  EXPECT_EQ(late.total_support_outside(), 74);

  ManifoldTrace open;
  for (int k = 1; k <= 5; ++k) open.push(k, Signature{0, k == 5 ? 1 : 0});
  EXPECT_FALSE(identification_iteration(open).has_value());
  EXPECT_EQ(identification_iteration(ManifoldTrace{}), 1);
}

TEST(ReducedModel, GradientVanishesAtSolution) {
  const IdentityExample ex;
  const auto est = estimate_active_set(ex.inst, ex.x_star);
  EXPECT_LE(reduced_gradient(ex.inst, est, vec({1, -2})).norm(), 1e-15);
  EXPECT_THROW(reduced_gradient(ex.inst, est, vec({1, -2, 3})), InvalidInput);

  const auto gen = desk_instance(5);
  const auto ref = high_accuracy_solve(gen.instance);
  const auto dest = estimate_active_set(gen.instance, ref.x_star);
  const Vector g = reduced_gradient(gen.instance, dest, restrict_to_E(dest, ref.x_star));
  // Zero on the support; coordinates of E at zero see at most tol_E.
  for (std::size_t j = 0; j < dest.E.size(); ++j) {
    const double tol = ref.x_star[dest.E[j]] != 0.0 ? 1e-9 : dest.tol_E + 1e-9;
    EXPECT_LE(std::abs(g[static_cast<Index>(j)]), tol);
  }
}

TEST(ReducedModel, FullSetDegeneratesToLassoGradientShift) {
  // With E = everything, grad phi = rho * pattern + grad f.
  const Vector b = vec({3, -4});
  const auto inst = identity_instance(b, 1.0);
  const Vector x_star = identity_lasso_solution(b, 1.0);
  const auto est = estimate_active_set(inst, x_star);
  ASSERT_EQ(est.E.size(), 2u);
  const Vector x = vec({0.5, -0.25});
  Vector expected = inst.grad_f(x);
  expected[0] += 1.0;
  expected[1] -= 1.0;
  EXPECT_LE((reduced_gradient(inst, est, x) - expected).norm(), 1e-15);
}

TEST(ReducedModel, VerifyUpdateExamples) {
  const IdentityExample ex;
  const auto est = estimate_active_set(ex.inst, ex.x_star);
  const double lambda = 1.0 / ex.inst.lipschitz();
  const Vector xE = restrict_to_E(est, ex.x_star);
  EXPECT_TRUE(verify_reduced_update(ex.inst, est, xE, xE, lambda));
  // A pre-identification point with the wrong sign on E does not follow the
  // reduced update.
  const Vector y = vec({-1, 0, -2, 0});
  const double short_step = 0.1 * lambda;
  const Vector x_next = ex.inst.prox_g(y - short_step * ex.inst.grad_f(y), short_step);
  EXPECT_NEAR(x_next[0], -0.6, 1e-7);
  EXPECT_FALSE(verify_reduced_update(ex.inst, est, restrict_to_E(est, x_next),
                                     restrict_to_E(est, y), short_step));
}

TEST(ReducedModel, PostIdentificationStepsFollowReducedUpdate) {
  const IdentityExample ex;
  const auto est = estimate_active_set(ex.inst, ex.x_star);
  const double lambda = 1.0 / ex.inst.lipschitz();
  std::int64_t checked = 0;
  run(ex.inst, FixedIfbs{0.5, lambda}, vec({-3, 2, 1, 4}), StoppingRule::max_iters(60),
      [&](const IterationRecord& r, const IterateView& v) {
        if (r.k < 20) return;
        ASSERT_EQ(v.state.x_curr[1], 0.0);
        ASSERT_EQ(v.state.x_curr[3], 0.0);
        EXPECT_TRUE(verify_reduced_update(ex.inst, est, restrict_to_E(est, v.state.x_curr),
                                          restrict_to_E(est, v.points.y), lambda));
        ++checked;
      });
  EXPECT_EQ(checked, 41);
}

TEST(ReducedModel, ObjectiveEqualsPhiOnManifold) {
  const auto gen = desk_instance(6);
  const auto& inst = gen.instance;
  const auto ref = high_accuracy_solve(inst);
  const auto est = estimate_active_set(inst, ref.x_star);
  EXPECT_LE(check_objective_equals_phi(inst, est, ref.x_star), 1e-10 * (1.0 + ref.F_star));

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> mag(0.0, 2.0);
  for (int t = 0; t < 50; ++t) {
    Vector x = Vector::Zero(inst.cols());
    for (std::size_t j = 0; j < est.E.size(); ++j) {
      x[est.E[j]] = est.pattern.signs()[j] * mag(rng);
    }
    const double F = lasso_objective(inst, x);
    EXPECT_LE(check_objective_equals_phi(inst, est, x), 1e-10 * (1.0 + std::abs(F)));
  }
  Vector bad = ref.x_star;
  bad[est.E.front()] = -est.pattern.signs().front() * 0.5;
  EXPECT_GT(check_objective_equals_phi(inst, est, bad), 1e-3);
}

TEST(FixedPointResidual, Examples) {
  const auto inst = identity_instance(vec({2, 0}), 1.0);
  EXPECT_NEAR(fixed_point_residual(inst, vec({0, 0}), 1.0), 1.0, 1e-7);
  const auto quad = identity_instance(vec({0, 0, 0}), 1e-300);
  EXPECT_NEAR(fixed_point_residual(quad, vec({1, -2, 3}), 1.0), 3.0, 1e-15);
  EXPECT_EQ(fixed_point_residual(quad, vec({0, 0, 0}), 1.0), 0.0);
  const auto gen = desk_instance(8);
  const auto ref = high_accuracy_solve(gen.instance);
  EXPECT_LE(fixed_point_residual(gen.instance, ref.x_star, 1.0 / gen.instance.lipschitz()), 1e-8);
}

TEST(EstimateRate, SyntheticGeometric) {
  std::vector<double> e;
  for (int k = 0; k < 200; ++k) e.push_back(3.0 * std::pow(0.9, k));
  const auto r = estimate_rate(e, {50, 150});
  EXPECT_NEAR(r.q_hat, 0.9, 1e-10);
  EXPECT_EQ(r.k_start, 50);
  EXPECT_EQ(r.k_end, 149);
  EXPECT_LE(r.fit_residual, 1e-9);
  EXPECT_TRUE(std::isnan(r.predicted_q));
}

TEST(EstimateRate, SyntheticNoisy) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> noise(-1.0, 1.0);
  std::vector<double> e;
  for (int k = 0; k < 200; ++k) e.push_back(3.0 * std::pow(0.9, k) * (1.0 + 0.01 * noise(rng)));
  EXPECT_NEAR(estimate_rate(e, {0, 200}).q_hat, 0.9, 0.005);
}

TEST(EstimateRate, RejectsBadInput) {
  std::vector<double> e(40, 1.0);
  EXPECT_THROW(estimate_rate(e, {0, 10}), InvalidInput);
  EXPECT_THROW(estimate_rate(e, {0, 41}), InvalidInput);
  e[5] = 0.0;
  EXPECT_THROW(estimate_rate(e, {0, 40}), InvalidInput);
}

TEST(SelectRateWindow, TailAboveFloor) {
  std::vector<double> e;
  for (int k = 0; k < 400; ++k) e.push_back(std::max(std::pow(0.9, k), 1e-20));
  const auto w = select_rate_window(e, 100, 1.0);
  ASSERT_TRUE(w.has_value());
  const double floor = 1e2 * std::numeric_limits<double>::epsilon();
  EXPECT_GT(e[w->end - 1], floor);
  EXPECT_LE(e[w->end], floor);
  EXPECT_GE(w->size(), kMinRateWindow);
  EXPECT_FALSE(select_rate_window(e, 390, 1.0).has_value());
}

TEST(HStar, IndependentSolvesAgree) {
  std::mt19937_64 rng(12);
  const auto gen = desk_instance(9);
  const auto& inst = gen.instance;
  const auto ref = high_accuracy_solve(inst);
  StoppingRule stop = StoppingRule::max_iters(200'000);
  stop.with_fixed_point(1e-12);
  const auto other = run_with_restart(inst, FistaCd{2.1, 1.0 / inst.lipschitz()},
                                      random_vector(rng, inst.cols(), 2.0), stop);
  ASSERT_EQ(other.status, RunStatus::FixedPointReached);
  EXPECT_LE((inst.grad_f(ref.x_star) - inst.grad_f(other.final)).lpNorm<Eigen::Infinity>(), 1e-6);
}
