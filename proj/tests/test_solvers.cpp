#include "robustdp/enumerate.hpp"
#include "robustdp/rssd.hpp"
#include "robustdp/solvers.hpp"

#include "support/test_games.hpp"

#include <gtest/gtest.h>

using namespace robustdp;
namespace ts = testing_support;

namespace {

SolverParams params_for(double lambda, double epsilon, int sweeps) {
  SolverParams p;
  p.lambda = lambda;
  p.epsilon = epsilon;
  p.inner_sweeps = InnerSweepSchedule::constant(sweeps);
  return p;
}

SolverParams table_params(double lambda, int sweeps) {
  SolverParams p = params_for(lambda, 1e-5, sweeps);
  p.delta = 0.99 * max_delta(lambda, 1e-5);
  return p;
}

std::vector<double> residuals(const SolverResult& r) {
  std::vector<double> out;
  for (const auto& e : r.trace.entries) out.push_back(e.residual);
  return out;
}

}  // namespace

TEST(Params, Validation) {
  SolverParams p;
  EXPECT_NO_THROW(validate_params(p));
  p.lambda = 1.0;
  EXPECT_THROW(validate_params(p), InvalidParams);
  p = SolverParams{};
  p.epsilon = 0.0;
  EXPECT_THROW(validate_params(p), InvalidParams);
  p = SolverParams{};
  p.delta = max_delta(p.lambda, p.epsilon);
  EXPECT_THROW(validate_params(p), InvalidParams);
  p.delta = 0.5 * max_delta(p.lambda, p.epsilon);
  p.approx = PerturbationOracle(PerturbationMode::uniform_noise, 2.0 * p.lambda * p.delta, 0);
  EXPECT_THROW(validate_params(p), InvalidParams);
  p.approx = PerturbationOracle(PerturbationMode::uniform_noise, p.lambda * p.delta, 0);
  EXPECT_NO_THROW(validate_params(p));
  EXPECT_TRUE(std::isinf(termination_threshold(0.0, 1e-5, 0.0)));
}

TEST(Params, InnerSweepSchedules) {
  EXPECT_EQ(InnerSweepSchedule::constant(5)(100), 5);
  const auto list = InnerSweepSchedule::list({1, 3, 5});
  EXPECT_EQ(list(0), 1);
  EXPECT_EQ(list(2), 5);
  EXPECT_EQ(list(9), 5);
  EXPECT_EQ(list.describe(), "1,3,5");
  EXPECT_TRUE(InnerSweepSchedule::constant(0).is_zero());
  EXPECT_FALSE(list.is_zero());
  EXPECT_THROW(InnerSweepSchedule::list({-1}), InvalidParams);
  const auto grow = InnerSweepSchedule::formula([](int t) { return t; }, "t");
  EXPECT_EQ(grow(7), 7);
  EXPECT_EQ(grow.describe(), "t");
}

TEST(Params, InitialValues) {
  const TeamMarkovGame g = rssd::build_rssd({});
  const ValueFunction v0 = InitialValue::payoff_lower_bound().resolve(g, 0.9);
  EXPECT_TRUE(v0.isApproxToConstant(g.min_payoff() / 0.1));
  EXPECT_TRUE(InitialValue::zeros().resolve(g, 0.9).isZero(0.0));
  EXPECT_THROW(InitialValue::from(Eigen::VectorXd::Zero(2)).resolve(g, 0.9), InvalidParams);
  EXPECT_EQ(InitialValue::from(Eigen::VectorXd::Ones(3)).describe(), "explicit");
}

TEST(Solvers, SingletonGameTerminatesImmediately) {
  const TeamMarkovGame g = ts::chain_game(Eigen::MatrixXd::Ones(1, 1), Eigen::MatrixXd::Constant(1, 1, 3.0));
  for (Algorithm algo : {Algorithm::ratpi, Algorithm::ratvi, Algorithm::rvi, Algorithm::rmpi}) {
    const SolverResult r = solve(algo, g, params_for(0.8, 1e-6, 5));
    EXPECT_TRUE(r.terminated);
    EXPECT_LE(r.iterations, 2);
    EXPECT_NEAR(r.value(0), 3.0 / 0.2, 1e-12);
  }
}

TEST(Solvers, MarkovChainValue) {
  Eigen::MatrixXd P(3, 3);
  P << 0.2, 0.5, 0.3, 0.6, 0.1, 0.3, 0.1, 0.4, 0.5;
  Eigen::MatrixXd r(3, 3);
  r << 1, 2, 3, -1, 0, 1, 0.5, 0.5, 0.5;
  const TeamMarkovGame g = ts::chain_game(P, r);
  const Eigen::VectorXd exact = ts::reference_policy_value(g, {0, 0, 0}, {0, 0, 0}, 0.9);
  for (Algorithm algo : {Algorithm::ratpi, Algorithm::ratvi, Algorithm::rvi, Algorithm::rmpi}) {
    const SolverResult res = solve(algo, g, params_for(0.9, 1e-6, 3));
    ASSERT_TRUE(res.terminated);
    EXPECT_LE(sup_norm(res.trace.entries.back().value - exact), 1e-6) << to_string(algo);
    EXPECT_LE(sup_norm(res.value - exact), 1e-12);
  }
}

TEST(Solvers, ZeroInnerSweepsDegenerate) {
  const TeamMarkovGame g = rssd::build_rssd({});
  const SolverParams p = table_params(0.97, 0);
  EXPECT_EQ(residuals(solve_ratpi(g, p)), residuals(solve_ratvi(g, p)));
  EXPECT_EQ(residuals(solve_rmpi(g, p)), residuals(solve_rvi(g, p)));
  const SolverResult a = solve_ratpi(g, p);
  const SolverResult b = solve_ratvi(g, p);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.policy, b.policy);
}

TEST(Solvers, RandomGamesMatchReference) {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const TeamMarkovGame g = ts::random_game(seed, {3, 1, 2, 3, false});
    const double lambda = 0.9;
    const Eigen::VectorXd v_star = ts::reference_optimum(g, lambda).v_star;
    for (Algorithm algo : {Algorithm::ratpi, Algorithm::ratvi, Algorithm::rvi, Algorithm::rmpi}) {
      const SolverResult r = solve(algo, g, params_for(lambda, 1e-6, 5));
      ASSERT_TRUE(r.terminated);
      const Eigen::VectorXd policy_value = ts::reference_robust_value(g, r.policy.choice, lambda);
      EXPECT_GE((policy_value - v_star).minCoeff(), -1e-6) << "seed " << seed << " " << to_string(algo);
      EXPECT_LE(sup_norm(r.value - policy_value), 1e-10);
    }
  }
}

TEST(Solvers, MonotoneFromRemarkOne) {
  const TeamMarkovGame g = rssd::build_rssd({});
  for (Algorithm algo : {Algorithm::ratpi, Algorithm::ratvi}) {
    const SolverResult r = solve(algo, g, table_params(0.97, 5));
    for (std::size_t t = 1; t < r.trace.entries.size(); ++t) {
      EXPECT_GE((r.trace.entries[t].value - r.trace.entries[t - 1].value).minCoeff(), -1e-12);
    }
  }
}

TEST(Solvers, RssdIterationCounts) {
  const TeamMarkovGame g = rssd::build_rssd({});
  const int ratvi = solve_ratvi(g, table_params(0.97, 0)).iterations;
  const int rvi = solve_rvi(g, table_params(0.97, 0)).iterations;
  EXPECT_LT(ratvi, rvi);
  EXPECT_GT(ratvi, 446 / 2);
  EXPECT_LT(ratvi, 446 * 2);
  EXPECT_GT(rvi, 519 / 2);
  EXPECT_LT(rvi, 519 * 2);
  const int ratvi99 = solve_ratvi(g, table_params(0.99, 0)).iterations;
  EXPECT_GT(ratvi99, 1442 / 2);
  EXPECT_LT(ratvi99, 1442 * 2);
  const int ratpi = solve_ratpi(g, table_params(0.97, 50)).iterations;
  const int rmpi = solve_rmpi(g, table_params(0.97, 50)).iterations;
  EXPECT_LE(ratpi, rmpi);
  EXPECT_GT(ratpi, 10 / 2);
  EXPECT_LT(ratpi, 10 * 2);
  EXPECT_GT(rmpi, 12 / 2);
  EXPECT_LT(rmpi, 12 * 2);
}

TEST(Solvers, SingletonUncertaintyAlgorithmsAgree) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const TeamMarkovGame g = ts::random_game(seed, {4, 2, 2, 1, false});
    const SolverParams p = params_for(0.9, 1e-6, 2);
    const SolverResult a = solve_rvi(g, p);
    const SolverResult b = solve_ratvi(g, p);
    EXPECT_LE(sup_norm(a.trace.entries.back().value - b.trace.entries.back().value), 2e-6);
  }
}

TEST(Solvers, NonTerminationReported) {
  const TeamMarkovGame g = rssd::build_rssd({});
  SolverParams p = table_params(0.97, 0);
  p.max_iterations = 3;
  const SolverResult r = solve_ratvi(g, p);
  EXPECT_FALSE(r.terminated);
  EXPECT_EQ(r.iterations, 3);
  EXPECT_EQ(r.trace.entries.size(), 4u);
}

TEST(Solvers, PerturbedRunStaysEpsilonOptimal) {
  const TeamMarkovGame g = rssd::build_rssd({});
  const double lambda = 0.95;
  const Eigen::VectorXd v_star = ts::reference_optimum(g, lambda).v_star;
  for (auto mode : {PerturbationMode::uniform_noise, PerturbationMode::adversarial_extremes}) {
    for (bool lock : {false, true}) {
      SolverParams p = table_params(lambda, 5);
      p.approx = PerturbationOracle(mode, lambda * p.delta, 3, lock);
      const SolverResult r = solve_ratpi(g, p);
      ASSERT_TRUE(r.terminated);
      EXPECT_GE((r.value - v_star).minCoeff(), -1e-5);
    }
  }
}

TEST(Evaluation, SingletonRowsMatchDenseSolve) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const TeamMarkovGame g = ts::random_game(seed, {4, 2, 2, 1, false});
    const std::vector<int> rule(static_cast<std::size_t>(g.num_states()), g.num_joint_actions() - 1);
    const std::vector<int> rows(rule.size(), 0);
    const RobustEvaluation e = evaluate_policy_robust(g, {rule}, 0.95);
    EXPECT_LE(sup_norm(e.value - ts::reference_policy_value(g, rule, rows, 0.95)), 1e-12);
  }
}

TEST(Evaluation, AllDefectIsZero) {
  const TeamMarkovGame g = rssd::build_rssd({});
  const RobustEvaluation e = evaluate_policy_robust(g, {{7, 7, 7}}, 0.97);
  EXPECT_LE(sup_norm(e.value), 1e-15);
}

TEST(Evaluation, AgreesWithModelEnumeration) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const TeamMarkovGame g = ts::random_game(seed);
    std::mt19937_64 rng(seed);
    std::vector<int> rule;
    for (int s = 0; s < g.num_states(); ++s) {
      rule.push_back(std::uniform_int_distribution<int>(0, g.num_joint_actions() - 1)(rng));
    }
    const RobustEvaluation e = evaluate_policy_robust(g, {rule}, 0.97);
    const Eigen::VectorXd expected = ts::reference_robust_value(g, rule, 0.97);
    EXPECT_LE(sup_norm(e.value - expected), 1e-11 * (1.0 + sup_norm(expected)));
    EXPECT_LE(sup_norm(evaluate_policy_exact(g, {rule}, e.worst_model, 0.97) - e.value), 1e-12);
  }
}

TEST(Evaluation, ExactSolve) {
  const TeamMarkovGame one = ts::chain_game(Eigen::MatrixXd::Ones(1, 1), Eigen::MatrixXd::Ones(1, 1));
  EXPECT_NEAR(evaluate_policy_exact(one, {{0}}, {{0}}, 0.9)(0), 10.0, 1e-13);

  const TeamMarkovGame g = ts::random_game(3, {4, 2, 2, 3, true});
  const TeamDecisionRule d{{0, 1, 2, 3}};
  const ModelSelection p{{2, 1, 0, 2}};
  EXPECT_LE(sup_norm(evaluate_policy_exact(g, d, p, 0.0) - policy_reward(g, d, p)), 1e-15);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(4);
  for (int i = 0; i < 1000; ++i) x = apply_gs_policy_operator(g, d, p, x, 0.8);
  EXPECT_LE(sup_norm(evaluate_policy_exact(g, d, p, 0.8) - x), 1e-9);
}
