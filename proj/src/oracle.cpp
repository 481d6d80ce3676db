#include "robustdp/oracle.hpp"

#include "robustdp/enumerate.hpp"
#include "robustdp/solvers.hpp"

#include <spdlog/spdlog.h>

#include <limits>

namespace robustdp {

namespace {

// Values that agree to this (relative) precision are treated as the same
// maximum; both inner routes are exact up to rounding of a dense solve.
constexpr double kAttainmentTolerance = 1e-10;

ValueFunction robust_value(const TeamMarkovGame& game, const TeamDecisionRule& rule, double lambda,
                           const OracleOptions& options) {
  if (options.inner == InnerMinimization::enumeration) {
    return robust_value_by_enumeration(game, rule, lambda, options.budget);
  }
  return evaluate_policy_robust(game, rule, lambda, 1e-12).value;
}

}  // namespace

ValueFunction robust_value_by_enumeration(const TeamMarkovGame& game, const TeamDecisionRule& rule, double lambda,
                                          std::uint64_t budget) {
  ValueFunction best = ValueFunction::Constant(game.num_states(), std::numeric_limits<double>::infinity());
  for_each_policy_model(
      game, rule,
      [&](const ModelSelection& model) { best = best.cwiseMin(evaluate_policy_exact(game, rule, model, lambda)); },
      budget);
  return best;
}

OracleResult brute_force_maximin(const TeamMarkovGame& game, double lambda, const OracleOptions& options) {
  const int m = game.num_states();
  OracleResult out;
  out.v_star = ValueFunction::Constant(m, -std::numeric_limits<double>::infinity());

  std::vector<ValueFunction> values;
  std::vector<TeamDecisionRule> rules;
  for_each_decision_rule(
      game,
      [&](const TeamDecisionRule& rule) {
        ValueFunction v = robust_value(game, rule, lambda, options);
        out.v_star = out.v_star.cwiseMax(v);
        values.push_back(std::move(v));
        rules.push_back(rule);
      },
      options.budget);
  out.rules_evaluated = values.size();

  // First rule attaining the componentwise max everywhere; otherwise the one
  // with the smallest shortfall.
  double best_gap = std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double gap = (out.v_star - values[i]).maxCoeff();
    const double tol = kAttainmentTolerance * (1.0 + sup_norm(out.v_star));
    if (gap <= tol) {
      best_index = i;
      best_gap = 0.0;
      out.dominance_ok = true;
      break;
    }
    if (gap < best_gap) {
      best_gap = gap;
      best_index = i;
    }
  }
  out.d_star = rules[best_index];
  out.dominance_gap = best_gap;
  if (!out.dominance_ok) {
    spdlog::warn("oracle: no single rule attains the componentwise maximum (closest shortfall {})", best_gap);
  }
  if (options.keep_per_rule_values) out.per_rule_values = std::move(values);
  return out;
}

EpsilonReport verify_epsilon_optimal(const TeamMarkovGame& game, const TeamDecisionRule& rule, double lambda,
                                     double epsilon, const OracleResult& oracle) {
  EpsilonReport report;
  report.rule_value = evaluate_policy_robust(game, rule, lambda, 1e-12).value;
  const ValueFunction shortfall = oracle.v_star - report.rule_value;
  Eigen::Index worst = 0;
  report.gap = shortfall.maxCoeff(&worst);
  report.worst_state = static_cast<int>(worst);
  report.ok = report.gap <= epsilon;
  return report;
}

EpsilonReport verify_epsilon_optimal(const TeamMarkovGame& game, const TeamDecisionRule& rule, double lambda,
                                     double epsilon, std::uint64_t budget) {
  OracleOptions options;
  options.budget = budget;
  return verify_epsilon_optimal(game, rule, lambda, epsilon, brute_force_maximin(game, lambda, options));
}

}  // namespace robustdp
