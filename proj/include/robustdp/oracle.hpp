#pragma once

#include "robustdp/game.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace robustdp {

/// How the oracle computes the worst case of a fixed rule.
enum class InnerMinimization {
  /// Row-wise fixed point (evaluate_policy_robust).
  fixed_point,
  /// Componentwise min of dense evaluations over every admissible matrix.
  enumeration,
};

struct OracleOptions {
  std::uint64_t budget = kDefaultEnumerationBudget;
  InnerMinimization inner = InnerMinimization::fixed_point;
  bool keep_per_rule_values = false;
};

struct OracleResult {
  ValueFunction v_star;
  /// First rule (in enumeration order) attaining v_star in every component.
  /// When no single rule dominates this is the rule closest to v_star.
  TeamDecisionRule d_star;
  bool dominance_ok = false;
  /// max_s (v_star(s) - value of d_star at s); zero when dominance_ok.
  double dominance_gap = 0.0;
  std::uint64_t rules_evaluated = 0;
  /// Robust value of every rule, in enumeration order, when requested.
  std::vector<ValueFunction> per_rule_values;
};

/// Exhaustive maximin over all deterministic team decision rules.
OracleResult brute_force_maximin(const TeamMarkovGame& game, double lambda, const OracleOptions& options = {});

/// Worst-case value of rule by enumerating every admissible transition matrix.
ValueFunction robust_value_by_enumeration(const TeamMarkovGame& game, const TeamDecisionRule& rule, double lambda,
                                          std::uint64_t budget = kDefaultEnumerationBudget);

struct EpsilonReport {
  bool ok = false;
  /// max_s (v_star(s) - worst-case value of the rule at s).
  double gap = 0.0;
  int worst_state = 0;
  ValueFunction rule_value;
};

/// Checks worst-case value(rule) >= v_star - epsilon componentwise.
EpsilonReport verify_epsilon_optimal(const TeamMarkovGame& game, const TeamDecisionRule& rule, double lambda,
                                     double epsilon, const OracleResult& oracle);
EpsilonReport verify_epsilon_optimal(const TeamMarkovGame& game, const TeamDecisionRule& rule, double lambda,
                                     double epsilon, std::uint64_t budget = kDefaultEnumerationBudget);

}  // namespace robustdp
