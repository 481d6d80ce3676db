#pragma once

#include "robustdp/game.hpp"

#include <cstdint>
#include <functional>

namespace robustdp {

/// |A|^m, saturating at UINT64_MAX.
std::uint64_t count_decision_rules(const TeamMarkovGame& game);

/// Product over states of the candidate counts for the rows rule selects.
std::uint64_t count_policy_models(const TeamMarkovGame& game, const TeamDecisionRule& rule);

/// Visits every deterministic team decision rule exactly once, in
/// lexicographic order of (d(s^1), ..., d(s^m)). Throws BudgetExceeded before
/// visiting anything if |A|^m > budget.
void for_each_decision_rule(const TeamMarkovGame& game, const std::function<void(const TeamDecisionRule&)>& visit,
                            std::uint64_t budget = kDefaultEnumerationBudget);

/// Visits every admissible model for rule: row k drawn from
/// uncertainty(s^k, rule(s^k)). With deduplicate set, candidates that are
/// bitwise copies of an earlier candidate in the same set are skipped.
void for_each_policy_model(const TeamMarkovGame& game, const TeamDecisionRule& rule,
                           const std::function<void(const ModelSelection&)>& visit,
                           std::uint64_t budget = kDefaultEnumerationBudget, bool deduplicate = false);

/// Dense transition matrix P_d for a rule and row selection.
Eigen::MatrixXd policy_matrix(const TeamMarkovGame& game, const TeamDecisionRule& rule, const ModelSelection& model);

/// Expected one-step team payoff r_(d,P_d)(s) = sum_s' r(s, d(s), s') P_d(s, s').
Eigen::VectorXd policy_reward(const TeamMarkovGame& game, const TeamDecisionRule& rule, const ModelSelection& model);

}  // namespace robustdp
