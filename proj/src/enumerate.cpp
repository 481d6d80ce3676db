#include "robustdp/enumerate.hpp"

#include <limits>

namespace robustdp {

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

// Advances a mixed-radix counter whose last digit varies fastest. Returns
// false after the last combination.
bool advance(std::vector<int>& digits, const std::vector<int>& radix) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < radix[i]) return true;
    digits[i] = 0;
  }
  return false;
}

}  // namespace

std::uint64_t count_decision_rules(const TeamMarkovGame& game) {
  std::uint64_t count = 1;
  for (int s = 0; s < game.num_states(); ++s) {
    count = saturating_mul(count, static_cast<std::uint64_t>(game.num_joint_actions()));
  }
  return count;
}

std::uint64_t count_policy_models(const TeamMarkovGame& game, const TeamDecisionRule& rule) {
  std::uint64_t count = 1;
  for (int s = 0; s < game.num_states(); ++s) {
    count = saturating_mul(count, static_cast<std::uint64_t>(game.uncertainty(s, rule(s)).size()));
  }
  return count;
}

void for_each_decision_rule(const TeamMarkovGame& game, const std::function<void(const TeamDecisionRule&)>& visit,
                            std::uint64_t budget) {
  const std::uint64_t count = count_decision_rules(game);
  if (count > budget) throw BudgetExceeded("decision rule enumeration", count);
  const int m = game.num_states();
  TeamDecisionRule rule{std::vector<int>(static_cast<std::size_t>(m), 0)};
  const std::vector<int> radix(static_cast<std::size_t>(m), game.num_joint_actions());
  do {
    visit(rule);
  } while (advance(rule.choice, radix));
}

void for_each_policy_model(const TeamMarkovGame& game, const TeamDecisionRule& rule,
                           const std::function<void(const ModelSelection&)>& visit, std::uint64_t budget,
                           bool deduplicate) {
  const int m = game.num_states();
  // Per state, the candidate indices that take part in the product.
  std::vector<std::vector<int>> options(static_cast<std::size_t>(m));
  std::uint64_t count = 1;
  for (int s = 0; s < m; ++s) {
    const auto& set = game.uncertainty(s, rule(s));
    auto& opts = options[static_cast<std::size_t>(s)];
    for (int j = 0; j < set.size(); ++j) {
      bool duplicate = false;
      if (deduplicate) {
        for (int i : opts) {
          if ((set.row(i).array() == set.row(j).array()).all()) {
            duplicate = true;
            break;
          }
        }
      }
      if (!duplicate) opts.push_back(j);
    }
    count = saturating_mul(count, opts.size());
  }
  if (count > budget) throw BudgetExceeded("policy model enumeration", count);

  std::vector<int> digits(static_cast<std::size_t>(m), 0);
  std::vector<int> radix(static_cast<std::size_t>(m));
  for (int s = 0; s < m; ++s) radix[static_cast<std::size_t>(s)] = static_cast<int>(options[static_cast<std::size_t>(s)].size());
  ModelSelection model{std::vector<int>(static_cast<std::size_t>(m))};
  do {
    for (int s = 0; s < m; ++s) {
      model.row[static_cast<std::size_t>(s)] =
          options[static_cast<std::size_t>(s)][static_cast<std::size_t>(digits[static_cast<std::size_t>(s)])];
    }
    visit(model);
  } while (advance(digits, radix));
}

Eigen::MatrixXd policy_matrix(const TeamMarkovGame& game, const TeamDecisionRule& rule, const ModelSelection& model) {
  const int m = game.num_states();
  Eigen::MatrixXd P(m, m);
  for (int s = 0; s < m; ++s) P.row(s) = game.uncertainty(s, rule(s)).row(model(s));
  return P;
}

Eigen::VectorXd policy_reward(const TeamMarkovGame& game, const TeamDecisionRule& rule, const ModelSelection& model) {
  const int m = game.num_states();
  Eigen::VectorXd r(m);
  for (int s = 0; s < m; ++s) {
    r(s) = game.payoff(s).row(rule(s)).dot(game.uncertainty(s, rule(s)).row(model(s)));
  }
  return r;
}

}  // namespace robustdp
