#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace robustdp {

/// Value function over the ordered state list. The state order is also the
/// Gauss-Seidel sweep order.
using ValueFunction = Eigen::VectorXd;

/// Sup-norm, the metric every convergence statement in this library uses.
inline double sup_norm(const Eigen::Ref<const Eigen::VectorXd>& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

/// One joint-action index per state. Joint actions are mixed-radix encoded
/// with player 0 as the most significant digit.
struct TeamDecisionRule {
  std::vector<int> choice;

  int operator()(int state) const { return choice[static_cast<std::size_t>(state)]; }
  int size() const { return static_cast<int>(choice.size()); }
  friend bool operator==(const TeamDecisionRule&, const TeamDecisionRule&) = default;
};

/// One candidate-row index per state: selects a transition matrix out of the
/// rectangular product for a fixed decision rule.
struct ModelSelection {
  std::vector<int> row;

  int operator()(int state) const { return row[static_cast<std::size_t>(state)]; }
  int size() const { return static_cast<int>(row.size()); }
  friend bool operator==(const ModelSelection&, const ModelSelection&) = default;
};

/// Raised when an enumeration would exceed the caller's budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t count)
      : std::runtime_error(what + ": " + std::to_string(count) + " items exceed budget"),
        count_(count) {}

  std::uint64_t count() const { return count_; }

 private:
  std::uint64_t count_;
};

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

}  // namespace robustdp
