#pragma once

#include "robustdp/types.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace robustdp {

inline constexpr double kRowSumTolerance = 1e-12;
inline constexpr double kNegativeEntryTolerance = 1e-15;

/// Finite set of candidate transition rows for one (state, joint action).
/// Candidates are stored whole (one per matrix row) because only a full row is
/// a probability distribution; entries of a row never vary independently.
class RowDistributionSet {
 public:
  RowDistributionSet() = default;
  explicit RowDistributionSet(Eigen::MatrixXd candidates) : candidates_(std::move(candidates)) {}

  const Eigen::MatrixXd& candidates() const { return candidates_; }
  int size() const { return static_cast<int>(candidates_.rows()); }
  auto row(int i) const { return candidates_.row(i); }

  /// Number of bitwise-distinct candidates.
  int distinct_count() const;

 private:
  Eigen::MatrixXd candidates_;
};

struct RawPayoff {
  int s = 0;
  std::vector<int> a;
  int s_next = 0;
  /// Either one team payoff or one payoff per player (averaged on load).
  std::vector<double> r;
};

struct RawUncertainty {
  int s = 0;
  std::vector<int> a;
  std::vector<std::vector<double>> rows;
};

/// Unvalidated game description, as parsed from a file or produced by a
/// generator.
struct RawGame {
  int n_players = 0;
  std::vector<std::string> states;
  std::vector<std::vector<std::string>> player_actions;
  std::optional<double> default_payoff;
  std::vector<RawPayoff> payoffs;
  std::vector<RawUncertainty> uncertainty;
  std::optional<double> r_max;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

/// Robust team Markov game with finite states, actions and rectangular
/// uncertainty. Immutable once validated.
class TeamMarkovGame {
 public:
  int num_players() const { return static_cast<int>(player_actions_.size()); }
  int num_states() const { return static_cast<int>(states_.size()); }
  int num_joint_actions() const { return num_joint_; }

  const std::vector<std::string>& states() const { return states_; }
  const std::vector<std::vector<std::string>>& player_actions() const { return player_actions_; }

  /// Team payoff r(s, a, .) for every joint action a: a |A| x m matrix.
  const Eigen::MatrixXd& payoff(int s) const { return payoff_[static_cast<std::size_t>(s)]; }
  double payoff(int s, int a, int s_next) const { return payoff_[static_cast<std::size_t>(s)](a, s_next); }

  const RowDistributionSet& uncertainty(int s, int a) const {
    return uncertainty_[static_cast<std::size_t>(s * num_joint_ + a)];
  }

  double r_max() const { return r_max_; }
  /// min over (s, a, s') of r(s, a, s').
  double min_payoff() const { return min_payoff_; }

  std::vector<int> decode_joint_action(int a) const;
  int encode_joint_action(std::span<const int> per_player) const;
  /// e.g. "CCD"; names are joined with '+' unless all are single characters.
  std::string joint_action_label(int a) const;

 private:
  friend TeamMarkovGame validate_game(const RawGame& raw);
  TeamMarkovGame() = default;

  std::vector<std::string> states_;
  std::vector<std::vector<std::string>> player_actions_;
  int num_joint_ = 0;
  std::vector<Eigen::MatrixXd> payoff_;
  std::vector<RowDistributionSet> uncertainty_;
  double r_max_ = 0.0;
  double min_payoff_ = 0.0;
};

/// Validates and freezes a raw description. Throws ValidationError carrying
/// every problem found, not just the first.
TeamMarkovGame validate_game(const RawGame& raw);

/// Converts a validated game back to its raw form (team payoffs, every triple
/// listed explicitly).
RawGame to_raw(const TeamMarkovGame& game);

}  // namespace robustdp
