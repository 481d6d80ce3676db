#pragma once

#include "robustdp/game.hpp"

#include <string>
#include <vector>

namespace robustdp::rssd {

/// Stage game played in a state of the robust sequential social dilemma.
enum class StageGame { public_goods, stag_hunt, snowdrift };

std::string to_string(StageGame g);

struct RssdParams {
  int n = 3;
  double c = 1.0;
  /// Synergy factor r_s per (next) state.
  std::vector<double> synergy = {1.5, 1.8, 2.2};
  /// Snowdrift benefit per (next) state.
  std::vector<double> benefit = {1.5, 1.8, 2.2};
  /// Stag-hunt cooperation threshold.
  int threshold = 2;
  /// Uncertainty magnitudes; one candidate row per entry.
  std::vector<double> mu = {0.1, 0.2, 0.3};
  /// Stage game of each state; the state count is its size.
  std::vector<StageGame> stages = {StageGame::public_goods, StageGame::stag_hunt, StageGame::snowdrift};

  int num_states() const { return static_cast<int>(stages.size()); }
};

/// Parameter problems, empty when valid.
std::vector<std::string> validate(const RssdParams& params);

/// Payoffs of a cooperator (a) and a defector (b) when `cooperators` players
/// cooperate in `state` and the game moves to `next_state`.
struct StagePayoff {
  double cooperator = 0.0;
  double defector = 0.0;
};
StagePayoff payoff(const RssdParams& params, int state, int cooperators, int next_state);

/// Team-average payoff (h a_h + (n - h) b_h) / n.
double team_payoff(const RssdParams& params, int state, int cooperators, int next_state);

/// Candidate transition row out of state k with h cooperators and magnitude mu:
/// 1 - mu h on k, mu h / (m - 1) on every other state.
Eigen::RowVectorXd transition_row(const RssdParams& params, int k, int cooperators, double mu);

/// Builds the game: actions {C, D} per player (C = index 0), one candidate row
/// per mu for every (state, joint action). Throws std::invalid_argument on
/// invalid parameters.
TeamMarkovGame build_rssd(const RssdParams& params);

struct DilemmaViolation {
  int condition = 0;  // 1: monotone payoffs, 2: defectors earn more, 3: full cooperation beats full defection
  int state = 0;
  int cooperators = 0;
  int next_state = 0;
  std::string detail;
};

struct DilemmaReport {
  std::vector<DilemmaViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks, for every (state, next state):
///  (1) a_{h+1} >= a_h for 1 <= h < n and b_{h+1} >= b_h for 0 <= h < n - 1,
///  (2) b_h > a_h for mixed groups 1 <= h <= n - 1,
///  (3) a_n > b_0.
DilemmaReport check_dilemma_conditions(const RssdParams& params);

}  // namespace robustdp::rssd
