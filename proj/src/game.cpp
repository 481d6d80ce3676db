#include "robustdp/game.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <cmath>
#include <limits>
#include <set>

namespace robustdp {

namespace {

constexpr long long kMaxJointActions = 1LL << 24;

// Drift below this is left alone so that save/load stays idempotent.
constexpr double kRenormalizeThreshold = 1e-14;

std::string describe_action(const std::vector<int>& a) { return fmt::format("[{}]", fmt::join(a, ",")); }

}  // namespace

int RowDistributionSet::distinct_count() const {
  int distinct = 0;
  for (int i = 0; i < size(); ++i) {
    bool seen = false;
    for (int j = 0; j < i && !seen; ++j) {
      seen = (candidates_.row(i).array() == candidates_.row(j).array()).all();
    }
    if (!seen) ++distinct;
  }
  return distinct;
}

ValidationError::ValidationError(std::vector<std::string> errors)
    : std::runtime_error([&] {
        std::string msg = "invalid game";
        for (const auto& e : errors) msg += "\n  " + e;
        return msg;
      }()),
      errors_(std::move(errors)) {}

std::vector<int> TeamMarkovGame::decode_joint_action(int a) const {
  std::vector<int> out(player_actions_.size());
  for (int i = num_players() - 1; i >= 0; --i) {
    const int k = static_cast<int>(player_actions_[static_cast<std::size_t>(i)].size());
    out[static_cast<std::size_t>(i)] = a % k;
    a /= k;
  }
  return out;
}

int TeamMarkovGame::encode_joint_action(std::span<const int> per_player) const {
  int a = 0;
  for (std::size_t i = 0; i < player_actions_.size(); ++i) {
    a = a * static_cast<int>(player_actions_[i].size()) + per_player[i];
  }
  return a;
}

std::string TeamMarkovGame::joint_action_label(int a) const {
  const auto parts = decode_joint_action(a);
  bool short_names = true;
  for (const auto& set : player_actions_) {
    for (const auto& name : set) short_names = short_names && name.size() == 1;
  }
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i && !short_names) out += '+';
    out += player_actions_[i][static_cast<std::size_t>(parts[i])];
  }
  return out;
}

TeamMarkovGame validate_game(const RawGame& raw) {
  std::vector<std::string> errors;
  TeamMarkovGame game;

  const int m = static_cast<int>(raw.states.size());
  if (m < 1) errors.emplace_back("states: at least one state is required");
  {
    std::set<std::string> names(raw.states.begin(), raw.states.end());
    if (static_cast<int>(names.size()) != m) errors.emplace_back("states: state names must be distinct");
  }
  if (raw.n_players < 1) errors.emplace_back("n_players: must be positive");
  if (static_cast<int>(raw.player_actions.size()) != raw.n_players) {
    errors.push_back(fmt::format("player_actions: expected {} action sets, got {}", raw.n_players,
                                 raw.player_actions.size()));
  }
  long long joint = 1;
  for (std::size_t i = 0; i < raw.player_actions.size(); ++i) {
    if (raw.player_actions[i].empty()) {
      errors.push_back(fmt::format("player_actions[{}]: empty action set", i));
      joint = 0;
    } else if (joint > 0) {
      joint *= static_cast<long long>(raw.player_actions[i].size());
      if (joint > kMaxJointActions) {
        errors.push_back(fmt::format("player_actions: more than {} joint actions", kMaxJointActions));
        joint = 0;
      }
    }
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));

  game.states_ = raw.states;
  game.player_actions_ = raw.player_actions;
  game.num_joint_ = static_cast<int>(joint);
  const int num_joint = game.num_joint_;

  auto check_action = [&](const std::vector<int>& a, const std::string& where) -> int {
    if (static_cast<int>(a.size()) != raw.n_players) {
      errors.push_back(fmt::format("{}: action has {} components, expected {}", where, a.size(), raw.n_players));
      return -1;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] < 0 || a[i] >= static_cast<int>(raw.player_actions[i].size())) {
        errors.push_back(fmt::format("{}: action index {} out of range for player {}", where, a[i], i));
        return -1;
      }
    }
    return game.encode_joint_action(a);
  };
  auto check_state = [&](int s, const std::string& where) {
    if (s < 0 || s >= m) {
      errors.push_back(fmt::format("{}: state index {} out of range", where, s));
      return false;
    }
    return true;
  };

  // Payoffs.
  const double fill = raw.default_payoff.value_or(std::numeric_limits<double>::quiet_NaN());
  game.payoff_.assign(static_cast<std::size_t>(m), Eigen::MatrixXd::Constant(num_joint, m, fill));
  std::vector<char> seen_payoff(static_cast<std::size_t>(m) * num_joint * m, 0);
  for (std::size_t idx = 0; idx < raw.payoffs.size(); ++idx) {
    const auto& p = raw.payoffs[idx];
    const std::string where = fmt::format("payoffs[{}]", idx);
    const bool ok_s = check_state(p.s, where);
    const bool ok_n = check_state(p.s_next, where + ".s_next");
    const int a = check_action(p.a, where);
    if (!ok_s || !ok_n || a < 0) continue;
    if (p.r.size() != 1 && static_cast<int>(p.r.size()) != raw.n_players) {
      errors.push_back(fmt::format("{}: r must be a number or have {} per-player entries", where, raw.n_players));
      continue;
    }
    double sum = 0.0;
    for (double x : p.r) sum += x;
    const double team = sum / static_cast<double>(p.r.size());
    if (!std::isfinite(team)) {
      errors.push_back(fmt::format("{}: payoff is not finite", where));
      continue;
    }
    auto& flag = seen_payoff[(static_cast<std::size_t>(p.s) * num_joint + a) * m + p.s_next];
    if (flag) {
      errors.push_back(fmt::format("{}: duplicate payoff for (s={}, a={}, s_next={})", where, p.s,
                                   describe_action(p.a), p.s_next));
      continue;
    }
    flag = 1;
    game.payoff_[static_cast<std::size_t>(p.s)](a, p.s_next) = team;
  }
  if (!raw.default_payoff) {
    for (int s = 0; s < m; ++s) {
      for (int a = 0; a < num_joint; ++a) {
        for (int l = 0; l < m; ++l) {
          if (std::isnan(game.payoff_[static_cast<std::size_t>(s)](a, l))) {
            errors.push_back(fmt::format("payoffs: missing payoff for (s={}, a={}, s_next={}) and no default_payoff",
                                         s, describe_action(game.decode_joint_action(a)), l));
          }
        }
      }
    }
  }

  // Uncertainty.
  game.uncertainty_.assign(static_cast<std::size_t>(m) * num_joint, RowDistributionSet{});
  std::vector<char> seen_row(static_cast<std::size_t>(m) * num_joint, 0);
  for (std::size_t idx = 0; idx < raw.uncertainty.size(); ++idx) {
    const auto& u = raw.uncertainty[idx];
    const std::string where = fmt::format("uncertainty[{}]", idx);
    const bool ok_s = check_state(u.s, where);
    const int a = check_action(u.a, where);
    if (!ok_s || a < 0) continue;
    if (u.rows.empty()) {
      errors.push_back(fmt::format("{}: candidate row list is empty", where));
      continue;
    }
    Eigen::MatrixXd cand(static_cast<Eigen::Index>(u.rows.size()), m);
    bool ok = true;
    for (std::size_t j = 0; j < u.rows.size(); ++j) {
      const auto& row = u.rows[j];
      if (static_cast<int>(row.size()) != m) {
        errors.push_back(fmt::format("{}.rows[{}]: expected {} entries, got {}", where, j, m, row.size()));
        ok = false;
        continue;
      }
      double sum = 0.0;
      for (int l = 0; l < m; ++l) {
        double x = row[static_cast<std::size_t>(l)];
        if (!std::isfinite(x)) {
          errors.push_back(fmt::format("{}.rows[{}]: entry {} is not finite", where, j, l));
          ok = false;
        } else if (x < -kNegativeEntryTolerance) {
          errors.push_back(fmt::format("{}.rows[{}]: negative probability {} at entry {}", where, j, x, l));
          ok = false;
        } else if (x < 0.0) {
          x = 0.0;
        }
        cand(static_cast<Eigen::Index>(j), l) = x;
        sum += x;
      }
      if (!ok) continue;
      if (std::abs(sum - 1.0) > kRowSumTolerance) {
        errors.push_back(fmt::format("{}.rows[{}] (s={}, a={}): row sum {} != 1", where, j, u.s,
                                     describe_action(u.a), sum));
        ok = false;
      } else if (std::abs(sum - 1.0) > kRenormalizeThreshold) {
        cand.row(static_cast<Eigen::Index>(j)) /= sum;
      }
    }
    auto& flag = seen_row[static_cast<std::size_t>(u.s) * num_joint + a];
    if (flag) {
      errors.push_back(fmt::format("{}: duplicate uncertainty entry for (s={}, a={})", where, u.s, describe_action(u.a)));
      continue;
    }
    // Marked even when invalid so the entry is not also reported as missing.
    flag = 1;
    if (!ok) continue;
    game.uncertainty_[static_cast<std::size_t>(u.s) * num_joint + a] = RowDistributionSet(std::move(cand));
  }
  for (int s = 0; s < m; ++s) {
    for (int a = 0; a < num_joint; ++a) {
      if (!seen_row[static_cast<std::size_t>(s) * num_joint + a]) {
        errors.push_back(fmt::format("uncertainty: missing entry for (s={}, a={})", s,
                                     describe_action(game.decode_joint_action(a))));
      }
    }
  }

  if (!errors.empty()) throw ValidationError(std::move(errors));

  double max_abs = 0.0;
  double min_r = std::numeric_limits<double>::infinity();
  for (const auto& p : game.payoff_) {
    max_abs = std::max(max_abs, p.cwiseAbs().maxCoeff());
    min_r = std::min(min_r, p.minCoeff());
  }
  game.min_payoff_ = min_r;
  if (raw.r_max) {
    if (!(*raw.r_max >= max_abs)) {
      throw ValidationError({fmt::format("r_max: {} is below max |payoff| = {}", *raw.r_max, max_abs)});
    }
    game.r_max_ = *raw.r_max;
  } else {
    game.r_max_ = max_abs;
  }
  return game;
}

RawGame to_raw(const TeamMarkovGame& game) {
  RawGame raw;
  raw.n_players = game.num_players();
  raw.states = game.states();
  raw.player_actions = game.player_actions();
  const int m = game.num_states();
  for (int s = 0; s < m; ++s) {
    for (int a = 0; a < game.num_joint_actions(); ++a) {
      const auto parts = game.decode_joint_action(a);
      for (int l = 0; l < m; ++l) {
        raw.payoffs.push_back({s, parts, l, {game.payoff(s, a, l)}});
      }
    }
  }
  for (int s = 0; s < m; ++s) {
    for (int a = 0; a < game.num_joint_actions(); ++a) {
      const auto& set = game.uncertainty(s, a);
      RawUncertainty u{s, game.decode_joint_action(a), {}};
      for (int j = 0; j < set.size(); ++j) {
        u.rows.emplace_back(set.row(j).begin(), set.row(j).end());
      }
      raw.uncertainty.push_back(std::move(u));
    }
  }
  raw.r_max = game.r_max();
  return raw;
}

}  // namespace robustdp
