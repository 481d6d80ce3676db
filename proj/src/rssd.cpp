#include "robustdp/rssd.hpp"

#include <fmt/format.h>

#include <stdexcept>

namespace robustdp::rssd {

std::string to_string(StageGame g) {
  switch (g) {
    case StageGame::public_goods:
      return "public_goods";
    case StageGame::stag_hunt:
      return "stag_hunt";
    case StageGame::snowdrift:
      return "snowdrift";
  }
  return "public_goods";
}

std::vector<std::string> validate(const RssdParams& p) {
  std::vector<std::string> errors;
  const int m = p.num_states();
  if (p.n < 1) errors.push_back(fmt::format("n = {} must be positive", p.n));
  if (m < 2) errors.push_back(fmt::format("need at least 2 states, got {}", m));
  if (!(p.c > 0.0)) errors.push_back(fmt::format("c = {} must be positive", p.c));
  if (static_cast<int>(p.synergy.size()) != m) {
    errors.push_back(fmt::format("synergy has {} entries, expected {}", p.synergy.size(), m));
  }
  if (static_cast<int>(p.benefit.size()) != m) {
    errors.push_back(fmt::format("benefit has {} entries, expected {}", p.benefit.size(), m));
  }
  for (std::size_t i = 0; i < p.synergy.size(); ++i) {
    if (!(p.synergy[i] > p.c && p.synergy[i] < p.n)) {
      errors.push_back(fmt::format("synergy[{}] = {} must lie in (c, n) = ({}, {})", i, p.synergy[i], p.c, p.n));
    }
  }
  if (p.threshold < 1 || p.threshold > p.n) {
    errors.push_back(fmt::format("threshold Z = {} must lie in [1, n]", p.threshold));
  }
  if (p.mu.empty()) errors.emplace_back("mu: at least one magnitude is required");
  for (double mu : p.mu) {
    // Diagonal 1 - mu n must stay nonnegative.
    if (!(mu >= 0.0 && mu * p.n <= 1.0)) {
      errors.push_back(fmt::format("mu = {} must satisfy 0 <= mu and mu * n <= 1", mu));
    }
  }
  return errors;
}

StagePayoff payoff(const RssdParams& p, int state, int h, int next_state) {
  const auto next = static_cast<std::size_t>(next_state);
  const double public_goods_share = h * p.synergy[next] * p.c / p.n;
  switch (p.stages[static_cast<std::size_t>(state)]) {
    case StageGame::public_goods:
      return {public_goods_share - p.c, public_goods_share};
    case StageGame::stag_hunt:
      if (h >= p.threshold) return {public_goods_share - p.c, public_goods_share};
      return {-p.c, 0.0};
    case StageGame::snowdrift:
      if (h > 0) return {p.benefit[next] - p.c / h, p.benefit[next]};
      return {0.0, 0.0};
  }
  return {};
}

double team_payoff(const RssdParams& p, int state, int h, int next_state) {
  const StagePayoff sp = payoff(p, state, h, next_state);
  // Only the roles actually present contribute.
  const double coop = h > 0 ? h * sp.cooperator : 0.0;
  const double defect = h < p.n ? (p.n - h) * sp.defector : 0.0;
  return (coop + defect) / p.n;
}

Eigen::RowVectorXd transition_row(const RssdParams& p, int k, int h, double mu) {
  const int m = p.num_states();
  // The diagonal is the complement of the rounded off-diagonal mass.
  const double off = mu * (static_cast<double>(h) / (m - 1));
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Constant(m, off);
  row(k) = 1.0 - (m - 1) * off;
  return row;
}

TeamMarkovGame build_rssd(const RssdParams& p) {
  if (auto errors = validate(p); !errors.empty()) {
    std::string msg = "invalid RSSD parameters:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw std::invalid_argument(msg);
  }
  const int m = p.num_states();
  RawGame raw;
  raw.n_players = p.n;
  for (int s = 0; s < m; ++s) raw.states.push_back(fmt::format("s{}", s + 1));
  raw.player_actions.assign(static_cast<std::size_t>(p.n), {"C", "D"});

  int joint = 1;
  for (int i = 0; i < p.n; ++i) joint *= 2;
  for (int s = 0; s < m; ++s) {
    for (int a = 0; a < joint; ++a) {
      // Player 0 is the most significant bit; bit value 0 is C.
      std::vector<int> parts(static_cast<std::size_t>(p.n));
      int h = 0;
      for (int i = 0; i < p.n; ++i) {
        const int bit = (a >> (p.n - 1 - i)) & 1;
        parts[static_cast<std::size_t>(i)] = bit;
        h += bit == 0 ? 1 : 0;
      }
      for (int l = 0; l < m; ++l) raw.payoffs.push_back({s, parts, l, {team_payoff(p, s, h, l)}});
      RawUncertainty u{s, parts, {}};
      for (double mu : p.mu) {
        const Eigen::RowVectorXd row = transition_row(p, s, h, mu);
        u.rows.emplace_back(row.begin(), row.end());
      }
      raw.uncertainty.push_back(std::move(u));
    }
  }
  return validate_game(raw);
}

DilemmaReport check_dilemma_conditions(const RssdParams& p) {
  DilemmaReport report;
  const int m = p.num_states();
  auto add = [&](int cond, int s, int h, int l, std::string detail) {
    report.violations.push_back({cond, s, h, l, std::move(detail)});
  };
  for (int s = 0; s < m; ++s) {
    for (int l = 0; l < m; ++l) {
      for (int h = 1; h < p.n; ++h) {
        const double lo = payoff(p, s, h, l).cooperator;
        const double hi = payoff(p, s, h + 1, l).cooperator;
        if (hi < lo) add(1, s, h, l, fmt::format("a_{} = {} < a_{} = {}", h + 1, hi, h, lo));
      }
      for (int h = 0; h + 1 < p.n; ++h) {
        const double lo = payoff(p, s, h, l).defector;
        const double hi = payoff(p, s, h + 1, l).defector;
        if (hi < lo) add(1, s, h, l, fmt::format("b_{} = {} < b_{} = {}", h + 1, hi, h, lo));
      }
      for (int h = 1; h < p.n; ++h) {
        const StagePayoff sp = payoff(p, s, h, l);
        if (!(sp.defector > sp.cooperator)) {
          add(2, s, h, l, fmt::format("b_{0} = {1} <= a_{0} = {2}", h, sp.defector, sp.cooperator));
        }
      }
      const double a_n = payoff(p, s, p.n, l).cooperator;
      const double b_0 = payoff(p, s, 0, l).defector;
      if (!(a_n > b_0)) add(3, s, p.n, l, fmt::format("a_n = {} <= b_0 = {}", a_n, b_0));
    }
  }
  return report;
}

}  // namespace robustdp::rssd
