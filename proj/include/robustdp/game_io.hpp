#pragma once

#include "robustdp/game.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace robustdp {

/// Malformed or schema-violating game document. Syntax errors carry the
/// line and column reported by the parser.
class GameFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Game file layout, canonical key order:
//   n_players, states, player_actions, [default_payoff], payoffs, uncertainty, [r_max]
// payoffs:     [{"s": i, "a": [a_1..a_n], "s_next": j, "r": x | [r_1..r_n]}, ...]
// uncertainty: [{"s": i, "a": [a_1..a_n], "rows": [[p_1..p_m], ...]}, ...]
// "s" and "s_next" accept a state index or a state name.

RawGame parse_game_json(std::string_view text);
std::string raw_game_to_json(const RawGame& raw);

/// Parse + validate. Throws GameFormatError or ValidationError.
TeamMarkovGame load_game(const std::filesystem::path& path);
TeamMarkovGame game_from_json(std::string_view text);

/// Canonical serialization: every payoff triple listed, keys in canonical
/// order, shortest round-trip decimal for every number.
std::string game_to_json(const TeamMarkovGame& game);
void save_game(const TeamMarkovGame& game, const std::filesystem::path& path);

}  // namespace robustdp
