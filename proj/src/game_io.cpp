#include "robustdp/game_io.hpp"

#include <json.hpp>

#include <fmt/format.h>

#include <fstream>
#include <sstream>

namespace robustdp {

using json = nlohmann::ordered_json;

namespace {

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw GameFormatError(fmt::format("{}: missing field \"{}\"", where, key));
  return *it;
}

int state_ref(const json& j, const std::vector<std::string>& states, const std::string& where) {
  if (j.is_number_integer()) return j.get<int>();
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (states[i] == name) return static_cast<int>(i);
    }
    throw GameFormatError(fmt::format("{}: unknown state \"{}\"", where, name));
  }
  throw GameFormatError(fmt::format("{}: state must be an index or a name", where));
}

template <typename T>
T get_as(const json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw GameFormatError(fmt::format("{}: {}", where, e.what()));
  }
}

}  // namespace

RawGame parse_game_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // nlohmann reports "parse error at line L, column C: ...".
    throw GameFormatError(e.what());
  }
  if (!doc.is_object()) throw GameFormatError("game: top-level value must be an object");

  RawGame raw;
  raw.n_players = get_as<int>(require(doc, "n_players", "game"), "n_players");
  raw.states = get_as<std::vector<std::string>>(require(doc, "states", "game"), "states");
  raw.player_actions =
      get_as<std::vector<std::vector<std::string>>>(require(doc, "player_actions", "game"), "player_actions");
  if (auto it = doc.find("default_payoff"); it != doc.end()) raw.default_payoff = get_as<double>(*it, "default_payoff");
  if (auto it = doc.find("r_max"); it != doc.end()) raw.r_max = get_as<double>(*it, "r_max");

  const auto& payoffs = require(doc, "payoffs", "game");
  if (!payoffs.is_array()) throw GameFormatError("payoffs: must be an array");
  for (std::size_t i = 0; i < payoffs.size(); ++i) {
    const std::string where = fmt::format("payoffs[{}]", i);
    const auto& e = payoffs[i];
    RawPayoff p;
    p.s = state_ref(require(e, "s", where), raw.states, where + ".s");
    p.a = get_as<std::vector<int>>(require(e, "a", where), where + ".a");
    p.s_next = state_ref(require(e, "s_next", where), raw.states, where + ".s_next");
    const auto& r = require(e, "r", where);
    if (r.is_array()) {
      p.r = get_as<std::vector<double>>(r, where + ".r");
    } else {
      p.r = {get_as<double>(r, where + ".r")};
    }
    raw.payoffs.push_back(std::move(p));
  }

  const auto& unc = require(doc, "uncertainty", "game");
  if (!unc.is_array()) throw GameFormatError("uncertainty: must be an array");
  for (std::size_t i = 0; i < unc.size(); ++i) {
    const std::string where = fmt::format("uncertainty[{}]", i);
    const auto& e = unc[i];
    RawUncertainty u;
    u.s = state_ref(require(e, "s", where), raw.states, where + ".s");
    u.a = get_as<std::vector<int>>(require(e, "a", where), where + ".a");
    u.rows = get_as<std::vector<std::vector<double>>>(require(e, "rows", where), where + ".rows");
    raw.uncertainty.push_back(std::move(u));
  }
  return raw;
}

std::string raw_game_to_json(const RawGame& raw) {
  json doc;
  doc["n_players"] = raw.n_players;
  doc["states"] = raw.states;
  doc["player_actions"] = raw.player_actions;
  if (raw.default_payoff) doc["default_payoff"] = *raw.default_payoff;
  json payoffs = json::array();
  for (const auto& p : raw.payoffs) {
    json e;
    e["s"] = p.s;
    e["a"] = p.a;
    e["s_next"] = p.s_next;
    if (p.r.size() == 1) {
      e["r"] = p.r.front();
    } else {
      e["r"] = p.r;
    }
    payoffs.push_back(std::move(e));
  }
  doc["payoffs"] = std::move(payoffs);
  json unc = json::array();
  for (const auto& u : raw.uncertainty) {
    json e;
    e["s"] = u.s;
    e["a"] = u.a;
    e["rows"] = u.rows;
    unc.push_back(std::move(e));
  }
  doc["uncertainty"] = std::move(unc);
  if (raw.r_max) doc["r_max"] = *raw.r_max;
  return doc.dump(1) + "\n";
}

TeamMarkovGame game_from_json(std::string_view text) { return validate_game(parse_game_json(text)); }

TeamMarkovGame load_game(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GameFormatError(fmt::format("{}: cannot open file", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return game_from_json(buf.str());
  } catch (const GameFormatError& e) {
    throw GameFormatError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::string game_to_json(const TeamMarkovGame& game) { return raw_game_to_json(to_raw(game)); }

void save_game(const TeamMarkovGame& game, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("{}: cannot open for writing", path.string()));
  out << game_to_json(game);
}

}  // namespace robustdp
