#pragma once

// Game-definition files.
//
//   {
//     "schema": "qgame.game/v1",            (optional)
//     "name": "Prisoner's Dilemma",
//     "alice_actions": ["Deny", "Confess"],
//     "bob_actions": ["Deny", "Confess"],
//     "payoffs": [[[3, 3], [0, 5]],
//                 [[5, 0], [1, 1]]]
//   }
//
// payoffs[j][l] = [Alice's payoff, Bob's payoff] when Alice plays action j
// and Bob plays action l. Action 0 is applied as the identity, action 1 as
// i sigma_y. Unknown keys are rejected.

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "qgame/errors.hpp"
#include "qgame/games.hpp"

namespace qgame {

inline constexpr const char* kGameSchema = "qgame.game/v1";

inline BimatrixGame game_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("game definition must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "schema" && key != "name" && key != "alice_actions" && key != "bob_actions" && key != "payoffs")
      throw ParseError("unknown key '" + key + "' in game definition");
  }
  if (j.contains("schema") && j["schema"] != kGameSchema)
    throw ParseError("unsupported game schema; expected " + std::string(kGameSchema));

  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) throw ParseError(std::string("game definition lacks '") + key + "'");
    return j[key];
  };
  const auto& name = need("name");
  if (!name.is_string() || name.get<std::string>().empty()) throw ParseError("'name' must be a non-empty string");

  auto labels = [&](const char* key) {
    const auto& a = need(key);
    if (!a.is_array() || a.size() != 2 || !a[0].is_string() || !a[1].is_string())
      throw ParseError(std::string("'") + key + "' must be an array of two strings");
    return std::array<std::string, 2>{a[0].get<std::string>(), a[1].get<std::string>()};
  };

  const auto& p = need("payoffs");
  BimatrixGame::Table table{};
  if (!p.is_array() || p.size() != 2) throw ParseError("'payoffs' must be a 2x2 array of [a, b] pairs");
  for (int jj = 0; jj < 2; ++jj) {
    if (!p[jj].is_array() || p[jj].size() != 2) throw ParseError("'payoffs' must be a 2x2 array of [a, b] pairs");
    for (int l = 0; l < 2; ++l) {
      const auto& cell = p[jj][l];
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number())
        throw ParseError("every payoff cell must be a pair of numbers");
      table[jj][l] = {cell[0].get<double>(), cell[1].get<double>()};
    }
  }
  try {
    return BimatrixGame(name.get<std::string>(), labels("alice_actions"), labels("bob_actions"), table);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

inline BimatrixGame parse_game(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return game_from_json(j);
}

inline BimatrixGame load_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open game file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_game(ss.str());
}

inline nlohmann::ordered_json game_to_json(const BimatrixGame& g) {
  nlohmann::ordered_json j;
  j["schema"] = kGameSchema;
  j["name"] = g.name();
  j["alice_actions"] = g.alice_actions();
  j["bob_actions"] = g.bob_actions();
  auto& p = j["payoffs"];
  for (int jj = 0; jj < 2; ++jj)
    for (int l = 0; l < 2; ++l) p[jj][l] = {g.payoff(jj, l).a, g.payoff(jj, l).b};
  return j;
}

}  // namespace qgame
