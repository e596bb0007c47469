#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "qgame/game_io.hpp"
#include "qgame/report.hpp"

using namespace qgame;

namespace {

const char* kChicken = R"({
  "name": "Chicken",
  "alice_actions": ["Swerve", "Straight"],
  "bob_actions": ["Swerve", "Straight"],
  "payoffs": [[[3, 3], [1, 4]], [[4, 1], [0, 0]]]
})";

}  // namespace

TEST(Format, TwelveSignificantDigits) {
  EXPECT_EQ(format_number(0.1 + 0.2), "0.3");
  EXPECT_EQ(format_number(43.0 / 16), "2.6875");
  EXPECT_EQ(format_number(1.0 / 3), "0.333333333333");
  EXPECT_EQ(format_number(-2.0), "-2");
  EXPECT_EQ(format_number(1e-13), "0");
  EXPECT_EQ(format_number(-1e-13), "0");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(1.5e20), "1.5e+20");
}

TEST(Format, RoundedMatchesText) {
  for (double v : {1.0 / 7, 96.0 / 49, -0.2 + 0.9 * 0.37, 3.14159265358979}) {
    EXPECT_EQ(rounded(v), std::strtod(format_number(v).c_str(), nullptr));
    EXPECT_EQ(format_number(rounded(v)), format_number(v));
  }
}

TEST(Csv, HeaderRowsAndQuoting) {
  CsvTable t({"name", "value", "flag", "count"});
  t.add_row({std::string("a,b"), 0.5, true, 3LL});
  t.add_row({std::string("say \"hi\""), 1e-14, false, -1LL});
  EXPECT_EQ(t.render(), "name,value,flag,count\n\"a,b\",0.5,true,3\n\"say \"\"hi\"\"\",0,false,-1\n");
  EXPECT_THROW(t.add_row({1.0}), std::invalid_argument);
}

TEST(Json, DocumentsCarrySchemaTag) {
  const auto doc = report_document("sweep");
  EXPECT_EQ(doc["schema"], "qgame.report/v1");
  EXPECT_EQ(doc["command"], "sweep");
  const std::string text = render_json(doc);
  EXPECT_EQ(text.back(), '\n');
  EXPECT_EQ(text.find("\r"), std::string::npos);
}

TEST(GameFile, ParsesDefinition) {
  const auto g = parse_game(kChicken);
  EXPECT_EQ(g.name(), "Chicken");
  EXPECT_EQ(g.alice_actions()[1], "Straight");
  EXPECT_EQ(g.payoff(0, 1), (PayoffPair{1, 4}));
  EXPECT_EQ(g.payoff(1, 0), (PayoffPair{4, 1}));
}

TEST(GameFile, RoundTrip) {
  for (const char* id : {"pd", "sd", "bos"}) {
    const auto g = builtin_game(id);
    const auto back = parse_game(game_to_json(g).dump());
    EXPECT_EQ(back.name(), g.name());
    EXPECT_EQ(back.table(), g.table());
    EXPECT_EQ(back.bob_actions(), g.bob_actions());
  }
}

TEST(GameFile, RejectsBadInput) {
  EXPECT_THROW(parse_game("{"), ParseError);
  EXPECT_THROW(parse_game("[]"), ParseError);
  EXPECT_THROW(parse_game(R"({"name": "x"})"), ParseError);
  EXPECT_THROW(parse_game(R"({"name": "x", "alice_actions": ["a","b"], "bob_actions": ["a","b"],
                              "payoffs": [[[1,1],[1,1]],[[1,1]]]})"),
               ParseError);
  EXPECT_THROW(parse_game(R"({"name": "x", "alice_actions": ["a","b"], "bob_actions": ["a","b"],
                              "payoffs": [[[1,1],[1,"2"]],[[1,1],[1,1]]]})"),
               ParseError);
  EXPECT_THROW(parse_game(R"({"name": "", "alice_actions": ["a","b"], "bob_actions": ["a","b"],
                              "payoffs": [[[1,1],[1,1]],[[1,1],[1,1]]]})"),
               ParseError);
  EXPECT_THROW(parse_game(R"({"name": "x", "alice_actions": ["a"], "bob_actions": ["a","b"],
                              "payoffs": [[[1,1],[1,1]],[[1,1],[1,1]]]})"),
               ParseError);
}

TEST(GameFile, RejectsUnknownKeysAndSchemas) {
  nlohmann::json j = nlohmann::json::parse(kChicken);
  j["colour"] = "red";
  EXPECT_THROW(game_from_json(j), ParseError);
  j.erase("colour");
  j["schema"] = "qgame.game/v2";
  EXPECT_THROW(game_from_json(j), ParseError);
  j["schema"] = kGameSchema;
  EXPECT_NO_THROW(game_from_json(j));
}

TEST(GameFile, LoadFromDisk) {
  const auto path = std::filesystem::temp_directory_path() / "qgame_test_chicken.json";
  {
    std::ofstream f(path);
    f << kChicken;
  }
  EXPECT_EQ(load_game_file(path.string()).name(), "Chicken");
  std::filesystem::remove(path);
  EXPECT_THROW(load_game_file(path.string()), ParseError);
}
