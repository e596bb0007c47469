#pragma once

// Command-line front end. run() is the whole program; tools/qgame.cpp only
// forwards main() to it.
//
// Exit codes: 0 success, 2 usage error, 3 I/O or parse error.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "qgame/qgame.hpp"

namespace qgame::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

// Invalid flag value. The message starts with the flag name.
class UsageError : public std::invalid_argument {
 public:
  UsageError(const std::string& flag, const std::string& what) : std::invalid_argument(flag + ": " + what) {}
};

// I/O failure while writing results.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline double plain_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v))
    throw std::invalid_argument("'" + std::string(s) + "' is not a number");
  return v;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace detail

// Decimal literal, fraction "a/b", or a multiple of pi: "pi", "pi/2",
// "3pi/4", "3*pi/4", "-0.5*pi".
inline double parse_scalar(std::string_view text) {
  std::string s(detail::trim(text));
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s.empty()) throw std::invalid_argument("empty value");

  std::string_view num = s;
  double den = 1.0;
  if (const auto slash = s.rfind('/'); slash != std::string::npos) {
    num = std::string_view(s).substr(0, slash);
    den = detail::plain_number(std::string_view(s).substr(slash + 1));
    if (den == 0.0) throw std::invalid_argument("division by zero in '" + s + "'");
  }
  num = detail::trim(num);
  double value;
  if (num.size() >= 2 && num.substr(num.size() - 2) == "pi") {
    std::string_view coef = detail::trim(num.substr(0, num.size() - 2));
    if (!coef.empty() && coef.back() == '*') coef = detail::trim(coef.substr(0, coef.size() - 1));
    double k = 1.0;
    if (coef == "-")
      k = -1.0;
    else if (!coef.empty() && coef != "+")
      k = detail::plain_number(coef);
    value = k * kPi;
  } else {
    value = detail::plain_number(num);
  }
  return value / den;
}

inline double parse_flag_scalar(const std::string& flag, const std::string& text) {
  try {
    return parse_scalar(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(flag, e.what());
  }
}

inline CorruptionRate parse_rate(const std::string& flag, const std::string& text) {
  const double r = parse_flag_scalar(flag, text);
  if (!(r >= 0.0 && r <= 1.0)) throw UsageError(flag, "corruption rate " + text + " outside [0, 1]");
  return CorruptionRate(r);
}

// "theta,phi".
inline StrategyParams parse_strategy(const std::string& flag, const std::string& text) {
  const auto parts = detail::split(text, ',');
  if (parts.size() != 2) throw UsageError(flag, "expected theta,phi but got '" + text + "'");
  const double theta = parse_flag_scalar(flag, parts[0]);
  const double phi = parse_flag_scalar(flag, parts[1]);
  try {
    return StrategyParams(theta, phi);
  } catch (const OutOfRange& e) {
    throw UsageError(flag, e.what());
  }
}

enum class Format { kCsv, kJson };

struct GameChoice {
  BimatrixGame game;
  std::optional<GameId> builtin;
  std::string label;  // builtin short name or the file path
};

// Builtin id or path to a game-definition file. Files that cannot be read
// or parsed raise ParseError.
inline GameChoice resolve_game(const std::string& spec) {
  if (auto id = parse_game_id(spec)) return {builtin_game(*id), id, std::string(short_name(*id))};
  if (!std::filesystem::exists(spec))
    throw UsageError("--game", "'" + spec + "' is neither pd, sd, bos nor an existing file");
  return {load_game_file(spec), std::nullopt, spec};
}

struct RunConfig {
  std::string command;
  std::string game_spec;
  std::string r_text;
  std::string rates_text;
  bool fine_scan = false;
  std::string alice_text;
  std::string bob_text;
  std::string classical_alice_text;
  std::string classical_bob_text;
  int points = 101;
  int scan_points = 101;
  std::string player = "both";
  std::string baseline = "corrupt";
  SearchOptions search;
  std::string format = "csv";
  std::string out_path;
  std::string target;
  std::string out_dir = ".";
};

namespace detail {

inline Json strategy_json(const StrategyParams& s) {
  Json j;
  j["theta"] = json_number(s.theta());
  j["phi"] = json_number(s.phi());
  return j;
}

inline Json payoff_json(const PayoffPair& p) {
  Json j;
  j["a"] = json_number(p.a);
  j["b"] = json_number(p.b);
  return j;
}

inline Format parse_format(const std::string& f) {
  if (f == "csv") return Format::kCsv;
  if (f == "json") return Format::kJson;
  throw UsageError("--format", "expected csv or json, got '" + f + "'");
}

inline void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text) || !f.flush()) throw IoError("cannot write " + path);
}

inline void require(bool present, const std::string& flag, const std::string& command) {
  if (!present) throw UsageError(flag, "required by '" + command + "'");
}

class Runner {
 public:
  Runner(const RunConfig& cfg, std::ostream& out, std::ostream& err) : cfg_(cfg), out_(out), err_(err) {}

  int run() {
    format_ = parse_format(cfg_.format);
    if (cfg_.command == "reproduce") return reproduce();
    require(!cfg_.game_spec.empty(), "--game", cfg_.command);
    validate();
    choice_.emplace(resolve_game(cfg_.game_spec));
    std::string text;
    if (cfg_.command == "payoff") text = payoff();
    else if (cfg_.command == "sweep") text = sweep();
    else if (cfg_.command == "crossings") text = crossings();
    else if (cfg_.command == "ne") text = ne();
    else if (cfg_.command == "classical") text = classical();
    else throw UsageError("command", "unknown command '" + cfg_.command + "'");
    write_text(cfg_.out_path, text, out_);
    return kExitOk;
  }

 private:
  const BimatrixGame& game() const { return choice_->game; }

  // Flag checks that do not need the game.
  void validate() {
    const auto& c = cfg_.command;
    if (c == "payoff") {
      require(!cfg_.r_text.empty(), "--r", c);
      require(!cfg_.alice_text.empty(), "--alice", c);
      require(!cfg_.bob_text.empty(), "--bob", c);
    }
    if (!cfg_.r_text.empty()) rate_ = parse_rate("--r", cfg_.r_text);
    if (!cfg_.alice_text.empty()) alice_ = parse_strategy("--alice", cfg_.alice_text);
    if (!cfg_.bob_text.empty()) bob_ = parse_strategy("--bob", cfg_.bob_text);
    if (alice_.has_value() != bob_.has_value() && (c == "sweep" || c == "crossings"))
      throw UsageError(alice_ ? "--bob" : "--alice", "--alice and --bob must be given together");
    if (!cfg_.classical_alice_text.empty()) classical_alice_ = parse_probability("--classical-alice", cfg_.classical_alice_text);
    if (!cfg_.classical_bob_text.empty()) classical_bob_ = parse_probability("--classical-bob", cfg_.classical_bob_text);
    if (classical_alice_.has_value() != classical_bob_.has_value())
      throw UsageError(classical_alice_ ? "--classical-bob" : "--classical-alice",
                       "--classical-alice and --classical-bob must be given together");
    if (cfg_.points < 2) throw UsageError("--points", "need at least 2 points");
    if (cfg_.scan_points < 3) throw UsageError("--scan-points", "need at least 3 points");
    if (cfg_.player != "a" && cfg_.player != "b" && cfg_.player != "both")
      throw UsageError("--player", "expected a, b or both");
    if (cfg_.baseline != "corrupt" && cfg_.baseline != "ideal")
      throw UsageError("--baseline", "expected corrupt or ideal");
    if (c == "ne") {
      const int given = int(!cfg_.r_text.empty()) + int(!cfg_.rates_text.empty()) + int(cfg_.fine_scan);
      if (given != 1) throw UsageError("--r", "'ne' needs exactly one of --r, --rates, --fine-scan");
      if (!cfg_.rates_text.empty())
        for (const auto& part : split(cfg_.rates_text, ',')) rates_.push_back(parse_rate("--rates", part).value());
      else if (cfg_.fine_scan)
        rates_ = fine_scan_rates();
      else
        rates_ = {rate_->value()};
      const auto& s = cfg_.search;
      if (s.theta_steps < 8) throw UsageError("--theta-steps", "need at least 8");
      if (s.phi_steps < 8) throw UsageError("--phi-steps", "need at least 8");
      if (s.fine_theta_steps < 3) throw UsageError("--fine-theta-steps", "need at least 3");
      if (s.fine_phi_steps < 3) throw UsageError("--fine-phi-steps", "need at least 3");
      if (!(s.epsilon > 0.0)) throw UsageError("--epsilon", "must be positive");
    }
  }

  static double parse_probability(const std::string& flag, const std::string& text) {
    const double p = parse_flag_scalar(flag, text);
    if (!(p >= 0.0 && p <= 1.0)) throw UsageError(flag, "probability " + text + " outside [0, 1]");
    return p;
  }

  Scenario1Setup setup() const {
    Scenario1Setup s{};
    if (alice_) {
      s.quantum = {*alice_, *bob_};
    } else if (choice_->builtin) {
      s.quantum = ideal_quantum_profile(*choice_->builtin);
    } else {
      throw UsageError("--alice", "custom games need explicit --alice and --bob strategies");
    }
    if (classical_alice_) {
      s.classical = {ClassicalMove{MixedStrategy(*classical_alice_)}, ClassicalMove{MixedStrategy(*classical_bob_)}};
    } else {
      try {
        s.classical = classical_baseline(game());
      } catch (const std::invalid_argument&) {
        throw UsageError("--classical-alice", "game has no classical equilibrium; give the classical profile");
      }
    }
    return s;
  }

  Json document() const {
    Json doc = report_document(cfg_.command);
    doc["game"] = choice_->label;
    return doc;
  }

  std::string payoff() {
    const auto dist = outcome_distribution(*rate_, *alice_, *bob_);
    const auto p = expected_payoffs(game(), dist);
    if (format_ == Format::kCsv) {
      CsvTable t({"game", "r", "theta_a", "phi_a", "theta_b", "phi_b", "p00", "p01", "p10", "p11", "payoff_a",
                  "payoff_b"});
      t.add_row({choice_->label, rate_->value(), alice_->theta(), alice_->phi(), bob_->theta(), bob_->phi(), dist[0],
                 dist[1], dist[2], dist[3], p.a, p.b});
      return t.render();
    }
    Json doc = document();
    doc["r"] = json_number(rate_->value());
    doc["alice"] = strategy_json(*alice_);
    doc["bob"] = strategy_json(*bob_);
    doc["outcome_probabilities"] = Json::array();
    for (int n = 0; n < 4; ++n) doc["outcome_probabilities"].push_back(json_number(dist[n]));
    doc["payoffs"] = payoff_json(p);
    return render_json(doc);
  }

  std::string sweep() {
    const auto s = setup();
    const auto curve = scenario1_sweep(game(), s.quantum, s.classical, default_r_grid(cfg_.points));
    std::vector<std::string> columns{"r"};
    for (const auto& series : curve.series()) columns.push_back(series.label);
    if (format_ == Format::kCsv) {
      CsvTable t(columns);
      for (std::size_t i = 0; i < curve.r_grid().size(); ++i) {
        std::vector<CsvTable::Cell> row{curve.r_grid()[i]};
        for (const auto& series : curve.series()) row.emplace_back(series.values[i]);
        t.add_row(std::move(row));
      }
      return t.render();
    }
    Json doc = document();
    doc["quantum_profile"] = {{"alice", strategy_json(s.quantum.alice)}, {"bob", strategy_json(s.quantum.bob)}};
    doc["classical_profile"] = {{"alice_p0", json_number(s.classical.alice.mix.p0())},
                                {"bob_p0", json_number(s.classical.bob.mix.p0())}};
    doc["columns"] = columns;
    Json rows = Json::array();
    for (std::size_t i = 0; i < curve.r_grid().size(); ++i) {
      Json row = Json::array({json_number(curve.r_grid()[i])});
      for (const auto& series : curve.series()) row.push_back(json_number(series.values[i]));
      rows.push_back(std::move(row));
    }
    doc["rows"] = std::move(rows);
    return render_json(doc);
  }

  std::string crossings() {
    const auto s = setup();
    const Baseline baseline = cfg_.baseline == "ideal" ? Baseline::kIdeal : Baseline::kCorrupt;
    std::vector<Player> players;
    if (cfg_.player != "b") players.push_back(Player::kAlice);
    if (cfg_.player != "a") players.push_back(Player::kBob);

    CsvTable t({"player", "baseline", "r_star", "quantum", "classical", "tangent"});
    Json list = Json::array();
    for (Player who : players) {
      const char* name = who == Player::kAlice ? "a" : "b";
      for (const auto& c : scenario1_crossings(game(), s, who, baseline, cfg_.scan_points)) {
        t.add_row({std::string(name), cfg_.baseline, c.r_star, c.value_a, c.value_b, c.tangent});
        Json j;
        j["player"] = name;
        j["baseline"] = cfg_.baseline;
        j["r_star"] = json_number(c.r_star);
        j["quantum"] = json_number(c.value_a);
        j["classical"] = json_number(c.value_b);
        j["tangent"] = c.tangent;
        list.push_back(std::move(j));
      }
    }
    if (format_ == Format::kCsv) return t.render();
    Json doc = document();
    doc["crossings"] = std::move(list);
    return render_json(doc);
  }

  std::string ne() {
    const auto table = scenario2_table(game(), rates_, cfg_.search);
    CsvTable t({"r", "family", "kind", "theta_a", "phi_a", "theta_b", "phi_b", "payoff_a", "payoff_b", "max_gain",
                "description"});
    Json results = Json::array();
    for (const auto& entry : table) {
      Json per_rate;
      per_rate["r"] = json_number(entry.r);
      per_rate["survivors"] = entry.result.survivors;
      per_rate["refinements"] = entry.result.refinements;
      per_rate["truncated"] = entry.result.truncated;
      Json fams = Json::array();
      long long k = 0;
      for (const auto& f : entry.result.families) {
        const auto& rep = f.representative;
        t.add_row({entry.r, k++, std::string(to_string(f.descriptor.kind)), rep.alice.theta(), rep.alice.phi(),
                   rep.bob.theta(), rep.bob.phi(), rep.payoffs.a, rep.payoffs.b, rep.max_gain,
                   f.descriptor.describe()});
        Json j;
        j["kind"] = to_string(f.descriptor.kind);
        j["alice"] = strategy_json(rep.alice);
        j["bob"] = strategy_json(rep.bob);
        j["payoffs"] = payoff_json(rep.payoffs);
        j["max_gain"] = json_number(rep.max_gain);
        j["payoff_parametric"] = f.descriptor.payoff_parametric;
        j["description"] = f.descriptor.describe();
        fams.push_back(std::move(j));
      }
      per_rate["families"] = std::move(fams);
      results.push_back(std::move(per_rate));
      if (entry.result.truncated)
        err_ << "warning: refinement budget exhausted at r=" << format_number(entry.r) << "\n";
    }
    if (format_ == Format::kCsv) return t.render();
    Json doc = document();
    doc["epsilon"] = json_number(cfg_.search.epsilon);
    doc["results"] = std::move(results);
    return render_json(doc);
  }

  std::string classical() {
    CsvTable t({"kind", "alice_p0", "bob_p0", "payoff_a", "payoff_b"});
    Json list = Json::array();
    for (const auto& e : classical_equilibria(game())) {
      const std::string kind = e.kind == ClassicalEquilibrium::Kind::kPure ? "pure" : "mixed";
      t.add_row({kind, e.alice.p0(), e.bob.p0(), e.payoffs.a, e.payoffs.b});
      Json j;
      j["kind"] = kind;
      j["alice_p0"] = json_number(e.alice.p0());
      j["bob_p0"] = json_number(e.bob.p0());
      j["payoffs"] = payoff_json(e.payoffs);
      list.push_back(std::move(j));
    }
    if (format_ == Format::kCsv) return t.render();
    Json doc = document();
    doc["equilibria"] = std::move(list);
    return render_json(doc);
  }

  int reproduce() {
    const auto& targets = reproduce_targets();
    if (std::find(targets.begin(), targets.end(), cfg_.target) == targets.end())
      throw UsageError("target", "unknown target '" + cfg_.target + "'");
    const auto result = qgame::reproduce(cfg_.target, cfg_.search);
    std::error_code ec;
    std::filesystem::create_directories(cfg_.out_dir, ec);
    if (ec) throw IoError("cannot create " + cfg_.out_dir + ": " + ec.message());
    for (const auto& f : result.files) {
      const auto path = (std::filesystem::path(cfg_.out_dir) / f.name).string();
      write_text(path, f.content, out_);
      out_ << "wrote " << path << "\n";
    }
    std::size_t passed = 0;
    for (const auto& a : result.assertions) {
      if (a.pass)
        ++passed;
      else
        err_ << "assertion failed: " << a.id << " expected " << format_number(a.expected) << " got "
             << format_number(a.actual) << "\n";
    }
    out_ << "assertions: " << passed << "/" << result.assertions.size() << " passed\n";
    return kExitOk;
  }

  const RunConfig& cfg_;
  std::ostream& out_;
  std::ostream& err_;
  Format format_ = Format::kCsv;
  std::optional<GameChoice> choice_;
  std::optional<CorruptionRate> rate_;
  std::optional<StrategyParams> alice_, bob_;
  std::optional<double> classical_alice_, classical_bob_;
  std::vector<double> rates_;
};

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig cfg;
  CLI::App app{"Quantum versions of 2x2 games played with a corrupt entangled-state source"};
  app.name("qgame");
  app.require_subcommand(1);

  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "csv or json")->capture_default_str();
    sub->add_option("--out", cfg.out_path, "output file (default: standard output)");
  };
  auto add_game = [&](CLI::App* sub) {
    sub->add_option("--game", cfg.game_spec, "pd, sd, bos or a game-definition JSON file");
  };
  auto add_profile = [&](CLI::App* sub) {
    sub->add_option("--alice", cfg.alice_text, "Alice's strategy theta,phi (radians; pi forms accepted)");
    sub->add_option("--bob", cfg.bob_text, "Bob's strategy theta,phi");
  };
  auto add_classical = [&](CLI::App* sub) {
    sub->add_option("--classical-alice", cfg.classical_alice_text, "Alice's classical probability of sigma_0");
    sub->add_option("--classical-bob", cfg.classical_bob_text, "Bob's classical probability of sigma_0");
  };

  auto* payoff = app.add_subcommand("payoff", "payoffs of one quantum strategy profile");
  add_game(payoff);
  payoff->add_option("--r", cfg.r_text, "corruption rate in [0, 1]");
  add_profile(payoff);
  add_output(payoff);

  auto* sweep = app.add_subcommand("sweep", "quantum and classical payoffs over the corruption rate");
  add_game(sweep);
  add_profile(sweep);
  add_classical(sweep);
  sweep->add_option("--points", cfg.points, "number of r grid points on [0, 1]")->capture_default_str();
  add_output(sweep);

  auto* crossings = app.add_subcommand("crossings", "corruption rates where quantum and classical payoffs meet");
  add_game(crossings);
  add_profile(crossings);
  add_classical(crossings);
  crossings->add_option("--player", cfg.player, "a, b or both")->capture_default_str();
  crossings->add_option("--baseline", cfg.baseline, "corrupt or ideal classical baseline")->capture_default_str();
  crossings->add_option("--scan-points", cfg.scan_points, "uniform scan points before bisection")
      ->capture_default_str();
  add_output(crossings);

  auto* ne = app.add_subcommand("ne", "Nash equilibria for a known corruption rate");
  add_game(ne);
  ne->add_option("--r", cfg.r_text, "corruption rate");
  ne->add_option("--rates", cfg.rates_text, "comma-separated corruption rates");
  ne->add_flag("--fine-scan", cfg.fine_scan, "r = 0, 0.1, ..., 1");
  ne->add_option("--theta-steps", cfg.search.theta_steps, "coarse grid theta points")->capture_default_str();
  ne->add_option("--phi-steps", cfg.search.phi_steps, "coarse grid phi points")->capture_default_str();
  ne->add_option("--fine-theta-steps", cfg.search.fine_theta_steps, "certification grid theta points")
      ->capture_default_str();
  ne->add_option("--fine-phi-steps", cfg.search.fine_phi_steps, "certification grid phi points")
      ->capture_default_str();
  ne->add_option("--epsilon", cfg.search.epsilon, "equilibrium tolerance")->capture_default_str();
  add_output(ne);

  auto* classical = app.add_subcommand("classical", "classical equilibria of the game");
  add_game(classical);
  add_output(classical);

  auto* reproduce = app.add_subcommand("reproduce", "regenerate a published table or figure");
  reproduce->add_option("target", cfg.target, "table1, table2, table3, fig4, fig5 or fig6")->required();
  reproduce->add_option("--out-dir", cfg.out_dir, "directory for the output files")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();

  try {
    return detail::Runner(cfg, out, err).run();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace qgame::cli
