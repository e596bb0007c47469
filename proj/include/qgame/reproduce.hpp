#pragma once

// Regenerates the published tables and figures as data files together
// with a list of machine-checkable assertions.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "qgame/analysis/crossings.hpp"
#include "qgame/analysis/equilibrium.hpp"
#include "qgame/analysis/scenario1.hpp"
#include "qgame/analysis/scenario2.hpp"
#include "qgame/errors.hpp"
#include "qgame/report.hpp"

namespace qgame {

struct Assertion {
  std::string id;
  std::string description;
  double expected = 0.0;
  double actual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct OutputFile {
  std::string name;
  std::string content;
};

struct Reproduction {
  std::string target;
  std::vector<OutputFile> files;
  std::vector<Assertion> assertions;

  bool all_pass() const {
    return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.pass; });
  }
  const Assertion& assertion(std::string_view id) const {
    for (const auto& a : assertions)
      if (a.id == id) return a;
    throw std::out_of_range("no assertion " + std::string(id));
  }
};

inline const std::vector<std::string>& reproduce_targets() {
  static const std::vector<std::string> t{"table1", "table2", "table3", "fig4", "fig5", "fig6"};
  return t;
}

namespace detail {

class AssertionLog {
 public:
  void close_to(std::string id, std::string description, double expected, double actual, double tol) {
    const bool pass = std::isfinite(actual) && std::abs(actual - expected) <= tol;
    items_.push_back({std::move(id), std::move(description), expected, actual, tol, pass});
  }
  // actual <= bound
  void at_most(std::string id, std::string description, double bound, double actual) {
    items_.push_back({std::move(id), std::move(description), bound, actual, 0.0, std::isfinite(actual) && actual <= bound});
  }
  std::vector<Assertion> take() { return std::move(items_); }

 private:
  std::vector<Assertion> items_;
};

inline std::string assertions_json(const std::string& target, const std::vector<Assertion>& items) {
  Json doc = report_document("reproduce");
  doc["target"] = target;
  bool all = true;
  Json arr = Json::array();
  for (const auto& a : items) {
    all = all && a.pass;
    Json j;
    j["id"] = a.id;
    j["description"] = a.description;
    j["expected"] = json_number(a.expected);
    j["actual"] = json_number(a.actual);
    j["tolerance"] = json_number(a.tolerance);
    j["pass"] = a.pass;
    arr.push_back(std::move(j));
  }
  doc["all_pass"] = all;
  doc["assertions"] = std::move(arr);
  return render_json(doc);
}

inline Json strategy_json(const StrategyParams& s) {
  Json j;
  j["theta"] = json_number(s.theta());
  j["phi"] = json_number(s.phi());
  return j;
}

inline std::string rate_label(double r) {
  if (r == 0.25) return "1/4";
  if (r == 0.5) return "1/2";
  if (r == 0.75) return "3/4";
  return format_number(r);
}

// One row of a published equilibrium table: the listed strategies (as
// printed) and a concrete member profile used for evaluation.
struct TableRow {
  double r;
  std::string alice_label;
  std::string bob_label;
  StrategyParams alice;
  StrategyParams bob;
  PayoffPair expected;
};

inline std::vector<TableRow> table_rows(GameId id) {
  const double q = kPi / 4.0;
  switch (id) {
    case GameId::kPrisonersDilemma:
      return {
          {0.0, "(0,pi/2)", "(0,pi/2)", {0, kHalfPi}, {0, kHalfPi}, {3, 3}},
          {0.25, "(0,pi/2)", "(0,pi/2)", {0, kHalfPi}, {0, kHalfPi}, {43.0 / 16, 43.0 / 16}},
          {0.5, "any", "any", {0, 0}, {0, 0}, {9.0 / 4, 9.0 / 4}},
          {0.75, "(0,pi/4)", "(0,pi/4)", {0, q}, {0, q}, {43.0 / 16, 43.0 / 16}},
          {1.0, "(0,pi/4)", "(0,pi/4)", {0, q}, {0, q}, {3, 3}},
      };
    case GameId::kSamaritansDilemma:
      return {
          {0.0, "(0,pi/2)", "(0,pi/2)", {0, kHalfPi}, {0, kHalfPi}, {3, 2}},
          {0.25, "(0,pi/2)", "(0,pi/2)", {0, kHalfPi}, {0, kHalfPi}, {21.0 / 16, 15.0 / 8}},
          {0.5, "any", "any", {0, 0}, {0, 0}, {0.25, 1.5}},
          {0.75, "(0,phi)", "(0,pi/2-phi)", {0, q}, {0, q}, {21.0 / 16, 15.0 / 8}},
          {1.0, "(0,phi) phi<=pi/4", "(0,pi/2-phi)", {0, kPi / 8}, {0, 3 * kPi / 8}, {3, 2}},
      };
    case GameId::kBattleOfSexes:
      return {
          {0.0, "(theta,phi)", "(theta,pi/2-phi)", {3 * q, q}, {3 * q, q}, {1, 2}},
          {0.0, "(pi,phi_A)", "(pi,phi_B)", {kPi, 0}, {kPi, 0}, {1, 2}},
          {0.25, "(theta,phi)", "(theta,pi/2-phi)", {kHalfPi, 0}, {kHalfPi, kHalfPi}, {15.0 / 16, 21.0 / 16}},
          {0.25, "(pi,phi_A)", "(pi,phi_B)", {kPi, 0}, {kPi, 0}, {11.0 / 16, 19.0 / 16}},
          {0.5, "any", "any", {0, 0}, {0, 0}, {0.75, 0.75}},
          {0.75, "(pi,0)", "(pi,0)", {kPi, 0}, {kPi, 0}, {19.0 / 16, 11.0 / 16}},
          {1.0, "(pi,0)", "(pi,0)", {kPi, 0}, {kPi, 0}, {2, 1}},
      };
  }
  throw UnknownGame("unknown builtin game id");
}

inline Reproduction reproduce_table(const std::string& target, GameId id, const SearchOptions& opt) {
  const BimatrixGame game = builtin_game(id);
  const auto rows = table_rows(id);
  AssertionLog log;
  CsvTable csv({"r", "alice", "bob", "theta_a", "phi_a", "theta_b", "phi_b", "payoff_a", "payoff_b", "max_gain",
                "search_family"});

  std::vector<double> rates;
  for (const auto& row : rows)
    if (rates.empty() || rates.back() != row.r) rates.push_back(row.r);

  for (double r : rates) {
    const Certifier cert(game, CorruptionRate(r), opt);
    const NeSearchResult search = ne_search(game, CorruptionRate(r), opt);
    int k = 0;
    for (const auto& row : rows) {
      if (row.r != r) continue;
      const auto c = cert.certify(row.alice, row.bob);
      const EquilibriumFamily* fam = find_family(search, row.alice, row.bob, c.payoffs);
      const std::string tag = target + ".r=" + rate_label(r) + (k ? "#" + std::to_string(k + 1) : "");
      ++k;
      log.close_to(tag + ".payoff_a", "Alice's payoff", row.expected.a, c.payoffs.a, 1e-9);
      log.close_to(tag + ".payoff_b", "Bob's payoff", row.expected.b, c.payoffs.b, 1e-9);
      log.at_most(tag + ".max_gain", "best unilateral deviation gain", 1e-6, c.max_gain);
      log.close_to(tag + ".search", "profile lies in a family found by the equilibrium search", 1.0,
                   fam ? 1.0 : 0.0, 0.0);
      csv.add_row({rate_label(r), row.alice_label, row.bob_label, row.alice.theta(), row.alice.phi(),
                   row.bob.theta(), row.bob.phi(), c.payoffs.a, c.payoffs.b, c.max_gain,
                   fam ? fam->descriptor.describe() : std::string("not found")});
    }
  }

  if (id == GameId::kPrisonersDilemma) {
    // r = 1/2: every profile is an equilibrium.
    const Certifier cert(game, CorruptionRate(0.5), opt);
    std::mt19937_64 rng(20240501);
    std::uniform_real_distribution<double> th(0.0, kPi), ph(0.0, kHalfPi);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const StrategyParams a(th(rng), ph(rng));
      const StrategyParams b(th(rng), ph(rng));
      worst = std::max(worst, cert.certify(a, b).max_gain);
    }
    log.at_most(target + ".r=1/2.random_profiles", "largest deviation gain over 20 random profiles", 1e-6, worst);
  }
  if (id == GameId::kSamaritansDilemma) {
    const Certifier cert(game, CorruptionRate(1.0), opt);
    double worst = 0.0;
    for (int i = 0; i <= 8; ++i) {
      const double phi = kPi / 4.0 * i / 8.0;
      worst = std::max(worst, cert.certify({0.0, phi}, {0.0, kHalfPi - phi}).max_gain);
    }
    log.at_most(target + ".r=1.family_probes", "largest deviation gain over 9 members (0,phi),(0,pi/2-phi)", 1e-6,
                worst);
  }
  if (id == GameId::kBattleOfSexes) {
    const CorruptionRate r(0.25);
    double err_a = 0.0, err_b = 0.0;
    for (int i = 0; i <= 8; ++i) {
      const double theta = kHalfPi + kHalfPi * i / 8.0;
      const auto p = quantum_payoffs(game, r, {theta, 0.0}, {theta, kHalfPi});
      err_a = std::max(err_a, std::abs(p.a - (13.0 - 2.0 * std::cos(2 * theta)) / 16.0));
      err_b = std::max(err_b, std::abs(p.b - (20.0 - std::cos(2 * theta)) / 16.0));
    }
    log.at_most(target + ".r=1/4.theta_formula_a", "(13-2cos 2theta)/16 over 9 theta in [pi/2,pi], max error",
                1e-9, err_a);
    log.at_most(target + ".r=1/4.theta_formula_b", "(20-cos 2theta)/16 over 9 theta in [pi/2,pi], max error", 1e-9,
                err_b);
  }

  Reproduction out{target, {}, log.take()};
  out.files.push_back({target + ".csv", csv.render()});
  out.files.push_back({target + "_assertions.json", assertions_json(target, out.assertions)});
  return out;
}

struct FigureContext {
  std::string target;
  GameId id;
  BimatrixGame game;
  Scenario1Setup setup;
  SweepCurve curve;
  Json points = Json::array();
  Json crossings = Json::array();
  AssertionLog log;

  FigureContext(std::string t, GameId g)
      : target(std::move(t)),
        id(g),
        game(builtin_game(g)),
        setup(scenario1_defaults(g)),
        curve(scenario1_sweep(game, setup.quantum, setup.classical, default_r_grid())) {}

  PayoffPair quantum(double r) const {
    return quantum_payoffs(game, CorruptionRate(r), setup.quantum.alice, setup.quantum.bob);
  }
  PayoffPair classical(double r) const {
    return classical_payoffs(game, CorruptionRate(r), setup.classical.alice, setup.classical.bob);
  }

  void point(const std::string& label, double r, const PayoffPair& p, const std::string& note) {
    Json j;
    j["label"] = label;
    j["r"] = json_number(r);
    j["payoff_a"] = json_number(p.a);
    j["payoff_b"] = json_number(p.b);
    j["note"] = note;
    points.push_back(std::move(j));
  }

  std::vector<CrossingResult> crossings_for(Player who, Baseline baseline) {
    auto found = scenario1_crossings(game, setup, who, baseline);
    for (const auto& c : found) {
      Json j;
      j["player"] = who == Player::kAlice ? "alice" : "bob";
      j["baseline"] = baseline == Baseline::kCorrupt ? "corrupt" : "ideal";
      j["r_star"] = json_number(c.r_star);
      j["quantum"] = json_number(c.value_a);
      j["classical"] = json_number(c.value_b);
      j["tangent"] = c.tangent;
      crossings.push_back(std::move(j));
    }
    return found;
  }

  // r-independence of the risk-free profile for this game.
  void risk_free(const std::string& prefix) {
    double lo_a = 1e300, hi_a = -1e300, lo_b = 1e300, hi_b = -1e300;
    for (double r : default_r_grid()) {
      const auto p = quantum_payoffs(game, CorruptionRate(r), strategies::risk_free(), strategies::risk_free());
      lo_a = std::min(lo_a, p.a);
      hi_a = std::max(hi_a, p.a);
      lo_b = std::min(lo_b, p.b);
      hi_b = std::max(hi_b, p.b);
    }
    log.at_most(prefix + ".risk_free.spread", "max-min of risk-free payoffs over 101 rates", 1e-9,
                std::max(hi_a - lo_a, hi_b - lo_b));
    point("risk_free", 0.0, {lo_a, lo_b}, "payoffs of (pi/2,0) for both players, constant in r");
  }

  Reproduction finish() {
    const auto& grid = curve.r_grid();
    CsvTable csv({"r", "qA", "qB", "cA", "cB", "cA_ideal", "cB_ideal"});
    const auto ideal = classical(0.0);
    for (std::size_t i = 0; i < grid.size(); ++i)
      csv.add_row({grid[i], curve.at("qA").values[i], curve.at("qB").values[i], curve.at("cA").values[i],
                   curve.at("cB").values[i], ideal.a, ideal.b});

    Json summary = report_document("reproduce");
    summary["target"] = target;
    summary["game"] = std::string(short_name(id));
    summary["quantum_profile"] = {{"alice", strategy_json(setup.quantum.alice)},
                                  {"bob", strategy_json(setup.quantum.bob)}};
    summary["classical_profile"] = {{"alice_p0", json_number(setup.classical.alice.mix.p0())},
                                    {"bob_p0", json_number(setup.classical.bob.mix.p0())}};
    const auto q0 = quantum(0.0), q1 = quantum(1.0), c0 = classical(0.0), c1 = classical(1.0);
    summary["endpoints"] = {
        {"r=0", {{"qA", json_number(q0.a)}, {"qB", json_number(q0.b)}, {"cA", json_number(c0.a)}, {"cB", json_number(c0.b)}}},
        {"r=1", {{"qA", json_number(q1.a)}, {"qB", json_number(q1.b)}, {"cA", json_number(c1.a)}, {"cB", json_number(c1.b)}}}};
    summary["points"] = points;
    summary["crossings"] = crossings;

    Reproduction out{target, {}, log.take()};
    out.files.push_back({target + ".csv", csv.render()});
    out.files.push_back({target + "_summary.json", render_json(summary)});
    out.files.push_back({target + "_assertions.json", assertions_json(target, out.assertions)});
    return out;
  }
};

inline Reproduction reproduce_fig4() {
  FigureContext fx("fig4", GameId::kPrisonersDilemma);
  for (Player who : {Player::kAlice, Player::kBob}) {
    const std::string p = who == Player::kAlice ? "fig4.alice" : "fig4.bob";
    const auto c = fx.crossings_for(who, Baseline::kCorrupt);
    fx.log.close_to(p + ".crossing_count", "crossings with the classical curve", 1.0, double(c.size()), 0.0);
    if (!c.empty()) {
      fx.log.close_to(p + ".a.r_star", "critical corruption rate", 0.5, c[0].r_star, 1e-8);
      fx.log.close_to(p + ".a.value", "payoff at the critical rate", 2.25, c[0].value_a, 1e-8);
      if (who == Player::kAlice) fx.point("a", c[0].r_star, fx.quantum(c[0].r_star), "quantum = classical");
    }
  }
  fx.log.close_to("fig4.quantum.r=0", "quantum payoff with an ideal source", 3.0, fx.quantum(0.0).a, 1e-12);
  fx.log.close_to("fig4.classical.r=0", "classical payoff with an ideal source", 1.0, fx.classical(0.0).a, 1e-12);
  fx.risk_free("fig4");
  return fx.finish();
}

inline Reproduction reproduce_fig5() {
  FigureContext fx("fig5", GameId::kSamaritansDilemma);
  auto qa = [&](double r) { return fx.quantum(r).a; };
  auto qb = [&](double r) { return fx.quantum(r).b; };

  const auto eq = find_crossings(qa, qb);
  fx.log.close_to("fig5.a.r", "quantum payoffs equal (Case 3 to Case 2)", 1.0 / 7.0, eq.empty() ? -1 : eq[0].r_star,
                  1e-6);
  fx.log.close_to("fig5.a.value", "equal quantum payoff", 96.0 / 49.0, eq.empty() ? -1 : eq[0].value_a, 1e-9);
  fx.log.close_to("fig5.a.value_at_1/7", "quantum payoffs at r=1/7", 96.0 / 49.0, qa(1.0 / 7.0), 1e-9);
  fx.log.close_to("fig5.a.value_at_1/7_b", "quantum payoffs at r=1/7", 96.0 / 49.0, qb(1.0 / 7.0), 1e-9);
  if (!eq.empty()) fx.point("a", eq[0].r_star, fx.quantum(eq[0].r_star), "quantum payoffs equal");

  for (Player who : {Player::kBob, Player::kAlice}) {
    const bool alice = who == Player::kAlice;
    const auto c = fx.crossings_for(who, Baseline::kCorrupt);
    const std::string label = alice ? "c" : "b";
    fx.log.close_to("fig5." + label + ".count", "crossings with the classical curve", 1.0, double(c.size()), 0.0);
    if (!c.empty()) {
      fx.log.close_to("fig5." + label + ".r_star", "quantum to classical advantage", 0.5, c[0].r_star, 1e-6);
      fx.point(label, c[0].r_star, fx.quantum(c[0].r_star),
               alice ? "Alice: quantum to classical advantage" : "Bob: quantum to classical advantage");
    }
  }

  const auto m = locate_minimum(qa);
  fx.log.close_to("fig5.min.r", "argmin of Alice's quantum payoff", 0.8, m.r, 1e-6);
  fx.log.close_to("fig5.min.value", "minimum of Alice's quantum payoff", -0.2, m.value, 1e-6);
  fx.point("min_qA", m.r, fx.quantum(m.r), "minimum of Alice's quantum payoff");

  const auto zero = find_crossings(qa, [](double) { return 0.0; });
  fx.log.close_to("fig5.case1.boundary", "Alice's quantum payoff reaches 0 (Case 1 from here)", 0.6,
                  zero.empty() ? -1 : zero[0].r_star, 1e-6);
  if (!zero.empty()) fx.point("case1_start", zero[0].r_star, fx.quantum(zero[0].r_star), "Case 1 for r above");

  double line = 0.0, flat = 0.0;
  for (double r : fx.curve.r_grid()) {
    const auto c = fx.classical(r);
    line = std::max(line, std::abs(c.a - (-0.2 + 0.9 * r)));
    flat = std::max(flat, std::abs(c.b - 1.5));
  }
  fx.log.at_most("fig5.classical_a.line", "max residual of cA against -0.2+0.9r", 1e-9, line);
  fx.log.at_most("fig5.classical_b.constant", "max deviation of cB from 1.5", 1e-12, flat);
  fx.log.close_to("fig5.quantum.r=1.a", "Alice's quantum payoff at r=1", 0.0, qa(1.0), 1e-12);
  fx.log.close_to("fig5.quantum.r=1.b", "Bob's quantum payoff at r=1", 0.0, qb(1.0), 1e-12);
  fx.risk_free("fig5");
  return fx.finish();
}

inline Reproduction reproduce_fig6() {
  FigureContext fx("fig6", GameId::kBattleOfSexes);
  const auto ca = fx.crossings_for(Player::kAlice, Baseline::kCorrupt);
  const auto cb = fx.crossings_for(Player::kBob, Baseline::kCorrupt);
  fx.log.close_to("fig6.alice.count", "Alice's crossings with the classical curve", 2.0, double(ca.size()), 0.0);
  fx.log.close_to("fig6.bob.count", "Bob's crossings with the classical curve", 2.0, double(cb.size()), 0.0);
  if (ca.size() == 2) {
    fx.log.close_to("fig6.b.r", "Alice: quantum to classical advantage", 0.2, ca[0].r_star, 1e-6);
    fx.log.close_to("fig6.a.alice.r", "Alice: classical to quantum advantage", 0.5, ca[1].r_star, 1e-6);
    fx.point("b", ca[0].r_star, fx.quantum(ca[0].r_star), "Alice: quantum to classical advantage");
  }
  if (cb.size() == 2) {
    fx.log.close_to("fig6.a.bob.r", "Bob: quantum to classical advantage", 0.5, cb[0].r_star, 1e-6);
    fx.log.close_to("fig6.c.r", "Bob: classical to quantum advantage", 0.8, cb[1].r_star, 1e-6);
    fx.point("a", cb[0].r_star, fx.quantum(cb[0].r_star), "transition from $B>$A to $A>$B");
    fx.point("c", cb[1].r_star, fx.quantum(cb[1].r_star), "Bob: classical to quantum advantage");
  }

  double diff = 0.0;
  for (double r : fx.curve.r_grid()) {
    const auto c = fx.classical(r);
    diff = std::max(diff, std::abs(c.a - c.b));
  }
  fx.log.at_most("fig6.classical.equal", "max |cA-cB| over 101 rates", 1e-12, diff);

  // Against the ideal-source classical value 2/3 Alice's curve only touches.
  const auto ideal = fx.crossings_for(Player::kAlice, Baseline::kIdeal);
  fx.log.close_to("fig6.ideal.alice.count", "Alice's contacts with the ideal classical line", 1.0,
                  double(ideal.size()), 0.0);
  if (!ideal.empty()) {
    fx.log.close_to("fig6.ideal.alice.r", "tangent contact point", 1.0 / 3.0, ideal[0].r_star, 1e-6);
    fx.log.close_to("fig6.ideal.alice.tangent", "contact is tangential", 1.0, ideal[0].tangent ? 1.0 : 0.0, 0.0);
  }
  fx.crossings_for(Player::kBob, Baseline::kIdeal);

  const auto rf = quantum_payoffs(fx.game, CorruptionRate(0.3), strategies::risk_free(), strategies::risk_free());
  fx.log.close_to("fig6.risk_free.a", "risk-free payoff for Alice", 0.75, rf.a, 1e-12);
  fx.log.close_to("fig6.risk_free.b", "risk-free payoff for Bob", 0.75, rf.b, 1e-12);
  fx.risk_free("fig6");
  return fx.finish();
}

}  // namespace detail

// Throws std::invalid_argument for an unknown target.
inline Reproduction reproduce(std::string_view target, const SearchOptions& options = {}) {
  if (target == "table1") return detail::reproduce_table("table1", GameId::kPrisonersDilemma, options);
  if (target == "table2") return detail::reproduce_table("table2", GameId::kSamaritansDilemma, options);
  if (target == "table3") return detail::reproduce_table("table3", GameId::kBattleOfSexes, options);
  if (target == "fig4") return detail::reproduce_fig4();
  if (target == "fig5") return detail::reproduce_fig5();
  if (target == "fig6") return detail::reproduce_fig6();
  throw std::invalid_argument("unknown reproduce target '" + std::string(target) + "'");
}

}  // namespace qgame
