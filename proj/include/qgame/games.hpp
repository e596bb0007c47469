#pragma once

// Classical 2x2 bimatrix games and their equilibria.
//
// Action index 0 is played through the identity operator and action index 1
// through i*sigma_y, for both players. The first entry of a payoff pair
// belongs to Alice, whose action is the first measured bit.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qgame/errors.hpp"

namespace qgame {

struct PayoffPair {
  double a = 0.0;
  double b = 0.0;

  friend bool operator==(const PayoffPair&, const PayoffPair&) = default;
};

inline PayoffPair swapped(const PayoffPair& p) { return {p.b, p.a}; }

enum class GameId { kPrisonersDilemma, kSamaritansDilemma, kBattleOfSexes };

inline std::string_view short_name(GameId id) {
  switch (id) {
    case GameId::kPrisonersDilemma: return "pd";
    case GameId::kSamaritansDilemma: return "sd";
    case GameId::kBattleOfSexes: return "bos";
  }
  return "?";
}

inline std::optional<GameId> parse_game_id(std::string_view s) {
  if (s == "pd" || s == "PD") return GameId::kPrisonersDilemma;
  if (s == "sd" || s == "SD") return GameId::kSamaritansDilemma;
  if (s == "bos" || s == "BoS" || s == "BOS") return GameId::kBattleOfSexes;
  return std::nullopt;
}

class BimatrixGame {
 public:
  using Table = std::array<std::array<PayoffPair, 2>, 2>;

  BimatrixGame(std::string name, std::array<std::string, 2> alice_actions,
               std::array<std::string, 2> bob_actions, const Table& payoff)
      : name_(std::move(name)),
        alice_actions_(std::move(alice_actions)),
        bob_actions_(std::move(bob_actions)),
        payoff_(payoff) {
    for (const auto& row : payoff_)
      for (const auto& p : row)
        if (!std::isfinite(p.a) || !std::isfinite(p.b))
          throw std::invalid_argument("payoff entries must be finite");
  }

  const std::string& name() const { return name_; }
  const std::array<std::string, 2>& alice_actions() const { return alice_actions_; }
  const std::array<std::string, 2>& bob_actions() const { return bob_actions_; }
  const Table& table() const { return payoff_; }

  // Payoffs when Alice plays action j and Bob plays action l.
  const PayoffPair& payoff(int j, int l) const { return payoff_[j][l]; }

  // Payoff for measurement outcome n = 2j + l.
  const PayoffPair& outcome_payoff(int n) const { return payoff_[n >> 1][n & 1]; }

  PayoffPair mean_payoff() const {
    PayoffPair m;
    for (const auto& row : payoff_)
      for (const auto& p : row) {
        m.a += 0.25 * p.a;
        m.b += 0.25 * p.b;
      }
    return m;
  }

  // Largest minus smallest entry over both players' tables.
  double payoff_span() const {
    double lo = payoff_[0][0].a, hi = lo;
    for (const auto& row : payoff_)
      for (const auto& p : row) {
        lo = std::min({lo, p.a, p.b});
        hi = std::max({hi, p.a, p.b});
      }
    return hi - lo;
  }

 private:
  std::string name_;
  std::array<std::string, 2> alice_actions_;
  std::array<std::string, 2> bob_actions_;
  Table payoff_;
};

inline BimatrixGame builtin_game(GameId id) {
  switch (id) {
    case GameId::kPrisonersDilemma:
      return BimatrixGame("Prisoner's Dilemma", {"Deny", "Confess"}, {"Deny", "Confess"},
                          {{{{{3, 3}, {0, 5}}}, {{{5, 0}, {1, 1}}}}});
    case GameId::kSamaritansDilemma:
      return BimatrixGame("Samaritan's Dilemma", {"Aid", "No-aid"}, {"Work", "Loaf"},
                          {{{{{3, 2}, {-1, 3}}}, {{{-1, 1}, {0, 0}}}}});
    case GameId::kBattleOfSexes:
      return BimatrixGame("Battle of Sexes", {"Ballet", "Football"}, {"Ballet", "Football"},
                          {{{{{2, 1}, {0, 0}}}, {{{0, 0}, {1, 2}}}}});
  }
  throw UnknownGame("unknown builtin game id");
}

inline BimatrixGame builtin_game(std::string_view id) {
  if (auto g = parse_game_id(id)) return builtin_game(*g);
  throw UnknownGame("unknown builtin game '" + std::string(id) + "'");
}

// Probability of playing action 0 (the identity operator).
class MixedStrategy {
 public:
  MixedStrategy() : MixedStrategy(1.0) {}
  explicit MixedStrategy(double p0) : p0_(p0) {
    if (!(p0 >= 0.0 && p0 <= 1.0)) throw OutOfRange("mixed-strategy probability must lie in [0, 1]");
  }
  static MixedStrategy pure(int action) { return MixedStrategy(action == 0 ? 1.0 : 0.0); }

  double p0() const { return p0_; }
  double p1() const { return 1.0 - p0_; }
  double weight(int action) const { return action == 0 ? p0_ : 1.0 - p0_; }

 private:
  double p0_;
};

// Probabilities of the four measurement outcomes, indexed by n = 2j + l.
class OutcomeDistribution {
 public:
  static constexpr double kEntryTol = 1e-12;
  static constexpr double kSumTol = 1e-10;

  explicit OutcomeDistribution(const std::array<double, 4>& p) : p_(p) {
    double sum = 0.0;
    for (double x : p_) {
      if (!(x >= -kEntryTol && x <= 1.0 + kEntryTol))
        throw InvalidState("outcome probability outside [0, 1]");
      sum += x;
    }
    if (std::abs(sum - 1.0) > kSumTol) throw InvalidState("outcome probabilities do not sum to one");
  }

  static OutcomeDistribution uniform() { return OutcomeDistribution({0.25, 0.25, 0.25, 0.25}); }

  double operator[](int n) const { return p_[n]; }
  double at(int j, int l) const { return p_[2 * j + l]; }
  const std::array<double, 4>& values() const { return p_; }

 private:
  std::array<double, 4> p_;
};

inline PayoffPair expected_payoffs(const BimatrixGame& game, const OutcomeDistribution& dist) {
  PayoffPair out;
  for (int n = 0; n < 4; ++n) {
    out.a += game.outcome_payoff(n).a * dist[n];
    out.b += game.outcome_payoff(n).b * dist[n];
  }
  return out;
}

// Classical expected payoffs of two independent mixed strategies.
inline PayoffPair mixed_payoffs(const BimatrixGame& game, const MixedStrategy& alice, const MixedStrategy& bob) {
  PayoffPair out;
  for (int j = 0; j < 2; ++j)
    for (int l = 0; l < 2; ++l) {
      const double w = alice.weight(j) * bob.weight(l);
      out.a += w * game.payoff(j, l).a;
      out.b += w * game.payoff(j, l).b;
    }
  return out;
}

struct ClassicalEquilibrium {
  enum class Kind { kPure, kMixed };
  Kind kind;
  MixedStrategy alice;
  MixedStrategy bob;
  PayoffPair payoffs;
};

namespace detail {
constexpr double kDeviationTol = 1e-12;
constexpr double kDegenerateTol = 1e-14;
}  // namespace detail

// Pure equilibria by exhaustive best-response check (row-major cell order),
// followed by the fully mixed equilibrium from the indifference conditions
// when it exists and is not degenerate.
inline std::vector<ClassicalEquilibrium> classical_equilibria(const BimatrixGame& game) {
  std::vector<ClassicalEquilibrium> out;
  for (int j = 0; j < 2; ++j) {
    for (int l = 0; l < 2; ++l) {
      const auto& p = game.payoff(j, l);
      const bool alice_ok = p.a >= game.payoff(1 - j, l).a - detail::kDeviationTol;
      const bool bob_ok = p.b >= game.payoff(j, 1 - l).b - detail::kDeviationTol;
      if (alice_ok && bob_ok)
        out.push_back({ClassicalEquilibrium::Kind::kPure, MixedStrategy::pure(j), MixedStrategy::pure(l), p});
    }
  }

  const auto& t = game.table();
  // Alice's weight on action 0 that leaves Bob indifferent, and vice versa.
  const double den_b = t[0][0].b - t[1][0].b - t[0][1].b + t[1][1].b;
  const double den_a = t[0][0].a - t[0][1].a - t[1][0].a + t[1][1].a;
  if (std::abs(den_a) > detail::kDegenerateTol && std::abs(den_b) > detail::kDegenerateTol) {
    const double p = (t[1][1].b - t[1][0].b) / den_b;
    const double q = (t[1][1].a - t[0][1].a) / den_a;
    if (p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0) {
      MixedStrategy alice(p), bob(q);
      out.push_back({ClassicalEquilibrium::Kind::kMixed, alice, bob, mixed_payoffs(game, alice, bob)});
    }
  }
  return out;
}

// Classical profile used as the Scenario I comparison baseline: the mixed
// equilibrium when one exists, otherwise the first pure equilibrium.
inline std::optional<ClassicalEquilibrium> baseline_equilibrium(const BimatrixGame& game) {
  const auto eqs = classical_equilibria(game);
  for (const auto& e : eqs)
    if (e.kind == ClassicalEquilibrium::Kind::kMixed) return e;
  if (!eqs.empty()) return eqs.front();
  return std::nullopt;
}

}  // namespace qgame
