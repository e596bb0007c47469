#pragma once

// Players unaware of the corruption: fixed ideal-source strategies swept
// over the corruption rate and compared with classical play.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgame/analysis/crossings.hpp"
#include "qgame/detail/numeric.hpp"
#include "qgame/games.hpp"
#include "qgame/protocol.hpp"

namespace qgame {

struct QuantumProfile {
  StrategyParams alice;
  StrategyParams bob;
};

struct ClassicalProfile {
  ClassicalMove alice;
  ClassicalMove bob;
};

struct SweepSeries {
  std::string label;
  std::vector<double> values;
};

class SweepCurve {
 public:
  SweepCurve(std::vector<double> r_grid, std::vector<SweepSeries> series)
      : r_grid_(std::move(r_grid)), series_(std::move(series)) {
    if (r_grid_.empty()) throw std::invalid_argument("sweep grid is empty");
    for (std::size_t i = 0; i < r_grid_.size(); ++i) {
      if (!(r_grid_[i] >= 0.0 && r_grid_[i] <= 1.0)) throw OutOfRange("sweep grid point outside [0, 1]");
      if (i > 0 && !(r_grid_[i] > r_grid_[i - 1])) throw std::invalid_argument("sweep grid not strictly increasing");
    }
    for (const auto& s : series_)
      if (s.values.size() != r_grid_.size()) throw std::invalid_argument("series length differs from grid");
  }

  const std::vector<double>& r_grid() const { return r_grid_; }
  const std::vector<SweepSeries>& series() const { return series_; }

  const SweepSeries& at(const std::string& label) const {
    for (const auto& s : series_)
      if (s.label == label) return s;
    throw std::out_of_range("no series named " + label);
  }

 private:
  std::vector<double> r_grid_;
  std::vector<SweepSeries> series_;
};

// Columns qA, qB (quantum profile) and cA, cB (classical profile).
inline SweepCurve scenario1_sweep(const BimatrixGame& game, const QuantumProfile& quantum,
                                  const ClassicalProfile& classical, std::vector<double> r_grid,
                                  BasisPair base = {}) {
  const std::size_t n = r_grid.size();
  std::vector<double> qa(n), qb(n), ca(n), cb(n);
  for (std::size_t i = 0; i < n; ++i) {
    const CorruptionRate r(r_grid[i]);
    const auto q = quantum_payoffs(game, r, quantum.alice, quantum.bob, base);
    const auto c = classical_payoffs(game, r, classical.alice, classical.bob, base);
    qa[i] = q.a;
    qb[i] = q.b;
    ca[i] = c.a;
    cb[i] = c.b;
  }
  return SweepCurve(std::move(r_grid), {{"qA", qa}, {"qB", qb}, {"cA", ca}, {"cB", cb}});
}

inline std::vector<double> default_r_grid(int points = 101) { return detail::linspace(0.0, 1.0, points); }

struct Scenario1Setup {
  QuantumProfile quantum;
  ClassicalProfile classical;
};

// Classical comparison profile: the game's baseline classical equilibrium.
inline ClassicalProfile classical_baseline(const BimatrixGame& game) {
  const auto eq = baseline_equilibrium(game);
  if (!eq) throw std::invalid_argument("game has no classical equilibrium to compare against");
  return {ClassicalMove{eq->alice}, ClassicalMove{eq->bob}};
}

// Ideal-source strategies that resolve each builtin game's dilemma.
inline QuantumProfile ideal_quantum_profile(GameId id) {
  switch (id) {
    case GameId::kPrisonersDilemma:
    case GameId::kSamaritansDilemma:
      return {strategies::phase(), strategies::phase()};
    case GameId::kBattleOfSexes:
      return {strategies::flip(), strategies::flip()};
  }
  throw UnknownGame("unknown builtin game id");
}

inline Scenario1Setup scenario1_defaults(GameId id) {
  return {ideal_quantum_profile(id), classical_baseline(builtin_game(id))};
}

enum class Player { kAlice, kBob };

inline double component(const PayoffPair& p, Player who) { return who == Player::kAlice ? p.a : p.b; }

enum class Baseline {
  kCorrupt,  // classical profile played through the corrupt source
  kIdeal,    // classical profile with an ideal source (constant in r)
};

// Crossings of one player's quantum payoff with the classical baseline.
inline std::vector<CrossingResult> scenario1_crossings(const BimatrixGame& game, const Scenario1Setup& setup,
                                                       Player who, Baseline baseline = Baseline::kCorrupt,
                                                       int scan_points = 101, BasisPair base = {}) {
  auto quantum = [&](double r) {
    return component(quantum_payoffs(game, CorruptionRate(r), setup.quantum.alice, setup.quantum.bob, base), who);
  };
  const double ideal = component(
      classical_payoffs(game, CorruptionRate(0.0), setup.classical.alice, setup.classical.bob, base), who);
  auto classical = [&](double r) {
    if (baseline == Baseline::kIdeal) return ideal;
    return component(
        classical_payoffs(game, CorruptionRate(r), setup.classical.alice, setup.classical.bob, base), who);
  };
  return find_crossings(quantum, classical, scan_points);
}

// Samaritan's dilemma outcome classes.
enum class SamaritanCase {
  kUnclassified = 0,
  kInsufficient = 1,  // $A <= 0
  kWeak = 2,          // 0 < $A <= $B
  kStrong = 3,        // 0 <= $B < $A
};

inline SamaritanCase classify_samaritan_case(const PayoffPair& p, double tol = 1e-12) {
  if (p.a <= tol) return SamaritanCase::kInsufficient;
  if (p.a <= p.b + tol) return SamaritanCase::kWeak;
  if (p.b >= -tol) return SamaritanCase::kStrong;
  return SamaritanCase::kUnclassified;
}

struct CurveMinimum {
  double r;
  double value;
};

// Grid argmin of f on [0, 1] followed by golden-section refinement.
template <class F>
CurveMinimum locate_minimum(F&& f, int scan_points = 101) {
  const auto xs = detail::linspace(0.0, 1.0, scan_points);
  std::size_t best = 0;
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (f(xs[i]) < f(xs[best])) best = i;
  const double lo = xs[best == 0 ? 0 : best - 1];
  const double hi = xs[std::min(best + 1, xs.size() - 1)];
  const auto m = detail::golden_section_maximize([&](double x) { return -f(x); }, lo, hi, 1e-12);
  return {m.x, -m.value};
}

}  // namespace qgame
