#pragma once

// Players informed of the corruption rate: equilibrium search per rate.

#include <vector>

#include "qgame/analysis/equilibrium.hpp"
#include "qgame/detail/numeric.hpp"

namespace qgame {

struct Scenario2Entry {
  double r;
  NeSearchResult result;
};

inline std::vector<double> default_table_rates() { return {0.0, 0.25, 0.5, 0.75, 1.0}; }

// r = 0, 0.1, ..., 1.
inline std::vector<double> fine_scan_rates() { return detail::linspace(0.0, 1.0, 11); }

inline std::vector<Scenario2Entry> scenario2_table(const BimatrixGame& game, const std::vector<double>& rates,
                                                   const SearchOptions& options = {}) {
  std::vector<Scenario2Entry> out;
  out.reserve(rates.size());
  for (double r : rates) out.push_back({r, ne_search(game, CorruptionRate(r), options)});
  return out;
}

// First family whose shape contains the profile and whose payoffs match.
inline const EquilibriumFamily* find_family(const NeSearchResult& result, const StrategyParams& alice,
                                            const StrategyParams& bob, const PayoffPair& payoffs,
                                            double tol = 1e-6) {
  const Profile4 p = detail::canonical(to_array(alice, bob));
  for (const auto& f : result.families) {
    const bool payoff_ok = f.descriptor.payoff_parametric ||
                           (std::abs(f.representative.payoffs.a - payoffs.a) <= tol &&
                            std::abs(f.representative.payoffs.b - payoffs.b) <= tol);
    if (payoff_ok && f.descriptor.contains(p, tol, tol)) return &f;
  }
  return nullptr;
}

}  // namespace qgame
