// Prisoner's Dilemma with a noisy source: payoffs of the ideal-source
// quantum strategy, the classical equilibrium and the risk-free strategy,
// then the equilibria the players find once they know the noise level.

#include <cstdio>

#include "qgame/qgame.hpp"

int main() {
  using namespace qgame;
  const BimatrixGame pd = builtin_game(GameId::kPrisonersDilemma);
  const auto setup = scenario1_defaults(GameId::kPrisonersDilemma);

  std::printf("%6s %10s %10s %10s\n", "r", "quantum", "classical", "risk-free");
  for (double r : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const CorruptionRate rate(r);
    const auto q = quantum_payoffs(pd, rate, setup.quantum.alice, setup.quantum.bob);
    const auto c = classical_payoffs(pd, rate, setup.classical.alice, setup.classical.bob);
    const auto f = quantum_payoffs(pd, rate, strategies::risk_free(), strategies::risk_free());
    std::printf("%6.2f %10.4f %10.4f %10.4f\n", r, q.a, c.a, f.a);
  }

  for (const auto& c : scenario1_crossings(pd, setup, Player::kAlice))
    std::printf("quantum advantage lost at r = %.6f (payoff %.4f)\n", c.r_star, c.value_a);

  const auto result = ne_search(pd, CorruptionRate(0.75));
  std::printf("equilibria at r = 0.75:\n");
  for (const auto& f : result.families) {
    const auto& rep = f.representative;
    std::printf("  (%.4f, %.4f) (%.4f, %.4f) -> (%.4f, %.4f)  %s\n", rep.alice.theta(), rep.alice.phi(),
                rep.bob.theta(), rep.bob.phi(), rep.payoffs.a, rep.payoffs.b, f.descriptor.describe().c_str());
  }
}
