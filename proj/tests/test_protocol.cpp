#include <gtest/gtest.h>

#include <cmath>

#include "oracle.hpp"
#include "qgame/protocol.hpp"

using namespace qgame;

namespace {

const Complex I{0.0, 1.0};

PayoffPair oracle_payoffs(const BimatrixGame& g, double r, const StrategyParams& a, const StrategyParams& b) {
  const auto p = oracle::probabilities(r, a.theta(), a.phi(), b.theta(), b.phi());
  PayoffPair out;
  for (int n = 0; n < 4; ++n) {
    out.a += p[n] * g.outcome_payoff(n).a;
    out.b += p[n] * g.outcome_payoff(n).b;
  }
  return out;
}

// Classical play without any circuit: each source bit is wrong with
// probability r, and a player's flip operator inverts their bit.
PayoffPair bernoulli_bits(const BimatrixGame& g, double r, double p0a, double p0b) {
  PayoffPair out;
  const double src[2] = {1 - r, r};
  const double act_a[2] = {p0a, 1 - p0a}, act_b[2] = {p0b, 1 - p0b};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 2; ++v) {
          const double w = src[x] * src[y] * act_a[u] * act_b[v];
          const auto& pay = g.payoff(x ^ u, y ^ v);
          out.a += w * pay.a;
          out.b += w * pay.b;
        }
  return out;
}

const char* kGames[] = {"pd", "sd", "bos"};

}  // namespace

TEST(Entangler, ActionOnBasisStates) {
  const double s = 1.0 / std::sqrt(2.0);
  const Mat4& j = entangler_ref();
  for (int f = 0; f < 2; ++f)
    for (int g = 0; g < 2; ++g) {
      const Vec4 out = qgame::apply(j, basis_state(2 * f + g));
      const double sign = (f + g) % 2 == 0 ? 1.0 : -1.0;
      EXPECT_LT(std::abs(out[2 * f + g] - s), 1e-15);
      EXPECT_LT(std::abs(out[2 * (1 - f) + (1 - g)] - I * sign * s), 1e-15);
    }
}

TEST(Entangler, MatchesPauliForm) {
  const auto ref = oracle::entangler();
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) EXPECT_LT(std::abs(entangler()(r, c) - ref[r][c]), 1e-15);
}

TEST(Entangler, CommutesWithClassicalOperators) {
  const Mat2 flip = strategy_unitary(strategies::flip());
  const Mat2 ops[2] = {Mat2::identity(), flip};
  for (const auto& a : ops)
    for (const auto& b : ops) {
      const Mat4 k = kron(a, b);
      EXPECT_LT(max_abs_diff(entangler() * k, k * entangler()), 1e-15);
    }
}

TEST(Strategy, NamedOperators) {
  EXPECT_LT(max_abs_diff(strategy_unitary(strategies::identity()), Mat2::identity()), 1e-15);
  EXPECT_LT(max_abs_diff(strategy_unitary(strategies::phase()), Mat2{I, 0.0, 0.0, -I}), 1e-15);
  EXPECT_LT(max_abs_diff(strategy_unitary(strategies::flip()), Mat2{0.0, 1.0, -1.0, 0.0}), 1e-15);
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_LT(max_abs_diff(strategy_unitary(strategies::risk_free()), Mat2{s, s, -s, s}), 1e-15);
}

TEST(Strategy, ParameterValidation) {
  try {
    StrategyParams(3.5, 0.0);
    FAIL();
  } catch (const OutOfRange& e) {
    EXPECT_NE(std::string(e.what()).find("theta"), std::string::npos);
  }
  try {
    StrategyParams(0.0, 2.0);
    FAIL();
  } catch (const OutOfRange& e) {
    EXPECT_NE(std::string(e.what()).find("phi"), std::string::npos);
  }
  EXPECT_NO_THROW(StrategyParams(kPi, kHalfPi));
  EXPECT_THROW(CorruptionRate(-0.01), OutOfRange);
  EXPECT_THROW(CorruptionRate(std::nan("")), OutOfRange);
  EXPECT_THROW(BasisPair(2, 0), OutOfRange);
}

TEST(Source, CorruptInputIsDiagonalProduct) {
  const auto rho = corrupt_input(CorruptionRate(0.3));
  const auto p = rho.populations();
  EXPECT_NEAR(p[0], 0.49, 1e-15);
  EXPECT_NEAR(p[1], 0.21, 1e-15);
  EXPECT_NEAR(p[2], 0.21, 1e-15);
  EXPECT_NEAR(p[3], 0.09, 1e-15);
  EXPECT_EQ(rho(0, 3), Complex(0.0));
}

TEST(Source, EntangledMixtureDecomposition) {
  oracle::Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    const CorruptionRate r(rng.unit());
    const auto direct = conjugate_by(corrupt_input(r), entangler());
    EXPECT_LT(max_abs_diff(direct.mat(), entangled_mixture(r).mat()), 1e-12);
  }
}

TEST(Outcomes, MatchDensityMatrixOracle) {
  oracle::Rng rng(32);
  for (int i = 0; i < 200; ++i) {
    const double r = rng.unit();
    const StrategyParams a(rng.theta(), rng.phi()), b(rng.theta(), rng.phi());
    const auto got = outcome_distribution(CorruptionRate(r), a, b);
    const auto ref = oracle::probabilities(r, a.theta(), a.phi(), b.theta(), b.phi());
    for (int n = 0; n < 4; ++n) EXPECT_NEAR(got[n], ref[n], 1e-12);
  }
}

TEST(Outcomes, IdealSourcePhaseProfileGivesCooperation) {
  const auto d = outcome_distribution(CorruptionRate(0.0), strategies::phase(), strategies::phase());
  EXPECT_NEAR(d[0], 1.0, 1e-15);
}

TEST(Classical, CommutesToBernoulliBits) {
  oracle::Rng rng(33);
  for (int i = 0; i < 200; ++i) {
    const auto g = builtin_game(kGames[i % 3]);
    const double r = rng.unit(), pa = rng.unit(), pb = rng.unit();
    const auto got = classical_payoffs(g, CorruptionRate(r), {MixedStrategy(pa)}, {MixedStrategy(pb)});
    const auto ref = bernoulli_bits(g, r, pa, pb);
    EXPECT_NEAR(got.a, ref.a, 1e-12);
    EXPECT_NEAR(got.b, ref.b, 1e-12);
  }
}

// Payoff at rate r interpolates the four basis-input payoffs quadratically.
TEST(QuadraticLaw, InterpolatesBasisInputs) {
  oracle::Rng rng(34);
  for (int i = 0; i < 50; ++i) {
    const auto g = builtin_game(kGames[i % 3]);
    const StrategyParams a(rng.theta(), rng.phi()), b(rng.theta(), rng.phi());
    PayoffPair base[4];
    for (int k = 0; k < 4; ++k) base[k] = quantum_payoffs(g, CorruptionRate(0.0), a, b, BasisPair(k >> 1, k & 1));
    for (int t = 0; t < 50; ++t) {
      const double r = rng.unit();
      const double w[4] = {(1 - r) * (1 - r), r * (1 - r), r * (1 - r), r * r};
      PayoffPair expect;
      for (int k = 0; k < 4; ++k) {
        expect.a += w[k] * base[k].a;
        expect.b += w[k] * base[k].b;
      }
      const auto got = quantum_payoffs(g, CorruptionRate(r), a, b);
      EXPECT_NEAR(got.a, expect.a, 1e-9);
      EXPECT_NEAR(got.b, expect.b, 1e-9);
    }
  }
}

TEST(Symmetry, PrisonersDilemmaPlayerSwap) {
  oracle::Rng rng(35);
  const auto pd = builtin_game("pd");
  for (int i = 0; i < 200; ++i) {
    const CorruptionRate r(rng.unit());
    const StrategyParams a(rng.theta(), rng.phi()), b(rng.theta(), rng.phi());
    const auto ab = quantum_payoffs(pd, r, a, b);
    const auto ba = quantum_payoffs(pd, r, b, a);
    EXPECT_NEAR(ab.a, ba.b, 1e-12);
    EXPECT_NEAR(ab.b, ba.a, 1e-12);
  }
}

TEST(HalfCorruption, UniformOutcomes) {
  oracle::Rng rng(36);
  for (const char* id : kGames) {
    const auto g = builtin_game(id);
    const auto mean = g.mean_payoff();
    for (int i = 0; i < 1000; ++i) {
      const StrategyParams a(rng.theta(), rng.phi()), b(rng.theta(), rng.phi());
      const auto d = outcome_distribution(CorruptionRate(0.5), a, b);
      for (int n = 0; n < 4; ++n) ASSERT_NEAR(d[n], 0.25, 1e-12);
      const auto p = expected_payoffs(g, d);
      ASSERT_NEAR(p.a, mean.a, 1e-12);
      ASSERT_NEAR(p.b, mean.b, 1e-12);
    }
  }
}

TEST(RiskFree, PayoffsIndependentOfCorruption) {
  for (const char* id : kGames) {
    const auto g = builtin_game(id);
    const auto ref = quantum_payoffs(g, CorruptionRate(0.0), strategies::risk_free(), strategies::risk_free());
    for (int i = 0; i <= 100; ++i) {
      const auto p = quantum_payoffs(g, CorruptionRate(i / 100.0), strategies::risk_free(), strategies::risk_free());
      EXPECT_NEAR(p.a, ref.a, 1e-9);
      EXPECT_NEAR(p.b, ref.b, 1e-9);
    }
  }
  const auto bos = quantum_payoffs(builtin_game("bos"), CorruptionRate(0.37), strategies::risk_free(),
                                   strategies::risk_free());
  EXPECT_NEAR(bos.a, 0.75, 1e-12);
  EXPECT_NEAR(bos.b, 0.75, 1e-12);
}

TEST(ClosedForms, IdealProfilesUnderCorruption) {
  const auto pd = builtin_game("pd"), sd = builtin_game("sd"), bos = builtin_game("bos");
  for (int i = 0; i <= 20; ++i) {
    const double r = i / 20.0;
    const CorruptionRate rate(r);
    const auto s = quantum_payoffs(sd, rate, strategies::phase(), strategies::phase());
    EXPECT_NEAR(s.a, 3 - 8 * r + 5 * r * r, 1e-12);
    EXPECT_NEAR(s.b, 2 - 2 * r * r, 1e-12);
    const auto b = quantum_payoffs(bos, rate, strategies::flip(), strategies::flip());
    EXPECT_NEAR(b.a, 1 - 2 * r + 3 * r * r, 1e-12);
  }
  const auto p = quantum_payoffs(pd, CorruptionRate(0.25), strategies::phase(), strategies::phase());
  EXPECT_NEAR(p.a, 43.0 / 16.0, 1e-12);
  EXPECT_NEAR(p.b, 43.0 / 16.0, 1e-12);
}

TEST(Kernel, FactorsReproduceCircuit) {
  oracle::Rng rng(37);
  for (int i = 0; i < 20; ++i) {
    const Mat2 ua = strategy_unitary({rng.theta(), rng.phi()});
    const Mat2 ub = strategy_unitary({rng.theta(), rng.phi()});
    const Mat4 m = adjoint(entangler()) * kron(ua, ub) * entangler();
    EXPECT_LT(max_abs_diff(OutcomeKernel::alice_factor(ua) * OutcomeKernel::bob_factor(ub), m), 1e-14);
  }
}
