#include <gtest/gtest.h>

#include <cmath>

#include "oracle.hpp"
#include "qgame/analysis/equilibrium.hpp"
#include "qgame/analysis/scenario2.hpp"

using namespace qgame;

namespace {

const double kQuarterPi = kPi / 4;

NeSearchResult search(const char* game, double r) { return ne_search(builtin_game(game), CorruptionRate(r)); }

// Brute-force best deviation gain on a dense grid, evaluated with the oracle.
double oracle_gain(const BimatrixGame& g, double r, const StrategyParams& a, const StrategyParams& b) {
  auto pay = [&](double ta, double pa, double tb, double pb) {
    const auto p = oracle::probabilities(r, ta, pa, tb, pb);
    PayoffPair out;
    for (int n = 0; n < 4; ++n) {
      out.a += p[n] * g.outcome_payoff(n).a;
      out.b += p[n] * g.outcome_payoff(n).b;
    }
    return out;
  };
  const auto cur = pay(a.theta(), a.phi(), b.theta(), b.phi());
  double best_a = cur.a, best_b = cur.b;
  for (int i = 0; i <= 180; ++i)
    for (int k = 0; k <= 90; ++k) {
      const double t = oracle::kPi * i / 180, p = oracle::kPi / 2 * k / 90;
      best_a = std::max(best_a, pay(t, p, b.theta(), b.phi()).a);
      best_b = std::max(best_b, pay(a.theta(), a.phi(), t, p).b);
    }
  return std::max(best_a - cur.a, best_b - cur.b);
}

}  // namespace

TEST(Certify, IdealPrisonersDilemmaProfile) {
  const auto c = certify_ne(builtin_game("pd"), CorruptionRate(0.0), strategies::phase(), strategies::phase());
  EXPECT_LE(c.max_gain, 1e-6);
  EXPECT_NEAR(c.payoffs.a, 3.0, 1e-12);
}

TEST(Certify, MutualDenyMatchesBruteForce) {
  const auto g = builtin_game("pd");
  const auto c = certify_ne(g, CorruptionRate(0.0), strategies::identity(), strategies::identity());
  const double ref = oracle_gain(g, 0.0, strategies::identity(), strategies::identity());
  EXPECT_NEAR(ref, 2.0, 1e-9);
  EXPECT_NEAR(c.max_gain, ref, 1e-6);
}

TEST(Certify, AgreesWithBruteForceOnRandomProfiles) {
  oracle::Rng rng(51);
  const auto g = builtin_game("bos");
  for (int i = 0; i < 5; ++i) {
    const double r = rng.unit();
    const StrategyParams a(rng.theta(), rng.phi()), b(rng.theta(), rng.phi());
    const auto c = certify_ne(g, CorruptionRate(r), a, b);
    // The certifier refines off-grid, so it can only find more.
    EXPECT_GE(c.max_gain, oracle_gain(g, r, a, b) - 1e-12);
    EXPECT_LE(c.max_gain, oracle_gain(g, r, a, b) + 1e-3);
  }
}

TEST(Certify, HalfRateEveryProfileIsEquilibrium) {
  oracle::Rng rng(52);
  for (const char* id : {"pd", "sd", "bos"}) {
    const Certifier cert(builtin_game(id), CorruptionRate(0.5));
    for (int i = 0; i < 10; ++i) EXPECT_LE(cert.certify({rng.theta(), rng.phi()}, {rng.theta(), rng.phi()}).max_gain, 1e-10);
  }
}

TEST(Search, PrisonersDilemmaIdealSource) {
  const auto res = search("pd", 0.0);
  ASSERT_EQ(res.families.size(), 1u);
  const auto& f = res.families[0];
  EXPECT_EQ(f.descriptor.kind, FamilyKind::kPoint);
  EXPECT_NEAR(f.representative.alice.theta(), 0.0, 1e-6);
  EXPECT_NEAR(f.representative.alice.phi(), kHalfPi, 1e-6);
  EXPECT_NEAR(f.representative.bob.phi(), kHalfPi, 1e-6);
  EXPECT_NEAR(f.representative.payoffs.a, 3.0, 1e-9);
  EXPECT_NEAR(f.representative.payoffs.b, 3.0, 1e-9);
  EXPECT_FALSE(res.truncated);
}

TEST(Search, PrisonersDilemmaThreeQuarters) {
  const auto res = search("pd", 0.75);
  ASSERT_EQ(res.families.size(), 1u);
  const auto& f = res.families[0];
  EXPECT_NEAR(f.representative.payoffs.a, 43.0 / 16, 1e-9);
  EXPECT_TRUE(f.descriptor.contains(to_array({0, kQuarterPi}, {0, kQuarterPi}), 1e-9, 1e-9));
  EXPECT_NEAR(f.representative.alice.phi(), kQuarterPi, 0.05);
}

TEST(Search, SamaritanFullCorruptionFamily) {
  const auto res = search("sd", 1.0);
  const EquilibriumFamily* fam = nullptr;
  for (const auto& f : res.families)
    if (f.descriptor.kind == FamilyKind::kPhiSum) fam = &f;
  ASSERT_NE(fam, nullptr);
  EXPECT_NEAR(fam->representative.payoffs.a, 3.0, 1e-9);
  EXPECT_NEAR(fam->representative.payoffs.b, 2.0, 1e-9);
  EXPECT_NEAR(fam->descriptor.ranges[1].lo, 0.0, 1e-6);
  EXPECT_NEAR(fam->descriptor.ranges[1].hi, kQuarterPi, 0.03);
  EXPECT_EQ(fam->descriptor.ranges[0].hi, 0.0);
}

TEST(Search, SamaritanThreeQuartersPhiSum) {
  const auto res = search("sd", 0.75);
  const auto* f = find_family(res, {0, kQuarterPi}, {0, kQuarterPi}, {21.0 / 16, 15.0 / 8});
  ASSERT_NE(f, nullptr);
  EXPECT_EQ(f->descriptor.kind, FamilyKind::kPhiSum);
}

TEST(Search, HalfRateAllStrategies) {
  for (const char* id : {"bos", "sd"}) {
    const auto res = search(id, 0.5);
    ASSERT_EQ(res.families.size(), 1u) << id;
    EXPECT_EQ(res.families[0].descriptor.kind, FamilyKind::kAllStrategies);
    const auto mean = builtin_game(id).mean_payoff();
    EXPECT_NEAR(res.families[0].representative.payoffs.a, mean.a, 1e-12);
  }
}

TEST(Search, BattleOfSexesQuarterRate) {
  const auto res = search("bos", 0.25);
  const auto* flip = find_family(res, strategies::flip(), strategies::flip(), {11.0 / 16, 19.0 / 16});
  ASSERT_NE(flip, nullptr);
  const auto* mid = find_family(res, {kHalfPi, 0.0}, {kHalfPi, kHalfPi}, {15.0 / 16, 21.0 / 16});
  ASSERT_NE(mid, nullptr);
  EXPECT_EQ(mid->descriptor.kind, FamilyKind::kPhiSum);
}

// The theta-parametric profiles (theta,phi),(theta,pi/2-phi) reproduce the
// quoted payoff formula for every theta, but strictly inside (pi/2, pi) a
// player can gain by deviating.
TEST(Search, BattleOfSexesQuarterRateThetaFamilyInterior) {
  const auto g = builtin_game("bos");
  const Certifier cert(g, CorruptionRate(0.25));
  for (double theta : {5 * kPi / 8, 3 * kPi / 4, 7 * kPi / 8}) {
    const auto c = cert.certify({theta, 0.0}, {theta, kHalfPi});
    EXPECT_NEAR(c.payoffs.a, (13 - 2 * std::cos(2 * theta)) / 16, 1e-12);
    EXPECT_NEAR(c.payoffs.b, (20 - std::cos(2 * theta)) / 16, 1e-12);
    EXPECT_GT(c.max_gain, 1e-3) << theta;
  }
  EXPECT_LE(cert.certify({kPi, 0.0}, {kPi, kHalfPi}).max_gain, 1e-6);
}

TEST(Search, BattleOfSexesLateRates) {
  for (double r : {0.75, 1.0}) {
    const auto res = search("bos", r);
    ASSERT_EQ(res.families.size(), 1u);
    const auto& rep = res.families[0].representative;
    EXPECT_EQ(res.families[0].descriptor.kind, FamilyKind::kPoint);
    EXPECT_EQ(rep.alice, strategies::flip());
    EXPECT_EQ(rep.bob, strategies::flip());
  }
}

TEST(Search, PrisonersDilemmaFineScanUnique) {
  const auto table = scenario2_table(builtin_game("pd"), fine_scan_rates());
  ASSERT_EQ(table.size(), 11u);
  for (const auto& e : table) {
    ASSERT_EQ(e.result.families.size(), 1u) << e.r;
    const auto kind = e.result.families[0].descriptor.kind;
    if (e.r == 0.5)
      EXPECT_EQ(kind, FamilyKind::kAllStrategies);
    else
      EXPECT_NE(kind, FamilyKind::kAllStrategies) << e.r;
  }
}

TEST(Search, StableUnderFinerCertification) {
  SearchOptions fine;
  fine.fine_theta_steps = 513;
  fine.fine_phi_steps = 257;
  const std::pair<const char*, double> cases[] = {{"pd", 0.25}, {"sd", 0.75}, {"bos", 0.0}};
  for (auto [id, r] : cases) {
    const auto g = builtin_game(id);
    const Certifier cert(g, CorruptionRate(r), fine);
    for (const auto& f : ne_search(g, CorruptionRate(r)).families)
      EXPECT_LE(cert.certify(f.representative.alice, f.representative.bob).max_gain, 1e-6) << id << " " << r;
  }
}

TEST(Search, Deterministic) {
  const auto a = search("sd", 0.25), b = search("sd", 0.25);
  ASSERT_EQ(a.families.size(), b.families.size());
  for (std::size_t i = 0; i < a.families.size(); ++i) {
    EXPECT_EQ(a.families[i].representative.alice, b.families[i].representative.alice);
    EXPECT_EQ(a.families[i].representative.bob, b.families[i].representative.bob);
    EXPECT_EQ(a.families[i].descriptor.describe(), b.families[i].descriptor.describe());
  }
}

TEST(Search, OptionValidation) {
  SearchOptions o;
  o.theta_steps = 4;
  EXPECT_THROW(ne_search(builtin_game("pd"), CorruptionRate(0), o), std::invalid_argument);
  o = {};
  o.epsilon = 0;
  EXPECT_THROW(ne_search(builtin_game("pd"), CorruptionRate(0), o), std::invalid_argument);
}

TEST(Family, ContainsAndDescribe) {
  FamilyDescriptor d;
  d.kind = FamilyKind::kPhiSum;
  d.ranges = {Interval{0, 0}, Interval{0, kQuarterPi}, Interval{0, 0}, Interval{kQuarterPi, kHalfPi}};
  EXPECT_TRUE(d.contains({0, 0.3, 0, kHalfPi - 0.3}, 1e-9, 1e-9));
  EXPECT_FALSE(d.contains({0, 0.3, 0, 0.3}, 1e-9, 1e-9));
  EXPECT_FALSE(d.contains({0, 1.0, 0, kHalfPi - 1.0}, 1e-9, 1e-9));
  EXPECT_NE(d.describe().find("phi_A+phi_B=pi/2"), std::string::npos);

  FamilyDescriptor p;
  p.ranges = {Interval{kPi, kPi}, Interval{0, 0}, Interval{kPi, kPi}, Interval{0, 0}};
  // phi has no effect at theta = pi.
  EXPECT_TRUE(p.contains({kPi, 1.0, kPi, 0.2}, 1e-9, 1e-9));
  EXPECT_EQ(p.describe(), "point");
}
