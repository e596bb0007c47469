#include <gtest/gtest.h>

#include <cmath>

#include "oracle.hpp"
#include "qgame/analysis/crossings.hpp"

using namespace qgame;

TEST(Crossings, LinearSignChange) {
  const auto c = find_crossings([](double x) { return 2 * x; }, [](double x) { return 0.6 - x + 0.0 * x; });
  ASSERT_EQ(c.size(), 1u);
  EXPECT_NEAR(c[0].r_star, 0.2, 1e-10);
  EXPECT_FALSE(c[0].tangent);
  EXPECT_NEAR(c[0].value_a, c[0].value_b, 1e-9);
}

TEST(Crossings, IdenticalCurvesGiveNothing) {
  auto f = [](double x) { return x * x; };
  EXPECT_TRUE(find_crossings(f, f).empty());
}

TEST(Crossings, DisjointCurvesGiveNothing) {
  EXPECT_TRUE(find_crossings([](double x) { return x; }, [](double x) { return x + 1; }).empty());
}

TEST(Crossings, TangentTouchIsFlagged) {
  const auto c = find_crossings([](double x) { return (x - 0.4) * (x - 0.4); }, [](double) { return 0.0; });
  ASSERT_EQ(c.size(), 1u);
  EXPECT_TRUE(c[0].tangent);
  EXPECT_NEAR(c[0].r_star, 0.4, 1e-4);
}

TEST(Crossings, SeveralRootsInOrder) {
  const auto c = find_crossings([](double x) { return std::sin(10 * x); }, [](double) { return 0.0; });
  ASSERT_EQ(c.size(), 4u);
  EXPECT_NEAR(c[0].r_star, 0.0, 1e-12);
  EXPECT_FALSE(c[0].tangent);
  for (int k = 1; k < 4; ++k) EXPECT_NEAR(c[k].r_star, k * oracle::kPi / 10, 1e-10);
}

TEST(Crossings, RootOnGridPoint) {
  const auto c = find_crossings([](double x) { return x - 0.5; }, [](double) { return 0.0; });
  ASSERT_EQ(c.size(), 1u);
  EXPECT_NEAR(c[0].r_star, 0.5, 1e-12);
}

TEST(Crossings, RejectsTinyScan) {
  EXPECT_THROW(find_crossings([](double x) { return x; }, [](double) { return 0.5; }, 2), std::invalid_argument);
}

TEST(Crossings, ResultsSatisfyEqualityFloor) {
  oracle::Rng rng(41);
  for (int i = 0; i < 200; ++i) {
    const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3), c = rng.uniform(-1, 1);
    auto f = [&](double x) { return a * x * x + b * x + c; };
    auto g = [](double x) { return 0.5 * x; };
    for (const auto& r : find_crossings(f, g)) {
      EXPECT_LT(std::abs(f(r.r_star) - g(r.r_star)), 1e-9);
      EXPECT_GE(r.r_star, 0.0);
      EXPECT_LE(r.r_star, 1.0);
    }
  }
}
