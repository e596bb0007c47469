#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracle.hpp"
#include "qgame/linalg.hpp"
#include "qgame/protocol.hpp"

using namespace qgame;

namespace {

const Complex I{0.0, 1.0};

Mat2 random_unitary(oracle::Rng& rng) { return strategy_unitary({rng.theta(), rng.phi()}); }

Mat2 random_matrix(oracle::Rng& rng) {
  Mat2 m;
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) m(r, c) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return m;
}

}  // namespace

TEST(Matrix, IdentityIsMultiplicativeUnit) {
  const Mat4 a = kron(Mat2{1.0, 2.0, I, -1.0}, Mat2{0.5, -I, 3.0, 1.0});
  EXPECT_EQ(a * Mat4::identity(), a);
  EXPECT_EQ(Mat4::identity() * a, a);
}

TEST(Matrix, RejectsNonFiniteEntries) {
  EXPECT_THROW((Mat2{1.0, 0.0, std::numeric_limits<double>::quiet_NaN(), 1.0}), std::invalid_argument);
  EXPECT_THROW((Mat2{1.0, 0.0, 1.0}), std::invalid_argument);
}

TEST(Matrix, AdjointConjugatesAndTransposes) {
  const Mat2 m{1.0, I, 2.0 + I, 3.0};
  const Mat2 a = adjoint(m);
  EXPECT_EQ(a(0, 1), Complex(2.0, -1.0));
  EXPECT_EQ(a(1, 0), -I);
  EXPECT_EQ(adjoint(a), m);
}

TEST(Kron, FirstFactorIsMajorIndex) {
  const Mat2 x{0.0, 1.0, 1.0, 0.0};
  // sigma_x on the first qubit maps |00> (index 0) to |10> (index 2).
  const Vec4 out = qgame::apply(kron(x, Mat2::identity()), basis_state(0));
  EXPECT_EQ(out[2], Complex(1.0));
  EXPECT_EQ(out[0], Complex(0.0));
}

TEST(Kron, MixedProductIdentity) {
  oracle::Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const Mat2 a = random_matrix(rng), b = random_matrix(rng), c = random_matrix(rng), d = random_matrix(rng);
    EXPECT_LT(max_abs_diff(kron(a, b) * kron(c, d), kron(a * c, b * d)), 1e-12);
  }
}

TEST(Unitarity, StrategyUnitariesAndEntangler) {
  EXPECT_TRUE(is_unitary(entangler(), 1e-12));
  oracle::Rng rng(12);
  for (int i = 0; i < 100; ++i) EXPECT_TRUE(is_unitary(random_unitary(rng), 1e-12));
  EXPECT_FALSE(is_unitary(Mat2{1.0, 1.0, 0.0, 1.0}, 1e-6));
  EXPECT_THROW(is_unitary(Mat2::identity(), 0.0), std::invalid_argument);
}

TEST(Eigenvalues, PauliProductSpectrum) {
  const Mat2 y{0.0, -I, I, 0.0};
  const auto ev = hermitian_eigenvalues(kron(y, y));
  EXPECT_NEAR(ev[0], -1.0, 1e-12);
  EXPECT_NEAR(ev[1], -1.0, 1e-12);
  EXPECT_NEAR(ev[2], 1.0, 1e-12);
  EXPECT_NEAR(ev[3], 1.0, 1e-12);
}

TEST(Eigenvalues, ConjugationPreservesSpectrum) {
  oracle::Rng rng(13);
  const Mat4 d = Mat4::diagonal({0.1, 0.2, 0.3, 0.4});
  for (int i = 0; i < 20; ++i) {
    const Mat4 u = kron(random_unitary(rng), random_unitary(rng)) * entangler();
    const auto ev = hermitian_eigenvalues(u * d * adjoint(u));
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(ev[k], 0.1 * (k + 1), 1e-12);
  }
}

TEST(DensityMatrix, ValidatesInvariants) {
  EXPECT_NO_THROW(DensityMatrix4::maximally_mixed());
  EXPECT_THROW(DensityMatrix4(Mat4::identity()), InvalidState);                       // trace 4
  EXPECT_THROW(DensityMatrix4(Mat4::diagonal({1.5, -0.5, 0.0, 0.0})), InvalidState);  // negative
  Mat4 m = Mat4::diagonal({0.5, 0.5, 0.0, 0.0});
  m(0, 1) = I;
  EXPECT_THROW(DensityMatrix4{m}, InvalidState);  // not Hermitian
}

TEST(DensityMatrix, PureStatePopulations) {
  const double s = 1.0 / std::sqrt(2.0);
  const auto rho = DensityMatrix4::pure({s, 0.0, 0.0, I * s});
  const auto p = rho.populations();
  EXPECT_NEAR(p[0], 0.5, 1e-15);
  EXPECT_NEAR(p[3], 0.5, 1e-15);
  EXPECT_NEAR(std::abs(rho(0, 3)), 0.5, 1e-15);
}

TEST(Conjugation, ComposesAsProduct) {
  oracle::Rng rng(14);
  const auto rho = DensityMatrix4(Mat4::diagonal({0.4, 0.3, 0.2, 0.1}));
  for (int i = 0; i < 50; ++i) {
    const Mat4 u = kron(random_unitary(rng), random_unitary(rng));
    const Mat4 v = entangler() * kron(random_unitary(rng), Mat2::identity());
    const auto two_steps = conjugate_by(conjugate_by(rho, u), v);
    const auto one_step = conjugate_by(rho, v * u);
    EXPECT_LT(max_abs_diff(two_steps.mat(), one_step.mat()), 1e-12);
  }
}

TEST(Conjugation, RejectsNonUnitary) {
  EXPECT_THROW(conjugate_by(DensityMatrix4::maximally_mixed(), 2.0 * Mat4::identity()), NonUnitary);
}

TEST(TraceDistance, OrthogonalAndIdenticalStates) {
  const auto a = DensityMatrix4::pure(basis_state(0));
  const auto b = DensityMatrix4::pure(basis_state(3));
  EXPECT_NEAR(trace_distance(a, b), 1.0, 1e-12);
  EXPECT_NEAR(trace_distance(a, a), 0.0, 1e-12);
  EXPECT_NEAR(trace_distance(a, DensityMatrix4::maximally_mixed()), 0.75, 1e-12);
}

TEST(BasisState, RejectsBadIndex) { EXPECT_THROW(basis_state(4), OutOfRange); }
