#pragma once

// The referee's entangle / play / disentangle / measure circuit fed by a
// corrupt source of product states.

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "qgame/errors.hpp"
#include "qgame/games.hpp"
#include "qgame/linalg.hpp"

namespace qgame {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

// A point (theta, phi) of the two-parameter strategy set,
// 0 <= theta <= pi and 0 <= phi <= pi/2.
class StrategyParams {
 public:
  StrategyParams() : StrategyParams(0.0, 0.0) {}
  StrategyParams(double theta, double phi) : theta_(theta), phi_(phi) {
    if (!(theta >= 0.0 && theta <= kPi))
      throw OutOfRange("theta = " + std::to_string(theta) + " outside [0, pi]");
    if (!(phi >= 0.0 && phi <= kHalfPi)) throw OutOfRange("phi = " + std::to_string(phi) + " outside [0, pi/2]");
  }

  double theta() const { return theta_; }
  double phi() const { return phi_; }

  friend bool operator==(const StrategyParams&, const StrategyParams&) = default;

 private:
  double theta_;
  double phi_;
};

namespace strategies {
inline StrategyParams identity() { return {0.0, 0.0}; }
inline StrategyParams flip() { return {kPi, 0.0}; }               // i sigma_y
inline StrategyParams phase() { return {0.0, kHalfPi}; }          // i sigma_z
inline StrategyParams risk_free() { return {kHalfPi, 0.0}; }      // (sigma_0 + i sigma_y) / sqrt 2
}  // namespace strategies

class CorruptionRate {
 public:
  explicit CorruptionRate(double r) : r_(r) {
    if (!(r >= 0.0 && r <= 1.0)) throw OutOfRange("corruption rate " + std::to_string(r) + " outside [0, 1]");
  }
  double value() const { return r_; }

 private:
  double r_;
};

// Intended source output |f>|g>.
struct BasisPair {
  int f = 0;
  int g = 0;

  BasisPair() = default;
  BasisPair(int f_, int g_) : f(f_), g(g_) {
    if ((f != 0 && f != 1) || (g != 0 && g != 1)) throw OutOfRange("basis labels must be bits");
  }
  int index() const { return 2 * f + g; }
};

struct ClassicalMove {
  MixedStrategy mix;
};

namespace detail {

inline Mat4 build_entangler() {
  const double s = 1.0 / std::sqrt(2.0);
  Mat4 j;
  for (int f = 0; f < 2; ++f) {
    for (int g = 0; g < 2; ++g) {
      const int col = 2 * f + g;
      const int flipped = 2 * (1 - f) + (1 - g);
      const double sign = ((f + g) % 2 == 0) ? 1.0 : -1.0;
      j(col, col) += s;
      j(flipped, col) += Complex(0.0, sign * s);
    }
  }
  return j;
}

}  // namespace detail

// J|fg> = (|fg> + i(-1)^(f+g) |(1-f)(1-g)>) / sqrt 2, column by column.
inline const Mat4& entangler_ref() {
  static const Mat4 j = detail::build_entangler();
  return j;
}

inline Mat4 entangler() { return entangler_ref(); }

inline Mat2 strategy_unitary(const StrategyParams& s) {
  const double c = std::cos(s.theta() / 2.0);
  const double sn = std::sin(s.theta() / 2.0);
  const Complex e = std::polar(1.0, s.phi());
  Mat2 u;
  u(0, 0) = e * c;
  u(0, 1) = sn;
  u(1, 0) = -sn;
  u(1, 1) = std::conj(e) * c;
  return u;
}

// Each source qubit independently emits the wrong bit with probability r.
inline std::array<double, 4> source_populations(CorruptionRate r, BasisPair base = {}) {
  const double p = r.value();
  auto bit_prob = [p](int intended, int bit) { return bit == intended ? 1.0 - p : p; };
  std::array<double, 4> d{};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) d[2 * x + y] = bit_prob(base.f, x) * bit_prob(base.g, y);
  return d;
}

inline DensityMatrix4 corrupt_input(CorruptionRate r, BasisPair base = {}) {
  const auto d = source_populations(r, base);
  return DensityMatrix4(Mat4::diagonal({d[0], d[1], d[2], d[3]}));
}

// Mixture of the four maximally entangled states with the source weights,
// assembled directly from the Bell-type vectors (|00> -+ i|11>)/sqrt 2 and
// (|01> -+ i|10>)/sqrt 2.
inline DensityMatrix4 entangled_mixture(CorruptionRate r) {
  const double p = r.value();
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i{0.0, 1.0};
  const Vec4 psi_plus{s, 0.0, 0.0, i * s};
  const Vec4 psi_minus{s, 0.0, 0.0, -i * s};
  const Vec4 phi_plus{0.0, s, i * s, 0.0};
  const Vec4 phi_minus{0.0, s, -i * s, 0.0};
  const double w[4] = {(1 - p) * (1 - p), p * p, p * (1 - p), p * (1 - p)};
  const Vec4* states[4] = {&psi_plus, &psi_minus, &phi_plus, &phi_minus};
  Mat4 m;
  for (int k = 0; k < 4; ++k) m = m + Complex(w[k]) * DensityMatrix4::pure(*states[k]).mat();
  return DensityMatrix4(m);
}

// Outcome probabilities of the full circuit for a fixed corruption rate.
//
// The input is diagonal, so p_n = sum_k |M_nk|^2 d_k with
// M = J^dagger (U_A (x) U_B) J. Splitting M = L_A R_B with
// L_A = J^dagger (U_A (x) I) and R_B = (I (x) U_B) J lets grid searches
// precompute each player's factor once.
class OutcomeKernel {
 public:
  explicit OutcomeKernel(CorruptionRate r, BasisPair base = {}) : d_(source_populations(r, base)) {}

  static Mat4 alice_factor(const Mat2& ua) { return adjoint(entangler_ref()) * kron(ua, Mat2::identity()); }
  static Mat4 bob_factor(const Mat2& ub) { return kron(Mat2::identity(), ub) * entangler_ref(); }

  std::array<double, 4> probabilities(const Mat4& alice, const Mat4& bob) const {
    std::array<double, 4> p{};
    for (std::size_t n = 0; n < 4; ++n) {
      for (std::size_t k = 0; k < 4; ++k) {
        if (d_[k] == 0.0) continue;
        Complex m{};
        for (std::size_t a = 0; a < 4; ++a) m += alice(n, a) * bob(a, k);
        p[n] += std::norm(m) * d_[k];
      }
    }
    return p;
  }

  PayoffPair payoffs(const BimatrixGame& game, const Mat4& alice, const Mat4& bob) const {
    const auto p = probabilities(alice, bob);
    PayoffPair out;
    for (int n = 0; n < 4; ++n) {
      out.a += game.outcome_payoff(n).a * p[n];
      out.b += game.outcome_payoff(n).b * p[n];
    }
    return out;
  }

  const std::array<double, 4>& input_populations() const { return d_; }

 private:
  std::array<double, 4> d_;
};

inline OutcomeDistribution outcome_distribution(CorruptionRate r, const StrategyParams& alice,
                                                const StrategyParams& bob, BasisPair base = {}) {
  const OutcomeKernel kernel(r, base);
  return OutcomeDistribution(kernel.probabilities(OutcomeKernel::alice_factor(strategy_unitary(alice)),
                                                  OutcomeKernel::bob_factor(strategy_unitary(bob))));
}

inline PayoffPair quantum_payoffs(const BimatrixGame& game, CorruptionRate r, const StrategyParams& alice,
                                  const StrategyParams& bob, BasisPair base = {}) {
  return expected_payoffs(game, outcome_distribution(r, alice, bob, base));
}

// Classical play through the same circuit: each player applies the identity
// with probability p0 and i sigma_y otherwise.
inline PayoffPair classical_payoffs(const BimatrixGame& game, CorruptionRate r, const ClassicalMove& alice,
                                    const ClassicalMove& bob, BasisPair base = {}) {
  const StrategyParams pure[2] = {strategies::identity(), strategies::flip()};
  PayoffPair out;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const double w = alice.mix.weight(x) * bob.mix.weight(y);
      if (w == 0.0) continue;
      const auto p = quantum_payoffs(game, r, pure[x], pure[y], base);
      out.a += w * p.a;
      out.b += w * p.b;
    }
  }
  return out;
}

}  // namespace qgame
