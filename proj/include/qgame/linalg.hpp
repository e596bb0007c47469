#pragma once

// Fixed-size complex linear algebra for one- and two-qubit operators.
//
// Only 2x2 and 4x4 matrices exist; every operation is pure and works on
// values, so the types can be shared freely between threads.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>

#include "qgame/errors.hpp"

namespace qgame {

using Complex = std::complex<double>;

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

template <std::size_t N>
class SquareMatrix {
  static_assert(N == 2 || N == 4, "only one- and two-qubit operators are supported");

 public:
  static constexpr std::size_t dim = N;
  using Entries = std::array<Complex, N * N>;

  SquareMatrix() : e_{} {}

  // Row-major entries. Non-finite values are rejected.
  explicit SquareMatrix(const Entries& entries) : e_(entries) {
    for (const auto& z : e_)
      if (!is_finite(z)) throw std::invalid_argument("matrix entry is not finite");
  }

  SquareMatrix(std::initializer_list<Complex> entries) {
    if (entries.size() != N * N) throw std::invalid_argument("wrong number of matrix entries");
    std::copy(entries.begin(), entries.end(), e_.begin());
    for (const auto& z : e_)
      if (!is_finite(z)) throw std::invalid_argument("matrix entry is not finite");
  }

  static SquareMatrix identity() {
    SquareMatrix m;
    for (std::size_t i = 0; i < N; ++i) m.e_[i * N + i] = 1.0;
    return m;
  }

  static SquareMatrix diagonal(const std::array<Complex, N>& d) {
    SquareMatrix m;
    for (std::size_t i = 0; i < N; ++i) m.e_[i * N + i] = d[i];
    return m;
  }

  const Complex& operator()(std::size_t r, std::size_t c) const { return e_[r * N + c]; }
  Complex& operator()(std::size_t r, std::size_t c) { return e_[r * N + c]; }

  const Entries& entries() const { return e_; }

  friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
    SquareMatrix out;
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t k = 0; k < N; ++k) {
        const Complex aik = a.e_[i * N + k];
        if (aik == Complex{}) continue;
        for (std::size_t j = 0; j < N; ++j) out.e_[i * N + j] += aik * b.e_[k * N + j];
      }
    }
    return out;
  }

  friend SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b) {
    for (std::size_t i = 0; i < N * N; ++i) a.e_[i] += b.e_[i];
    return a;
  }

  friend SquareMatrix operator-(SquareMatrix a, const SquareMatrix& b) {
    for (std::size_t i = 0; i < N * N; ++i) a.e_[i] -= b.e_[i];
    return a;
  }

  friend SquareMatrix operator*(Complex s, SquareMatrix a) {
    for (auto& z : a.e_) z *= s;
    return a;
  }

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  Entries e_;
};

using Mat2 = SquareMatrix<2>;
using Mat4 = SquareMatrix<4>;
using Vec4 = std::array<Complex, 4>;

template <std::size_t N>
SquareMatrix<N> adjoint(const SquareMatrix<N>& a) {
  SquareMatrix<N> out;
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c) out(c, r) = std::conj(a(r, c));
  return out;
}

template <std::size_t N>
Complex trace(const SquareMatrix<N>& a) {
  Complex t{};
  for (std::size_t i = 0; i < N; ++i) t += a(i, i);
  return t;
}

template <std::size_t N>
double max_abs_diff(const SquareMatrix<N>& a, const SquareMatrix<N>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < N * N; ++i) m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

// a's indices are the major (first tensor factor) ones.
inline Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return out;
}

inline Vec4 apply(const Mat4& m, const Vec4& v) {
  Vec4 out{};
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) out[r] += m(r, c) * v[c];
  return out;
}

inline Vec4 basis_state(std::size_t index) {
  if (index >= 4) throw OutOfRange("basis index must be in [0, 3]");
  Vec4 v{};
  v[index] = 1.0;
  return v;
}

template <std::size_t N>
bool is_unitary(const SquareMatrix<N>& u, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  return max_abs_diff(u * adjoint(u), SquareMatrix<N>::identity()) <= tol;
}

template <std::size_t N>
bool is_hermitian(const SquareMatrix<N>& a, double tol) {
  return max_abs_diff(a, adjoint(a)) <= tol;
}

// Eigenvalues of a Hermitian 4x4 matrix, ascending.
//
// Embeds H = A + iB as the real symmetric [[A, -B], [B, A]], whose spectrum
// is that of H with every eigenvalue doubled, and diagonalizes it with
// cyclic Jacobi rotations.
inline std::array<double, 4> hermitian_eigenvalues(const Mat4& h) {
  constexpr std::size_t n = 8;
  std::array<std::array<double, n>, n> s{};
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      // Symmetrize so tiny Hermiticity defects do not leak into the rotation.
      const Complex z = 0.5 * (h(r, c) + std::conj(h(c, r)));
      s[r][c] = z.real();
      s[r + 4][c + 4] = z.real();
      s[r][c + 4] = -z.imag();
      s[r + 4][c] = z.imag();
    }
  }

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0, total = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q) {
        total += s[p][q] * s[p][q];
        if (p != q) off += s[p][q] * s[p][q];
      }
    if (off <= 1e-30 * std::max(total, 1e-300)) break;

    for (std::size_t p = 0; p < n - 1; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(s[p][q]) < 1e-300) continue;
        const double theta = (s[q][q] - s[p][p]) / (2.0 * s[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double skp = s[k][p], skq = s[k][q];
          s[k][p] = c * skp - sn * skq;
          s[k][q] = sn * skp + c * skq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double spk = s[p][k], sqk = s[q][k];
          s[p][k] = c * spk - sn * sqk;
          s[q][k] = sn * spk + c * sqk;
        }
      }
    }
  }

  std::array<double, n> diag{};
  for (std::size_t i = 0; i < n; ++i) diag[i] = s[i][i];
  std::sort(diag.begin(), diag.end());
  // Paired eigenvalues are adjacent after sorting; average each pair.
  std::array<double, 4> out{};
  for (std::size_t i = 0; i < 4; ++i) out[i] = 0.5 * (diag[2 * i] + diag[2 * i + 1]);
  return out;
}

// Two-qubit density operator: Hermitian, unit trace, positive semidefinite.
class DensityMatrix4 {
 public:
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kTraceTol = 1e-12;
  static constexpr double kEigenFloor = -1e-10;

  explicit DensityMatrix4(const Mat4& m) : m_(m) {
    if (!is_hermitian(m_, kHermitianTol)) throw InvalidState("density matrix is not Hermitian");
    const Complex t = trace(m_);
    if (std::abs(t.real() - 1.0) > kTraceTol || std::abs(t.imag()) > kTraceTol)
      throw InvalidState("density matrix trace differs from one");
    if (hermitian_eigenvalues(m_)[0] < kEigenFloor)
      throw InvalidState("density matrix has a negative eigenvalue");
  }

  static DensityMatrix4 pure(const Vec4& psi) {
    Mat4 m;
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) m(r, c) = psi[r] * std::conj(psi[c]);
    return DensityMatrix4(m);
  }

  static DensityMatrix4 maximally_mixed() { return DensityMatrix4(0.25 * Mat4::identity()); }

  const Mat4& mat() const { return m_; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  // Real part of the diagonal: the computational-basis populations.
  std::array<double, 4> populations() const {
    return {m_(0, 0).real(), m_(1, 1).real(), m_(2, 2).real(), m_(3, 3).real()};
  }

 private:
  Mat4 m_;
};

// U rho U^dagger.
inline DensityMatrix4 conjugate_by(const DensityMatrix4& rho, const Mat4& u) {
  if (!is_unitary(u, 1e-10)) throw NonUnitary("conjugating operator is not unitary");
  Mat4 out = u * rho.mat() * adjoint(u);
  // Restore exact Hermiticity lost to rounding.
  out = 0.5 * (out + adjoint(out));
  return DensityMatrix4(out);
}

inline double trace_distance(const DensityMatrix4& a, const DensityMatrix4& b) {
  const auto ev = hermitian_eigenvalues(a.mat() - b.mat());
  double s = 0.0;
  for (double x : ev) s += std::abs(x);
  return 0.5 * s;
}

}  // namespace qgame
