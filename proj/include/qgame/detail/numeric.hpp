#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <thread>
#include <utility>
#include <vector>

namespace qgame::detail {

struct Maximum {
  double x;
  double value;
};

// Golden-section search for a maximum of f on [lo, hi]. The endpoints are
// evaluated as well so maxima on the boundary are not lost.
template <class F>
Maximum golden_section_maximize(F&& f, double lo, double hi, double tol = 1e-12, int max_iter = 200) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  Maximum best = fc >= fd ? Maximum{c, fc} : Maximum{d, fd};
  for (double x : {lo, hi}) {
    const double fx = f(x);
    if (fx > best.value) best = {x, fx};
  }
  return best;
}

// Point i of an n-point uniform grid on [lo, hi]; the last point is exactly hi.
inline double grid_point(double lo, double hi, int i, int n) {
  if (n <= 1) return lo;
  if (i == n - 1) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = grid_point(lo, hi, i, n);
  return out;
}

// Van der Corput radical inverse, used for deterministic probe points.
inline double radical_inverse(unsigned index, unsigned base) {
  double inv = 1.0 / base, f = inv, out = 0.0;
  while (index > 0) {
    out += f * (index % base);
    index /= base;
    f *= inv;
  }
  return out;
}

// Halton point in [0,1)^D, starting from index 1.
template <std::size_t D>
std::array<double, D> halton(unsigned index) {
  static constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13};
  static_assert(D <= 6);
  std::array<double, D> p{};
  for (std::size_t k = 0; k < D; ++k) p[k] = radical_inverse(index, kPrimes[k]);
  return p;
}

// Runs body(begin, end) over contiguous chunks of [0, n) on worker threads.
// Each index is owned by exactly one chunk, so writes to per-index slots
// need no synchronization and results do not depend on scheduling.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(hw, std::max<std::size_t>(1, n / 16));
  if (workers <= 1) {
    body(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk, end = std::min(n, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&body, begin, end] { body(begin, end); });
  }
  for (auto& t : threads) t.join();
}

}  // namespace qgame::detail
