#pragma once

// Locating the corruption rates where two payoff curves meet.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qgame/detail/numeric.hpp"

namespace qgame {

struct CrossingResult {
  double r_star = 0.0;
  double value_a = 0.0;  // f(r_star)
  double value_b = 0.0;  // g(r_star)
  bool tangent = false;  // curves touch without changing order
};

// |f - g| below this counts as equality.
inline constexpr double kCrossingFloor = 1e-9;

namespace detail {

template <class D>
double bisect_root(D&& d, double a, double b) {
  double da = d(a);
  for (int it = 0; it < 200 && (b - a) > 1e-13; ++it) {
    const double m = 0.5 * (a + b);
    const double dm = d(m);
    if (dm == 0.0) return m;
    if ((dm > 0.0) == (da > 0.0)) {
      a = m;
      da = dm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

template <class D>
double minimize_abs(D&& d, double a, double b) {
  return golden_section_maximize([&](double x) { return -std::abs(d(x)); }, a, b, 1e-13).x;
}

}  // namespace detail

// Sign changes of f - g on a uniform scan of [lo, hi], refined by bisection.
// Grazing contacts (|f - g| reaches the floor without a sign change) are
// reported with tangent = true. Identical curves yield no crossings.
template <class F, class G>
std::vector<CrossingResult> find_crossings(F&& f, G&& g, int scan_points = 101, double lo = 0.0, double hi = 1.0) {
  if (scan_points < 3) throw std::invalid_argument("find_crossings needs at least 3 scan points");
  auto d = [&](double x) { return f(x) - g(x); };
  const auto xs = detail::linspace(lo, hi, scan_points);
  const std::size_t n = xs.size();
  std::vector<double> ds(n);
  std::vector<bool> zero(n);
  for (std::size_t i = 0; i < n; ++i) {
    ds[i] = d(xs[i]);
    zero[i] = std::abs(ds[i]) <= kCrossingFloor;
  }
  if (std::all_of(zero.begin(), zero.end(), [](bool z) { return z; })) return {};

  std::vector<CrossingResult> out;
  auto emit = [&](double x, bool tangent) { out.push_back({x, f(x), g(x), tangent}); };

  std::ptrdiff_t prev = -1;  // last index with a clearly nonzero difference
  for (std::size_t i = 0; i < n; ++i) {
    if (zero[i]) continue;
    if (prev < 0) {
      if (i > 0) emit(detail::minimize_abs(d, xs[0], xs[i]), false);  // equal at the left edge
    } else {
      const auto p = static_cast<std::size_t>(prev);
      const bool sign_change = (ds[p] > 0.0) != (ds[i] > 0.0);
      if (sign_change) {
        emit(detail::bisect_root(d, xs[p], xs[i]), false);
      } else if (i > p + 1) {
        emit(detail::minimize_abs(d, xs[p], xs[i]), true);
      }
    }
    prev = static_cast<std::ptrdiff_t>(i);
  }
  if (prev >= 0 && static_cast<std::size_t>(prev) + 1 < n)
    emit(detail::minimize_abs(d, xs[static_cast<std::size_t>(prev)], xs[n - 1]), false);  // right edge

  // Touches that fall between scan points.
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (zero[i - 1] || zero[i] || zero[i + 1]) continue;
    const bool same_sign = ((ds[i - 1] > 0) == (ds[i] > 0)) && ((ds[i] > 0) == (ds[i + 1] > 0));
    if (!same_sign) continue;
    const double ai = std::abs(ds[i]);
    if (ai <= std::abs(ds[i - 1]) && ai < std::abs(ds[i + 1])) {
      const double x = detail::minimize_abs(d, xs[i - 1], xs[i + 1]);
      if (std::abs(d(x)) <= kCrossingFloor) emit(x, true);
    }
  }

  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.r_star < b.r_star; });
  return out;
}

}  // namespace qgame
