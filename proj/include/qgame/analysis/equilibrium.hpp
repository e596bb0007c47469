#pragma once

// Nash equilibria over the continuous two-parameter strategy space for a
// known corruption rate.
//
// The search evaluates the payoff bimatrix on a coarse product grid, keeps
// profiles that are grid best responses for both players, refines them by
// alternating per-player coordinate maximization and certifies each result
// against a fine-grid best response. Certified profiles are grouped into
// families whose shape (a point, a line phi_A + phi_B = pi/2, free
// parameters, or the whole space) is detected by probing, never assumed.
//
// Completeness is only as good as the coarse grid: an equilibrium family
// with no coarse survivor nearby is not reported.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qgame/detail/numeric.hpp"
#include "qgame/games.hpp"
#include "qgame/linalg.hpp"
#include "qgame/protocol.hpp"

namespace qgame {

struct SearchOptions {
  int theta_steps = 65;
  int phi_steps = 33;
  int fine_theta_steps = 257;
  int fine_phi_steps = 129;
  double epsilon = 1e-6;
  double payoff_tol = 1e-6;   // payoff equality inside a family
  int probe_count = 32;       // probes needed to assert a family shape
  int max_refinements = 128;  // refinement budget per search
  BasisPair base{};
};

struct EquilibriumCandidate {
  StrategyParams alice;
  StrategyParams bob;
  PayoffPair payoffs;
  double max_gain = 0.0;  // best unilateral deviation gain, >= 0
  double gain_a = 0.0;
  double gain_b = 0.0;

  bool is_equilibrium(double epsilon) const { return max_gain <= epsilon; }
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool degenerate() const { return hi - lo < 1e-12; }
  bool contains(double x, double slack) const { return x >= lo - slack && x <= hi + slack; }
};

enum class FamilyKind {
  kPoint,
  kPhiSum,          // phi_A + phi_B = pi/2 along an interval of phi_A
  kFreeParameters,  // some parameters range over their whole interval
  kAllStrategies,
};

inline const char* to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::kPoint: return "point";
    case FamilyKind::kPhiSum: return "phi_sum";
    case FamilyKind::kFreeParameters: return "free_parameters";
    case FamilyKind::kAllStrategies: return "all_strategies";
  }
  return "?";
}

// Parameter order used throughout: theta_A, phi_A, theta_B, phi_B.
using Profile4 = std::array<double, 4>;

inline Profile4 to_array(const StrategyParams& a, const StrategyParams& b) {
  return {a.theta(), a.phi(), b.theta(), b.phi()};
}

inline const std::array<Interval, 4>& parameter_box() {
  static const std::array<Interval, 4> box{
      Interval{0.0, kPi}, Interval{0.0, kHalfPi}, Interval{0.0, kPi}, Interval{0.0, kHalfPi}};
  return box;
}

struct FamilyDescriptor {
  FamilyKind kind = FamilyKind::kPoint;
  // Ranges of theta_A, phi_A, theta_B, phi_B. For kPhiSum the phi_B range
  // is implied by phi_B = pi/2 - phi_A.
  std::array<Interval, 4> ranges{};
  bool theta_tied = false;  // kPhiSum: theta_A = theta_B along the family
  bool payoff_parametric = false;

  bool contains(const Profile4& p, double theta_slack, double phi_slack) const {
    switch (kind) {
      case FamilyKind::kAllStrategies:
        return true;
      case FamilyKind::kPhiSum:
        if (theta_tied && std::abs(p[0] - p[2]) > theta_slack) return false;
        return ranges[0].contains(p[0], theta_slack) && ranges[2].contains(p[2], theta_slack) &&
               ranges[1].contains(p[1], phi_slack) && std::abs(p[1] + p[3] - kHalfPi) <= phi_slack;
      case FamilyKind::kPoint:
      case FamilyKind::kFreeParameters:
        for (int player = 0; player < 2; ++player) {
          const auto& th = ranges[2 * player];
          const auto& ph = ranges[2 * player + 1];
          if (!th.contains(p[2 * player], theta_slack)) return false;
          // At theta = pi the operator does not depend on phi.
          const bool phi_irrelevant = th.lo >= kPi - 1e-12;
          if (!phi_irrelevant && !ph.contains(p[2 * player + 1], phi_slack)) return false;
        }
        return true;
    }
    return false;
  }

  std::string describe() const {
    auto fmt = [](const Interval& iv) {
      std::ostringstream os;
      os.precision(6);
      if (iv.degenerate())
        os << iv.lo;
      else
        os << "[" << iv.lo << "," << iv.hi << "]";
      return os.str();
    };
    std::ostringstream os;
    switch (kind) {
      case FamilyKind::kAllStrategies:
        os << "all strategies";
        break;
      case FamilyKind::kPoint:
        os << "point";
        break;
      case FamilyKind::kPhiSum:
        os << "phi_A+phi_B=pi/2; theta_A=" << fmt(ranges[0]) << "; theta_B=" << fmt(ranges[2])
           << (theta_tied ? " (theta_A=theta_B)" : "") << "; phi_A=" << fmt(ranges[1]);
        break;
      case FamilyKind::kFreeParameters: {
        static const char* names[4] = {"theta_A", "phi_A", "theta_B", "phi_B"};
        os << "free:";
        for (int k = 0; k < 4; ++k)
          if (!ranges[k].degenerate()) os << " " << names[k] << "=" << fmt(ranges[k]);
        break;
      }
    }
    if (payoff_parametric) os << "; payoffs vary along family";
    return os.str();
  }
};

struct EquilibriumFamily {
  FamilyDescriptor descriptor;
  EquilibriumCandidate representative;
  std::vector<EquilibriumCandidate> members;
};

struct NeSearchResult {
  std::vector<EquilibriumFamily> families;
  std::size_t survivors = 0;    // coarse-grid profiles passing the grid test
  std::size_t refinements = 0;  // survivors refined and certified
  bool truncated = false;       // refinement budget exhausted
};

namespace detail {

struct StrategyGrid {
  int theta_steps;
  int phi_steps;
  std::vector<Mat4> alice;  // J^dagger (U (x) I)
  std::vector<Mat4> bob;    // (I (x) U) J

  StrategyGrid(int nt, int np) : theta_steps(nt), phi_steps(np) {
    const std::size_t n = static_cast<std::size_t>(nt) * static_cast<std::size_t>(np);
    alice.resize(n);
    bob.resize(n);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const Mat2 u = strategy_unitary(params(i));
        alice[i] = OutcomeKernel::alice_factor(u);
        bob[i] = OutcomeKernel::bob_factor(u);
      }
    });
  }

  std::size_t size() const { return alice.size(); }
  double theta_step() const { return kPi / (theta_steps - 1); }
  double phi_step() const { return kHalfPi / (phi_steps - 1); }

  double theta(std::size_t i) const { return grid_point(0.0, kPi, static_cast<int>(i) / phi_steps, theta_steps); }
  double phi(std::size_t i) const { return grid_point(0.0, kHalfPi, static_cast<int>(i) % phi_steps, phi_steps); }
  StrategyParams params(std::size_t i) const { return {theta(i), phi(i)}; }
};

inline double clamp_theta(double t) { return std::clamp(t, 0.0, kPi); }
inline double clamp_phi(double p) { return std::clamp(p, 0.0, kHalfPi); }

}  // namespace detail

// Payoff evaluation and best-response certification for one game and
// corruption rate. Owns the fine deviation grid, so constructing one is the
// expensive step; certify() calls are cheap and thread-safe.
class Certifier {
 public:
  Certifier(const BimatrixGame& game, CorruptionRate r, const SearchOptions& options = {})
      : game_(game),
        r_(r),
        kernel_(r, options.base),
        fine_(options.fine_theta_steps, options.fine_phi_steps) {
    if (options.fine_theta_steps < 3 || options.fine_phi_steps < 3)
      throw std::invalid_argument("certification grid needs at least 3 points per axis");
  }

  const BimatrixGame& game() const { return game_; }
  CorruptionRate rate() const { return r_; }
  const OutcomeKernel& kernel() const { return kernel_; }

  PayoffPair payoffs(const StrategyParams& a, const StrategyParams& b) const {
    return kernel_.payoffs(game_, OutcomeKernel::alice_factor(strategy_unitary(a)),
                           OutcomeKernel::bob_factor(strategy_unitary(b)));
  }

  PayoffPair payoffs(const Profile4& p) const { return payoffs({p[0], p[1]}, {p[2], p[3]}); }

  // Best payoff Alice can reach against a fixed Bob strategy.
  double best_alice_payoff(const StrategyParams& bob) const {
    const Mat4 rb = OutcomeKernel::bob_factor(strategy_unitary(bob));
    return best_response(
        [&](std::size_t i) { return kernel_.payoffs(game_, fine_.alice[i], rb).a; },
        [&](double t, double p) {
          return kernel_.payoffs(game_, OutcomeKernel::alice_factor(strategy_unitary({t, p})), rb).a;
        });
  }

  double best_bob_payoff(const StrategyParams& alice) const {
    const Mat4 la = OutcomeKernel::alice_factor(strategy_unitary(alice));
    return best_response(
        [&](std::size_t i) { return kernel_.payoffs(game_, la, fine_.bob[i]).b; },
        [&](double t, double p) {
          return kernel_.payoffs(game_, la, OutcomeKernel::bob_factor(strategy_unitary({t, p}))).b;
        });
  }

  EquilibriumCandidate certify(const StrategyParams& a, const StrategyParams& b) const {
    const PayoffPair cur = payoffs(a, b);
    EquilibriumCandidate c{a, b, cur};
    c.gain_a = std::max(0.0, best_alice_payoff(b) - cur.a);
    c.gain_b = std::max(0.0, best_bob_payoff(a) - cur.b);
    c.max_gain = std::max(c.gain_a, c.gain_b);
    return c;
  }

  EquilibriumCandidate certify(const Profile4& p) const { return certify({p[0], p[1]}, {p[2], p[3]}); }

 private:
  // Fine-grid maximum followed by local refinement around the best cells.
  template <class GridEval, class PointEval>
  double best_response(GridEval&& at_grid, PointEval&& at_point) const {
    constexpr std::size_t kSeeds = 4;
    const std::size_t n = fine_.size();
    std::array<std::pair<double, std::size_t>, kSeeds> top;
    top.fill({-std::numeric_limits<double>::infinity(), 0});
    for (std::size_t i = 0; i < n; ++i) {
      const double v = at_grid(i);
      if (v > top[kSeeds - 1].first) {
        top[kSeeds - 1] = {v, i};
        for (std::size_t k = kSeeds - 1; k > 0 && top[k].first > top[k - 1].first; --k) std::swap(top[k], top[k - 1]);
      }
    }
    double best = top[0].first;
    const double ht = fine_.theta_step(), hp = fine_.phi_step();
    for (const auto& [value, idx] : top) {
      if (!std::isfinite(value)) continue;
      double t = fine_.theta(idx), p = fine_.phi(idx), v = value;
      for (int it = 0; it < 40; ++it) {
        const double before = v;
        const auto mt = detail::golden_section_maximize([&](double x) { return at_point(x, p); },
                                                        detail::clamp_theta(t - ht), detail::clamp_theta(t + ht), 1e-12);
        if (mt.value > v) {
          t = mt.x;
          v = mt.value;
        }
        const auto mp = detail::golden_section_maximize([&](double x) { return at_point(t, x); },
                                                        detail::clamp_phi(p - hp), detail::clamp_phi(p + hp), 1e-12);
        if (mp.value > v) {
          p = mp.x;
          v = mp.value;
        }
        if (v - before <= 1e-15) break;
      }
      best = std::max(best, v);
    }
    return best;
  }

  BimatrixGame game_;
  CorruptionRate r_;
  OutcomeKernel kernel_;
  detail::StrategyGrid fine_;
};

inline EquilibriumCandidate certify_ne(const BimatrixGame& game, CorruptionRate r, const StrategyParams& alice,
                                       const StrategyParams& bob, const SearchOptions& options = {}) {
  return Certifier(game, r, options).certify(alice, bob);
}

namespace detail {

// Alternating per-player coordinate maximization. A coordinate only moves
// when the player strictly gains, so points on indifference sets stay put.
inline Profile4 refine_profile(const Certifier& cert, Profile4 x, int coarse_points = 33) {
  const auto& box = parameter_box();
  for (int sweep = 0; sweep < 200; ++sweep) {
    double moved = 0.0;
    for (int k = 0; k < 4; ++k) {
      const int player = k / 2;
      auto value = [&](double v) {
        Profile4 y = x;
        y[k] = v;
        const auto p = cert.payoffs(y);
        return player == 0 ? p.a : p.b;
      };
      const double current = value(x[k]);
      const auto& iv = box[k];
      double best_x = x[k], best_v = current;
      const double step = (iv.hi - iv.lo) / (coarse_points - 1);
      for (int i = 0; i < coarse_points; ++i) {
        const double g = grid_point(iv.lo, iv.hi, i, coarse_points);
        const double v = value(g);
        if (v > best_v + 1e-13) {
          best_v = v;
          best_x = g;
        }
      }
      const double centre = best_x;
      const auto m = golden_section_maximize(value, std::max(iv.lo, centre - step), std::min(iv.hi, centre + step), 1e-12);
      if (m.value > best_v + 1e-14) {
        best_v = m.value;
        best_x = m.x;
      }
      if (best_v > current + 1e-14) {
        moved = std::max(moved, std::abs(best_x - x[k]));
        x[k] = best_x;
      }
    }
    if (moved < 1e-10) break;
  }
  return x;
}

// theta = pi makes phi irrelevant; report phi = 0 there.
inline Profile4 canonical(Profile4 p) {
  for (int player = 0; player < 2; ++player)
    if (p[2 * player] >= kPi - 1e-12) {
      p[2 * player] = kPi;
      p[2 * player + 1] = 0.0;
    }
  return p;
}

inline bool lex_less(const Profile4& a, const Profile4& b) { return a < b; }

class FamilyDetector {
 public:
  FamilyDetector(const Certifier& cert, const SearchOptions& opt) : cert_(cert), opt_(opt) {}

  EquilibriumFamily detect(const EquilibriumCandidate& rep) const {
    if (auto f = all_strategies(rep)) return *f;
    if (auto f = phi_sum(rep)) return *f;
    if (auto f = free_parameters(rep)) return *f;
    EquilibriumFamily point;
    point.descriptor.kind = FamilyKind::kPoint;
    const Profile4 p = to_array(rep.alice, rep.bob);
    for (int k = 0; k < 4; ++k) point.descriptor.ranges[k] = {p[k], p[k]};
    point.representative = rep;
    point.members = {rep};
    return point;
  }

 private:
  bool same_payoff(const PayoffPair& a, const PayoffPair& b) const {
    return std::abs(a.a - b.a) <= opt_.payoff_tol && std::abs(a.b - b.b) <= opt_.payoff_tol;
  }

  // Certifies p; with require_equal_payoff the (cheap) payoff test runs first.
  std::optional<EquilibriumCandidate> probe(const Profile4& p, const PayoffPair& ref, bool require_equal_payoff) const {
    if (require_equal_payoff && !same_payoff(cert_.payoffs(p), ref)) return std::nullopt;
    auto c = cert_.certify(p);
    if (!c.is_equilibrium(opt_.epsilon)) return std::nullopt;
    return c;
  }

  std::optional<EquilibriumFamily> all_strategies(const EquilibriumCandidate& rep) const {
    const auto& box = parameter_box();
    EquilibriumFamily fam;
    for (int i = 1; i <= opt_.probe_count; ++i) {
      const auto h = halton<4>(static_cast<unsigned>(i));
      Profile4 p;
      for (int k = 0; k < 4; ++k) p[k] = box[k].lo + h[k] * (box[k].hi - box[k].lo);
      auto c = probe(p, rep.payoffs, true);
      if (!c) return std::nullopt;
      fam.members.push_back(*c);
    }
    fam.descriptor.kind = FamilyKind::kAllStrategies;
    fam.descriptor.ranges = box;
    fam.representative = rep;
    return fam;
  }

  // The certified profile in the middle of a phi-sum family, falling back
  // to the seed when the midpoint does not certify.
  EquilibriumCandidate centre_of(const FamilyDescriptor& d, const EquilibriumCandidate& seed) const {
    const double t_a = 0.5 * (d.ranges[0].lo + d.ranges[0].hi);
    const double t_b = 0.5 * (d.ranges[2].lo + d.ranges[2].hi);
    const double p_a = 0.5 * (d.ranges[1].lo + d.ranges[1].hi);
    auto c = probe(Profile4{t_a, p_a, t_b, kHalfPi - p_a}, seed.payoffs, false);
    return c ? *c : seed;
  }

  // Widest run of passing probes on an n-point grid over [lo, hi] that
  // contains the grid point nearest to x0. Returns the covered interval.
  template <class Make>
  std::optional<Interval> scan_run(Make&& make, double lo, double hi, double x0, const PayoffPair& ref,
                                   std::vector<EquilibriumCandidate>& members) const {
    constexpr int n = 33;
    const double step = (hi - lo) / (n - 1);
    const int k0 = std::clamp(static_cast<int>(std::lround((x0 - lo) / step)), 0, n - 1);
    auto ok = [&](int k) {
      auto c = probe(make(grid_point(lo, hi, k, n)), ref, false);
      if (c) members.push_back(*c);
      return c.has_value();
    };
    if (!ok(k0)) return std::nullopt;
    int a = k0, b = k0;
    while (a > 0 && ok(a - 1)) --a;
    while (b < n - 1 && ok(b + 1)) ++b;
    if (a == b) return std::nullopt;
    // Locate each edge between the last passing and first failing point.
    auto edge = [&](double in, double out) {
      for (int it = 0; it < 30; ++it) {
        const double mid = 0.5 * (in + out);
        (probe(make(mid), ref, false) ? in : out) = mid;
      }
      return in;
    };
    const double left = a > 0 ? edge(grid_point(lo, hi, a, n), grid_point(lo, hi, a - 1, n)) : lo;
    const double right = b < n - 1 ? edge(grid_point(lo, hi, b, n), grid_point(lo, hi, b + 1, n)) : hi;
    return Interval{std::min(left, x0), std::max(right, x0)};
  }

  std::optional<EquilibriumFamily> phi_sum(const EquilibriumCandidate& rep) const {
    const Profile4 x = to_array(rep.alice, rep.bob);
    if (std::abs(x[1] + x[3] - kHalfPi) > 1e-7 || x[0] >= kPi - 1e-12 || x[2] >= kPi - 1e-12) return std::nullopt;

    std::vector<EquilibriumCandidate> scan_members;
    auto along_phi = [&](double phi_a) { return Profile4{x[0], phi_a, x[2], kHalfPi - phi_a}; };
    const auto phi_range = scan_run(along_phi, 0.0, kHalfPi, x[1], rep.payoffs, scan_members);
    if (!phi_range) return std::nullopt;

    // Confirm with probe_count evenly spaced points along the line.
    std::vector<EquilibriumCandidate> members;
    for (int i = 0; i < opt_.probe_count; ++i) {
      const double phi_a = grid_point(phi_range->lo, phi_range->hi, i, opt_.probe_count);
      auto c = probe(along_phi(phi_a), rep.payoffs, false);
      if (!c) return std::nullopt;
      members.push_back(*c);
    }

    EquilibriumFamily fam;
    fam.descriptor.kind = FamilyKind::kPhiSum;
    fam.descriptor.ranges = {Interval{x[0], x[0]}, *phi_range, Interval{x[2], x[2]},
                             Interval{kHalfPi - phi_range->hi, kHalfPi - phi_range->lo}};

    // A shared theta may also vary along the family.
    if (std::abs(x[0] - x[2]) <= 1e-9) {
      std::vector<EquilibriumCandidate> theta_members;
      auto along_theta = [&](double t) { return Profile4{t, x[1], t, x[3]}; };
      if (auto theta_range = scan_run(along_theta, 0.0, kPi, x[0], rep.payoffs, theta_members)) {
        std::vector<EquilibriumCandidate> joint;
        bool all_ok = true;
        for (int i = 1; i <= opt_.probe_count && all_ok; ++i) {
          const auto h = halton<2>(static_cast<unsigned>(i));
          const double t = theta_range->lo + h[0] * (theta_range->hi - theta_range->lo);
          const double pa = phi_range->lo + h[1] * (phi_range->hi - phi_range->lo);
          auto c = probe(Profile4{t, pa, t, kHalfPi - pa}, rep.payoffs, false);
          if (c)
            joint.push_back(*c);
          else
            all_ok = false;
        }
        if (all_ok) {
          fam.descriptor.ranges[0] = *theta_range;
          fam.descriptor.ranges[2] = *theta_range;
          fam.descriptor.theta_tied = true;
          members.insert(members.end(), joint.begin(), joint.end());
        }
      }
    }

    for (const auto& m : members)
      if (!same_payoff(m.payoffs, rep.payoffs)) fam.descriptor.payoff_parametric = true;
    fam.representative = centre_of(fam.descriptor, rep);
    fam.members = std::move(members);
    return fam;
  }

  // Parameters that can move on their own while the profile stays an
  // equilibrium. Payoffs may vary along such a family.
  std::optional<EquilibriumFamily> free_parameters(const EquilibriumCandidate& rep) const {
    const Profile4 x = to_array(rep.alice, rep.bob);
    const auto& box = parameter_box();
    std::array<std::optional<Interval>, 4> range;
    std::vector<EquilibriumCandidate> scratch;
    for (int k = 0; k < 4; ++k) {
      if (k % 2 == 1 && x[k - 1] >= kPi - 1e-12) continue;  // phi is meaningless at theta = pi
      auto along = [&](double v) {
        Profile4 p = x;
        p[k] = v;
        return p;
      };
      range[k] = scan_run(along, box[k].lo, box[k].hi, x[k], rep.payoffs, scratch);
    }
    if (std::none_of(range.begin(), range.end(), [](const auto& r) { return r.has_value(); })) return std::nullopt;

    auto joint = [&](const std::array<std::optional<Interval>, 4>& ranges) -> std::optional<std::vector<EquilibriumCandidate>> {
      std::vector<EquilibriumCandidate> members;
      for (int i = 1; i <= opt_.probe_count; ++i) {
        const auto h = halton<4>(static_cast<unsigned>(i));
        Profile4 p = x;
        for (int k = 0; k < 4; ++k)
          if (ranges[k]) p[k] = ranges[k]->lo + h[k] * (ranges[k]->hi - ranges[k]->lo);
        auto c = probe(p, rep.payoffs, false);
        if (!c) return std::nullopt;
        members.push_back(*c);
      }
      return members;
    };

    auto members = joint(range);
    if (!members) {
      // Parameters free one at a time but not jointly: keep the widest one.
      int widest = -1;
      for (int k = 0; k < 4; ++k)
        if (range[k] && (widest < 0 || range[k]->hi - range[k]->lo > range[widest]->hi - range[widest]->lo)) widest = k;
      std::array<std::optional<Interval>, 4> single{};
      single[widest] = range[widest];
      members = joint(single);
      if (!members) return std::nullopt;
      range = single;
    }

    EquilibriumFamily fam;
    fam.descriptor.kind = FamilyKind::kFreeParameters;
    for (int k = 0; k < 4; ++k) fam.descriptor.ranges[k] = range[k] ? *range[k] : Interval{x[k], x[k]};
    for (const auto& m : *members)
      if (!same_payoff(m.payoffs, rep.payoffs)) fam.descriptor.payoff_parametric = true;
    fam.representative = rep;
    fam.members = std::move(*members);
    return fam;
  }

  const Certifier& cert_;
  const SearchOptions& opt_;
};

}  // namespace detail

inline NeSearchResult ne_search(const BimatrixGame& game, CorruptionRate r, const SearchOptions& opt = {}) {
  if (opt.theta_steps < 8 || opt.phi_steps < 8) throw std::invalid_argument("coarse grid needs at least 8 steps per axis");
  if (!(opt.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");

  const Certifier cert(game, r, opt);
  const detail::StrategyGrid coarse(opt.theta_steps, opt.phi_steps);
  const OutcomeKernel& kernel = cert.kernel();
  const std::size_t n = coarse.size();

  // Pass 1: each player's best grid payoff against every opponent strategy.
  std::vector<double> best_a(n, -std::numeric_limits<double>::infinity());  // indexed by Bob's strategy
  std::vector<double> best_b(n, -std::numeric_limits<double>::infinity());  // indexed by Alice's strategy
  {
    std::mutex merge;
    detail::parallel_for(n, [&](std::size_t begin, std::size_t end) {
      std::vector<double> col(n, -std::numeric_limits<double>::infinity());
      for (std::size_t i = begin; i < end; ++i) {
        double row_best = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
          const auto p = kernel.payoffs(game, coarse.alice[i], coarse.bob[j]);
          col[j] = std::max(col[j], p.a);
          row_best = std::max(row_best, p.b);
        }
        best_b[i] = row_best;
      }
      // max is exact and order independent, so the merge is deterministic.
      std::lock_guard lock(merge);
      for (std::size_t j = 0; j < n; ++j) best_a[j] = std::max(best_a[j], col[j]);
    });
  }

  // Pass 2: profiles within the grid tolerance of a mutual best response.
  // An equilibrium between grid points loses O(h^2) against the grid.
  const double h = std::max(coarse.theta_step(), coarse.phi_step());
  const double grid_tol = 1e-9 + std::max(game.payoff_span(), 1e-12) * h * h;
  struct Survivor {
    std::uint64_t gain_bin;
    std::uint32_t a, b;
  };
  std::vector<std::vector<Survivor>> per_row(n);
  detail::parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const auto p = kernel.payoffs(game, coarse.alice[i], coarse.bob[j]);
        const double gain = std::max(best_a[j] - p.a, best_b[i] - p.b);
        if (gain <= grid_tol)
          per_row[i].push_back({static_cast<std::uint64_t>(std::max(0.0, gain) / 1e-9),
                                static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
      }
    }
  });
  std::vector<Survivor> survivors;
  for (auto& row : per_row) {
    survivors.insert(survivors.end(), row.begin(), row.end());
    std::vector<Survivor>().swap(row);
  }
  // Smallest grid gain first, lexicographic (theta_A, phi_A, theta_B, phi_B) on ties.
  std::stable_sort(survivors.begin(), survivors.end(),
                   [](const Survivor& x, const Survivor& y) { return x.gain_bin < y.gain_bin; });

  NeSearchResult result;
  result.survivors = survivors.size();
  std::vector<char> alive(survivors.size(), 1);
  const detail::FamilyDetector detector(cert, opt);
  const double ht = coarse.theta_step(), hp = coarse.phi_step();
  auto coarse_profile = [&](const Survivor& s) {
    return Profile4{coarse.theta(s.a), coarse.phi(s.a), coarse.theta(s.b), coarse.phi(s.b)};
  };
  auto prune = [&](auto&& covered) {
    for (std::size_t k = 0; k < survivors.size(); ++k)
      if (alive[k] && covered(coarse_profile(survivors[k]))) alive[k] = 0;
  };
  auto near = [&](const Profile4& c, const Profile4& p) {
    FamilyDescriptor box;
    for (int k = 0; k < 4; ++k) box.ranges[k] = {c[k], c[k]};
    return box.contains(p, 3 * ht, 3 * hp);
  };

  for (std::size_t k = 0; k < survivors.size(); ++k) {
    if (!alive[k]) continue;
    if (result.refinements >= static_cast<std::size_t>(opt.max_refinements)) {
      result.truncated = true;
      break;
    }
    ++result.refinements;
    const Profile4 start = coarse_profile(survivors[k]);
    const Profile4 refined = detail::canonical(detail::refine_profile(cert, start));
    const auto cand = cert.certify(refined);

    if (cand.is_equilibrium(opt.epsilon)) {
      EquilibriumFamily* home = nullptr;
      for (auto& f : result.families) {
        const bool payoff_ok = f.descriptor.payoff_parametric ||
                               (std::abs(f.representative.payoffs.a - cand.payoffs.a) <= opt.payoff_tol &&
                                std::abs(f.representative.payoffs.b - cand.payoffs.b) <= opt.payoff_tol);
        if (payoff_ok && f.descriptor.contains(refined, 1e-6, 1e-6)) {
          home = &f;
          break;
        }
      }
      // A certified profile just past a detected edge still belongs to
      // that family; widen the ranges to cover it.
      for (auto& f : result.families) {
        if (home) break;
        const bool payoff_ok = !f.descriptor.payoff_parametric &&
                               std::abs(f.representative.payoffs.a - cand.payoffs.a) <= opt.payoff_tol &&
                               std::abs(f.representative.payoffs.b - cand.payoffs.b) <= opt.payoff_tol;
        const auto kind = f.descriptor.kind;
        if (payoff_ok && (kind == FamilyKind::kPhiSum || kind == FamilyKind::kFreeParameters) &&
            f.descriptor.contains(refined, ht, hp)) {
          auto& rg = f.descriptor.ranges;
          for (int k = 0; k < 4; ++k) {
            if (f.descriptor.kind == FamilyKind::kPhiSum && k == 3) continue;
            rg[k] = {std::min(rg[k].lo, refined[k]), std::max(rg[k].hi, refined[k])};
          }
          if (f.descriptor.kind == FamilyKind::kPhiSum) rg[3] = {kHalfPi - rg[1].hi, kHalfPi - rg[1].lo};
          f.members.push_back(cand);
          home = &f;
        }
      }
      if (!home) {
        result.families.push_back(detector.detect(cand));
        home = &result.families.back();
      }
      const FamilyDescriptor desc = home->descriptor;
      prune([&](const Profile4& p) { return desc.contains(p, ht, hp); });
    }
    prune([&](const Profile4& p) { return near(start, p) || near(refined, p); });
  }

  std::sort(result.families.begin(), result.families.end(), [](const auto& x, const auto& y) {
    return detail::lex_less(to_array(x.representative.alice, x.representative.bob),
                            to_array(y.representative.alice, y.representative.bob));
  });
  return result;
}

}  // namespace qgame
