#include "temprisk/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace temprisk {

namespace {

void require_bound(int r) {
  if (r < 0) throw ValidationError("robustness bound r must be non-negative");
}

void require_partition(const Signal& s, const GroupPartition& p) {
  if (p.components() != s.components()) {
    throw ShapeError("partition covers " + std::to_string(p.components()) +
                     " components, signal has " + std::to_string(s.components()));
  }
}

// Odometer over the box prod_k [lo[k], hi[k]]; stops when visit returns true.
bool odometer(std::vector<int>& v, const std::vector<int>& lo, const std::vector<int>& hi,
              const std::function<bool(std::span<const int>)>& visit) {
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (lo[k] > hi[k]) return false;
    v[k] = lo[k];
  }
  while (true) {
    if (visit(v)) return true;
    std::size_t k = v.size();
    while (k > 0) {
      --k;
      if (v[k] < hi[k]) {
        ++v[k];
        break;
      }
      v[k] = lo[k];
      if (k == 0) return false;
    }
    if (v.empty()) return false;
  }
}

void add_calls(EvalStats* stats, const ShiftLattice& lattice) {
  if (stats) stats->checker_calls += lattice.checker_calls();
}

}  // namespace

ConstraintChecker::ConstraintChecker(ConstraintSpec c) : spec_(std::move(c)) {
  if (!spec_.has_unbounded_piece() && spec_.default_value() < 0.0) {
    throw SpecError("constraint violated everywhere by default");
  }
}

StlChecker::StlChecker(StlFormula f, Step t) : formula_(std::move(f)), t_(t) { validate(formula_); }

bool for_each_shell_point(std::size_t m, int tau,
                          const std::function<bool(std::span<const int>)>& visit) {
  if (m == 0) return false;
  if (tau == 0) {
    std::vector<int> zero(m, 0);
    return visit(zero);
  }
  // Partition the shell by the first coordinate j with |g_j| = tau.
  std::vector<int> v(m), lo(m), hi(m);
  for (std::size_t j = 0; j < m; ++j) {
    for (int side : {-tau, tau}) {
      for (std::size_t k = 0; k < m; ++k) {
        if (k < j) {
          lo[k] = -(tau - 1);
          hi[k] = tau - 1;
        } else if (k == j) {
          lo[k] = hi[k] = side;
        } else {
          lo[k] = -tau;
          hi[k] = tau;
        }
      }
      if (odometer(v, lo, hi, visit)) return true;
    }
  }
  return false;
}

ShiftLattice::ShiftLattice(const Signal& base, const Checker& checker, GroupPartition groups)
    : base_(base), checker_(checker), groups_(std::move(groups)) {
  require_partition(base_, groups_);
}

std::optional<std::uint64_t> ShiftLattice::key(std::span<const int> g) const {
  if (g.size() > 4) return std::nullopt;
  std::uint64_t k = 0;
  for (int v : g) {
    if (v <= -32768 || v >= 32768) return std::nullopt;
    k = (k << 16) | static_cast<std::uint16_t>(v + 32768);
  }
  return k;
}

Sign ShiftLattice::sign_at(std::span<const int> g) {
  const auto k = key(g);
  if (k) {
    if (auto it = memo_.find(*k); it != memo_.end()) return static_cast<Sign>(it->second);
  }
  ++calls_;
  const Sign s = checker_(SignalView(base_, groups_.expand(g)));
  if (k) memo_.emplace(*k, static_cast<std::int8_t>(to_int(s)));
  return s;
}

RobustnessValue ShiftLattice::eta_at(std::span<const int> g, int r) {
  require_bound(r);
  const Sign b = sign_at(g);
  std::vector<int> probe(g.begin(), g.end());
  for (int k = 1; k <= r; ++k) {
    for (int dir : {1, -1}) {
      for (std::size_t j = 0; j < probe.size(); ++j) probe[j] = g[j] + dir * k;
      if (sign_at(probe) != b) return {b, k - 1, false};
    }
  }
  return {b, r, true};
}

RobustnessValue ShiftLattice::theta_at(std::span<const int> g, int r) {
  require_bound(r);
  const Sign b = sign_at(g);
  std::vector<int> probe(g.size());
  for (int tau = 1; tau <= r; ++tau) {
    const bool flipped = for_each_shell_point(g.size(), tau, [&](std::span<const int> d) {
      for (std::size_t j = 0; j < d.size(); ++j) probe[j] = g[j] + d[j];
      return sign_at(probe) != b;
    });
    if (flipped) return {b, tau - 1, false};
  }
  return {b, r, true};
}

RobustnessValue eta(const Signal& s, const Checker& k, int r, EvalStats* stats) {
  ShiftLattice lattice(s, k, GroupPartition::single(s.components()));
  const int origin = 0;
  const auto v = lattice.eta_at(std::span<const int>(&origin, 1), r);
  add_calls(stats, lattice);
  return v;
}

RobustnessValue theta(const Signal& s, const Checker& k, int r, const GroupPartition& p,
                      EvalStats* stats) {
  ShiftLattice lattice(s, k, p);
  const std::vector<int> origin(p.size(), 0);
  const auto v = lattice.theta_at(origin, r);
  add_calls(stats, lattice);
  return v;
}

RobustnessValue theta_bruteforce(const Signal& s, const Checker& k, int r,
                                 const GroupPartition& p, EvalStats* stats) {
  require_bound(r);
  require_partition(s, p);
  const std::size_t m = p.size();
  double points = std::pow(2.0 * r + 1.0, static_cast<double>(m));
  if (points > static_cast<double>(kBruteforceLimit)) {
    throw ResourceError("brute-force enumeration of " + std::to_string(static_cast<long long>(points)) +
                        " shift vectors exceeds the limit of " + std::to_string(kBruteforceLimit));
  }
  const Sign b = k(SignalView(s));
  std::size_t calls = 1;
  int nearest_flip = r + 1;
  std::vector<int> v(m), lo(m, -r), hi(m, r);
  odometer(v, lo, hi, [&](std::span<const int> g) {
    ++calls;
    if (k(SignalView(s, p.expand(g))) != b) {
      int norm = 0;
      for (int x : g) norm = std::max(norm, std::abs(x));
      nearest_flip = std::min(nearest_flip, norm);
    }
    return false;
  });
  if (stats) stats->checker_calls += calls;
  if (nearest_flip <= r) return {b, nearest_flip - 1, false};
  return {b, r, true};
}

RobustnessValue eta_stl(const Signal& s, const StlFormula& f, Step t, int r, EvalStats* stats) {
  return eta(s, StlChecker(f, t), r, stats);
}

RobustnessValue theta_stl(const Signal& s, const StlFormula& f, Step t, int r,
                          const GroupPartition& p, EvalStats* stats) {
  return theta(s, StlChecker(f, t), r, p, stats);
}

}  // namespace temprisk
