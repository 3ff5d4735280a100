#pragma once

// Reference implementations used only by tests. They follow the definitions
// literally (no prefix sums, no lattice memo, no lazy views) and share no code
// with the library beyond its data types.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "temprisk/formula.hpp"
#include "temprisk/predicate.hpp"
#include "temprisk/signal.hpp"

namespace oracle {

using temprisk::ConstraintPiece;
using temprisk::ConstraintSpec;
using temprisk::ExprKind;
using temprisk::ExprNode;
using temprisk::FormulaKind;
using temprisk::FormulaNode;
using temprisk::PredicateExpr;
using temprisk::Signal;
using temprisk::Step;
using temprisk::StepInterval;
using temprisk::StlFormula;

// Value of component i at time t with endpoint hold.
inline double held(const Signal& s, int i, Step t) {
  const Step lo = s.t_min();
  const Step hi = lo + s.values().cols() - 1;
  const Step c = t < lo ? lo : (t > hi ? hi : t);
  return s.values()(i, c - lo);
}

inline std::vector<double> state(const Signal& s, Step t) {
  std::vector<double> v(static_cast<std::size_t>(s.values().rows()));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = held(s, static_cast<int>(i), t);
  return v;
}

inline double expr_value(const ExprNode& e, const std::vector<double>& x) {
  auto arg = [&](std::size_t k) { return expr_value(*e.args[k], x); };
  switch (e.kind) {
    case ExprKind::Constant: return e.value;
    case ExprKind::Component: return x.at(static_cast<std::size_t>(e.index));
    case ExprKind::Negate: return -arg(0);
    case ExprKind::Abs: return std::fabs(arg(0));
    case ExprKind::Norm2: {
      double acc = 0.0;
      for (std::size_t k = 0; k < e.args.size(); ++k) acc += arg(k) * arg(k);
      return std::sqrt(acc);
    }
    case ExprKind::Add: return arg(0) + arg(1);
    case ExprKind::Sub: return arg(0) - arg(1);
    case ExprKind::Mul: return arg(0) * arg(1);
    case ExprKind::Div: return arg(0) / arg(1);
    case ExprKind::Min: return std::min(arg(0), arg(1));
    case ExprKind::Max: return std::max(arg(0), arg(1));
  }
  return 0.0;
}

// Shift each component i by off[i]: y_i(t) = x_i(t + off[i]), materialized on
// the window that contains every non-constant part of y.
inline Signal shift(const Signal& s, const std::vector<int>& off) {
  const int hi_off = *std::max_element(off.begin(), off.end());
  const int lo_off = *std::min_element(off.begin(), off.end());
  const Step first = s.t_min() - hi_off;
  const Step last = s.t_min() + s.values().cols() - 1 - lo_off;
  Eigen::MatrixXd v(s.values().rows(), last - first + 1);
  for (Step t = first; t <= last; ++t) {
    for (int i = 0; i < v.rows(); ++i) v(i, t - first) = held(s, i, t + off[static_cast<std::size_t>(i)]);
  }
  return Signal(std::move(v), first, s.dt());
}

inline std::vector<int> expand(const temprisk::GroupPartition& p, const std::vector<int>& g) {
  std::vector<int> off(static_cast<std::size_t>(p.components()));
  for (std::size_t j = 0; j < p.size(); ++j) {
    for (int i : p.group(j)) off[static_cast<std::size_t>(i)] = g[j];
  }
  return off;
}

// Literal constraint check; unbounded pieces are checked on the signal's own
// window (outside it every component is held constant).
inline bool constraint_holds(const Signal& s, const ConstraintSpec& c) {
  for (const auto& p : c.pieces()) {
    Step lo = p.window.lo, hi = p.window.hi;
    if (p.unbounded) {
      lo = s.t_min();
      hi = s.t_min() + s.values().cols() - 1;
    }
    for (Step t = lo; t <= hi; ++t) {
      if (!(expr_value(p.expr.root(), state(s, t)) >= 0.0)) return false;
    }
  }
  return c.has_unbounded_piece() || c.default_value() >= 0.0;
}

// Literal Boolean STL semantics, memoized per (node, t).
class Stl {
 public:
  explicit Stl(const Signal& s) : s_(s) {}

  bool sat(const FormulaNode& n, Step t) {
    const auto key = std::make_pair(&n, t);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const bool v = compute(n, t);
    memo_.emplace(key, v);
    return v;
  }

 private:
  bool compute(const FormulaNode& n, Step t) {
    const Step a = n.interval.lo, b = n.interval.hi;
    auto child = [&](std::size_t k, Step u) { return sat(*n.children[k], u); };
    switch (n.kind) {
      case FormulaKind::True: return true;
      case FormulaKind::Pred: return expr_value(n.predicate->root(), state(s_, t)) >= 0.0;
      case FormulaKind::Not: return !child(0, t);
      case FormulaKind::And: return child(0, t) && child(1, t);
      case FormulaKind::Or: return child(0, t) || child(1, t);
      case FormulaKind::UntilF:
        for (Step u = t + a; u <= t + b; ++u) {
          if (!child(1, u)) continue;
          bool ok = true;
          for (Step w = t; w <= u && ok; ++w) ok = child(0, w);
          if (ok) return true;
        }
        return false;
      case FormulaKind::UntilP:
        for (Step u = t - b; u <= t - a; ++u) {
          if (!child(1, u)) continue;
          bool ok = true;
          for (Step w = u; w <= t && ok; ++w) ok = child(0, w);
          if (ok) return true;
        }
        return false;
      case FormulaKind::EvF:
        for (Step u = t + a; u <= t + b; ++u) if (child(0, u)) return true;
        return false;
      case FormulaKind::AlwF:
        for (Step u = t + a; u <= t + b; ++u) if (!child(0, u)) return false;
        return true;
      case FormulaKind::EvP:
        for (Step u = t - b; u <= t - a; ++u) if (child(0, u)) return true;
        return false;
      case FormulaKind::AlwP:
        for (Step u = t - b; u <= t - a; ++u) if (!child(0, u)) return false;
        return true;
    }
    return false;
  }

  const Signal& s_;
  std::map<std::pair<const FormulaNode*, Step>, bool> memo_;
};

inline bool formula_holds(const Signal& s, const StlFormula& f, Step t) {
  Stl stl(s);
  return stl.sat(f.root(), t);
}

using Verdict = std::function<bool(const Signal&)>;

struct Robust {
  int signed_value = 0;
  bool saturated = false;
};

// Synchronous robustness by checking every shift in [-r, r].
inline Robust eta(const Signal& s, const Verdict& holds, int r) {
  const bool base = holds(s);
  const std::size_t n = static_cast<std::size_t>(s.values().rows());
  int nearest = r + 1;
  for (int k = -r; k <= r; ++k) {
    if (holds(shift(s, std::vector<int>(n, k))) != base) nearest = std::min(nearest, std::abs(k));
  }
  const int mag = nearest <= r ? nearest - 1 : r;
  return {base ? mag : -mag, nearest > r};
}

// Asynchronous robustness by checking every group shift in [-r, r]^m.
inline Robust theta(const Signal& s, const temprisk::GroupPartition& p, const Verdict& holds, int r) {
  const bool base = holds(s);
  const std::size_t m = p.size();
  std::vector<int> g(m, -r);
  int nearest = r + 1;
  while (true) {
    int norm = 0;
    for (int v : g) norm = std::max(norm, std::abs(v));
    if (norm < nearest && holds(shift(s, expand(p, g))) != base) nearest = norm;
    std::size_t k = 0;
    while (k < m && g[k] == r) g[k++] = -r;
    if (k == m) break;
    ++g[k];
  }
  const int mag = nearest <= r ? nearest - 1 : r;
  return {base ? mag : -mag, nearest > r};
}

// ---------------------------------------------------------------------------
// Random instances.

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Sum of a few random sinusoids per component: smooth, with sign changes.
inline Signal random_signal(Rng& rng, int n, int length, Step t_min = 0) {
  Eigen::MatrixXd v(n, length);
  for (int i = 0; i < n; ++i) {
    const int waves = uniform(rng, 1, 3);
    std::vector<std::array<double, 3>> w;
    for (int k = 0; k < waves; ++k) {
      w.push_back({uniform_real(rng, 0.2, 1.5), uniform_real(rng, 0.02, 0.25), uniform_real(rng, 0, 6.3)});
    }
    const double bias = uniform_real(rng, -0.5, 0.5);
    for (int t = 0; t < length; ++t) {
      double acc = bias;
      for (const auto& [amp, freq, phase] : w) acc += amp * std::sin(freq * t + phase);
      v(i, t) = acc;
    }
  }
  return Signal(std::move(v), t_min);
}

inline PredicateExpr random_expr(Rng& rng, int n, int depth) {
  using namespace temprisk;
  if (depth <= 0 || uniform(rng, 0, 3) == 0) {
    if (uniform(rng, 0, 2) == 0) return constant(std::round(uniform_real(rng, -2, 2) * 4) / 4);
    return component(uniform(rng, 0, n - 1));
  }
  const auto a = random_expr(rng, n, depth - 1);
  switch (uniform(rng, 0, 8)) {
    case 0: return -a;
    case 1: return abs(a);
    case 2: return a + random_expr(rng, n, depth - 1);
    case 3: return a - random_expr(rng, n, depth - 1);
    case 4: return a * random_expr(rng, n, depth - 1);
    case 5: return min(a, random_expr(rng, n, depth - 1));
    case 6: return max(a, random_expr(rng, n, depth - 1));
    case 7: return norm2({a, random_expr(rng, n, depth - 1)});
    default: return a - constant(0.5);
  }
}

inline StepInterval random_interval(Rng& rng, int max_hi) {
  const int lo = uniform(rng, 0, max_hi);
  return {lo, uniform(rng, lo, max_hi)};
}

inline StlFormula random_formula(Rng& rng, int n, int depth, int max_hi = 6) {
  using namespace temprisk::stl;
  if (depth <= 0 || uniform(rng, 0, 4) == 0) {
    if (uniform(rng, 0, 12) == 0) return top();
    return pred(random_expr(rng, n, 2));
  }
  auto sub = [&] { return random_formula(rng, n, depth - 1, max_hi); };
  switch (uniform(rng, 0, 10)) {
    case 0: return negate(sub());
    case 1: return conj(sub(), sub());
    case 2: return disj(sub(), sub());
    case 3: { auto a = sub(); return until(a, random_interval(rng, max_hi), sub()); }
    case 4: { auto a = sub(); return since(a, random_interval(rng, max_hi), sub()); }
    case 5: return eventually(random_interval(rng, max_hi), sub());
    case 6: return always(random_interval(rng, max_hi), sub());
    case 7: return once(random_interval(rng, max_hi), sub());
    case 8: return historically(random_interval(rng, max_hi), sub());
    default: return conj(sub(), sub());
  }
}

// A window constraint: random predicate on a random window inside [lo, hi].
inline ConstraintSpec random_constraint(Rng& rng, int n, Step lo, Step hi) {
  const Step a = uniform(rng, static_cast<int>(lo), static_cast<int>(hi));
  const Step b = std::min<Step>(hi, a + uniform(rng, 0, 12));
  return ConstraintSpec({ConstraintPiece{{a, b}, false, random_expr(rng, n, 2) + temprisk::constant(0.8)}}, 1.0);
}

}  // namespace oracle
