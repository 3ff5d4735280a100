#include "temprisk/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace temprisk {

namespace {

void require_default_nonnegative(const ConstraintSpec& c) {
  if (!c.has_unbounded_piece() && c.default_value() < 0.0) {
    throw SpecError("constraint violated everywhere by default (default " +
                    std::to_string(c.default_value()) + " < 0)");
  }
}

void require_components(const SignalView& x, int max_component) {
  if (max_component >= x.components()) {
    throw ShapeError("specification references x[" + std::to_string(max_component + 1) +
                     "] but the signal has " + std::to_string(x.components()) + " components");
  }
}

StepInterval piece_window(const SignalView& x, const ConstraintPiece& p) {
  return p.unbounded ? StepInterval{x.support_min(), x.support_max()} : p.window;
}

// Satisfaction arrays are indexed from `lo`; values are +1 / -1.
using Trace = std::vector<std::int8_t>;

// prefix[k] = number of +1 entries in trace[0, k).
std::vector<int> prefix_true(const Trace& tr) {
  std::vector<int> p(tr.size() + 1, 0);
  for (std::size_t k = 0; k < tr.size(); ++k) p[k + 1] = p[k] + (tr[k] > 0);
  return p;
}

Trace eval(const FormulaNode& n, const SignalView& x, Step lo, Step hi) {
  const std::size_t len = static_cast<std::size_t>(hi - lo + 1);
  Trace out(len);
  switch (n.kind) {
    case FormulaKind::True: std::fill(out.begin(), out.end(), 1); break;
    case FormulaKind::Pred: {
      std::vector<double> buf(static_cast<std::size_t>(x.components()));
      for (std::size_t k = 0; k < len; ++k) {
        x.sample_into(lo + static_cast<Step>(k), buf);
        const double h = n.predicate->eval<double>(buf);
        out[k] = h >= 0.0 ? 1 : -1;
      }
      break;
    }
    case FormulaKind::Not: {
      const Trace a = eval(*n.children[0], x, lo, hi);
      for (std::size_t k = 0; k < len; ++k) out[k] = static_cast<std::int8_t>(-a[k]);
      break;
    }
    case FormulaKind::And:
    case FormulaKind::Or: {
      const Trace a = eval(*n.children[0], x, lo, hi);
      const Trace b = eval(*n.children[1], x, lo, hi);
      for (std::size_t k = 0; k < len; ++k) {
        out[k] = n.kind == FormulaKind::And ? std::min(a[k], b[k]) : std::max(a[k], b[k]);
      }
      break;
    }
    case FormulaKind::EvF:
    case FormulaKind::AlwF:
    case FormulaKind::EvP:
    case FormulaKind::AlwP: {
      const bool future = n.kind == FormulaKind::EvF || n.kind == FormulaKind::AlwF;
      const bool exists = n.kind == FormulaKind::EvF || n.kind == FormulaKind::EvP;
      const Step a = n.interval.lo;
      const Step b = n.interval.hi;
      const Step clo = future ? lo + a : lo - b;
      const Step chi = future ? hi + b : hi - a;
      const Trace c = eval(*n.children[0], x, clo, chi);
      const auto pre = prefix_true(c);
      const int width = static_cast<int>(b - a + 1);
      for (std::size_t k = 0; k < len; ++k) {
        const Step t = lo + static_cast<Step>(k);
        const Step from = (future ? t + a : t - b) - clo;
        const int count = pre[from + width] - pre[from];
        out[k] = (exists ? count > 0 : count == width) ? 1 : -1;
      }
      break;
    }
    case FormulaKind::UntilF: {
      // sup over t'' in [t+a, t+b] of min(f2(t''), inf over [t, t''] of f1).
      const Step a = n.interval.lo;
      const Step b = n.interval.hi;
      const Trace f1 = eval(*n.children[0], x, lo, hi + b);
      const Trace f2 = eval(*n.children[1], x, lo, hi + b);
      const auto pre = prefix_true(f2);
      const std::size_t m = f1.size();
      // next_false[k]: first index >= k where f1 fails, m if none.
      std::vector<std::size_t> next_false(m + 1, m);
      for (std::size_t k = m; k-- > 0;) next_false[k] = f1[k] < 0 ? k : next_false[k + 1];
      for (std::size_t k = 0; k < len; ++k) {
        const Step first = static_cast<Step>(k) + a;
        const Step last = std::min<Step>(static_cast<Step>(k) + b,
                                         static_cast<Step>(next_false[k]) - 1);
        out[k] = (last >= first && pre[last + 1] - pre[first] > 0) ? 1 : -1;
      }
      break;
    }
    case FormulaKind::UntilP: {
      // sup over t'' in [t-b, t-a] of min(f2(t''), inf over [t'', t] of f1).
      const Step a = n.interval.lo;
      const Step b = n.interval.hi;
      const Step clo = lo - b;
      const Trace f1 = eval(*n.children[0], x, clo, hi);
      const Trace f2 = eval(*n.children[1], x, clo, hi);
      const auto pre = prefix_true(f2);
      // prev_false[k]: last index <= k where f1 fails, -1 if none.
      std::vector<Step> prev_false(f1.size());
      Step last_false = -1;
      for (std::size_t k = 0; k < f1.size(); ++k) {
        if (f1[k] < 0) last_false = static_cast<Step>(k);
        prev_false[k] = last_false;
      }
      for (std::size_t k = 0; k < len; ++k) {
        const Step t = static_cast<Step>(k) + b;  // index of time lo + k in the child traces
        const Step first = std::max<Step>(t - b, prev_false[t] + 1);
        const Step last = t - a;
        out[k] = (last >= first && pre[last + 1] - pre[first] > 0) ? 1 : -1;
      }
      break;
    }
  }
  return out;
}

}  // namespace

Sign beta_c(const SignalView& x, const ConstraintSpec& c) {
  require_default_nonnegative(c);
  require_components(x, c.max_component());
  std::vector<double> buf(static_cast<std::size_t>(x.components()));
  for (const auto& piece : c.pieces()) {
    const StepInterval w = piece_window(x, piece);
    for (Step t = w.lo; t <= w.hi; ++t) {
      x.sample_into(t, buf);
      if (!(piece.expr.eval<double>(buf) >= 0.0)) return Sign::Negative;
    }
  }
  return Sign::Positive;
}

Sign beta_c(const Signal& x, const ConstraintSpec& c) { return beta_c(SignalView(x), c); }

double spatial_robustness(const SignalView& x, const ConstraintSpec& c) {
  require_default_nonnegative(c);
  require_components(x, c.max_component());
  double lowest = c.has_unbounded_piece() ? std::numeric_limits<double>::infinity()
                                          : c.default_value();
  std::vector<double> buf(static_cast<std::size_t>(x.components()));
  for (const auto& piece : c.pieces()) {
    const StepInterval w = piece_window(x, piece);
    for (Step t = w.lo; t <= w.hi; ++t) {
      x.sample_into(t, buf);
      const double v = piece.expr.eval<double>(buf);
      if (std::isnan(v)) return v;
      lowest = std::min(lowest, v);
    }
  }
  return lowest;
}

double spatial_robustness(const Signal& x, const ConstraintSpec& c) {
  return spatial_robustness(SignalView(x), c);
}

std::vector<std::int8_t> satisfaction(const SignalView& x, const StlFormula& f, Step lo, Step hi) {
  if (hi < lo) return {};
  require_components(x, f.max_component());
  return eval(f.root(), x, lo, hi);
}

Sign beta_phi(const SignalView& x, const StlFormula& f, Step t) {
  return satisfaction(x, f, t, t)[0] > 0 ? Sign::Positive : Sign::Negative;
}

Sign beta_phi(const Signal& x, const StlFormula& f, Step t) {
  return beta_phi(SignalView(x), f, t);
}

}  // namespace temprisk
