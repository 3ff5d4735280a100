#pragma once

#include <cstdint>
#include <vector>

#include "temprisk/formula.hpp"
#include "temprisk/signal.hpp"

namespace temprisk {

enum class Sign : int { Negative = -1, Positive = 1 };

inline Sign operator-(Sign s) { return s == Sign::Positive ? Sign::Negative : Sign::Positive; }
inline int to_int(Sign s) { return static_cast<int>(s); }
inline Sign to_sign(bool satisfied) { return satisfied ? Sign::Positive : Sign::Negative; }

/// +1 iff c(x(t), t) >= 0 at every integer t.
Sign beta_c(const SignalView& x, const ConstraintSpec& c);
Sign beta_c(const Signal& x, const ConstraintSpec& c);

/// inf over all integer t of c(x(t), t).
double spatial_robustness(const SignalView& x, const ConstraintSpec& c);
double spatial_robustness(const Signal& x, const ConstraintSpec& c);

/// Boolean STL satisfaction of f by x at time t.
Sign beta_phi(const SignalView& x, const StlFormula& f, Step t);
Sign beta_phi(const Signal& x, const StlFormula& f, Step t);

/// Satisfaction of f at every t in [lo, hi] as +1/-1 values.
std::vector<std::int8_t> satisfaction(const SignalView& x, const StlFormula& f, Step lo, Step hi);

}  // namespace temprisk
