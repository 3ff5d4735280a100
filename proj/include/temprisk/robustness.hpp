#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "temprisk/formula.hpp"
#include "temprisk/semantics.hpp"
#include "temprisk/signal.hpp"

namespace temprisk {

/**
 * Signed temporal robustness capped at a bound r.
 *
 * `saturated` means no verdict change was found within r; the true value is
 * then at least r in magnitude (the unbounded case).
 */
struct RobustnessValue {
  Sign sign = Sign::Positive;
  int magnitude = 0;
  bool saturated = false;

  int signed_value() const { return to_int(sign) * magnitude; }
  bool operator==(const RobustnessValue&) const = default;
};

/// Pure sign evaluator over (possibly shifted) signals.
class Checker {
 public:
  virtual ~Checker() = default;
  virtual Sign operator()(const SignalView& x) const = 0;
};

/// beta_c with a fixed constraint.
class ConstraintChecker final : public Checker {
 public:
  explicit ConstraintChecker(ConstraintSpec c);
  Sign operator()(const SignalView& x) const override { return beta_c(x, spec_); }
  const ConstraintSpec& spec() const { return spec_; }

 private:
  ConstraintSpec spec_;
};

/// beta_phi(., f, t) with a fixed formula and time.
class StlChecker final : public Checker {
 public:
  StlChecker(StlFormula f, Step t);
  Sign operator()(const SignalView& x) const override { return beta_phi(x, formula_, t_); }
  const StlFormula& formula() const { return formula_; }
  Step time() const { return t_; }

 private:
  StlFormula formula_;
  Step t_;
};

/// Adapts any callable Signal view -> Sign.
class FunctionChecker final : public Checker {
 public:
  explicit FunctionChecker(std::function<Sign(const SignalView&)> fn) : fn_(std::move(fn)) {}
  Sign operator()(const SignalView& x) const override { return fn_(x); }

 private:
  std::function<Sign(const SignalView&)> fn_;
};

struct EvalStats {
  std::size_t checker_calls = 0;
};

/**
 * Verdicts of a fixed base signal under group shifts g, memoized.
 *
 * sign_at(g) is the checker applied to the base with group j shifted by g[j].
 * Because shifting is exact under endpoint hold, the robustness of the
 * realization shift_grouped(base, p, g) can be read off the lattice around g
 * without materializing it. Memoization applies for up to four groups.
 */
class ShiftLattice {
 public:
  ShiftLattice(const Signal& base, const Checker& checker, GroupPartition groups);

  const GroupPartition& groups() const { return groups_; }

  Sign sign_at(std::span<const int> g);

  /// Synchronous robustness of the signal shifted by g.
  RobustnessValue eta_at(std::span<const int> g, int r);

  /// Asynchronous (per-group) robustness of the signal shifted by g.
  RobustnessValue theta_at(std::span<const int> g, int r);

  std::size_t checker_calls() const { return calls_; }

 private:
  std::optional<std::uint64_t> key(std::span<const int> g) const;

  const Signal& base_;
  const Checker& checker_;
  GroupPartition groups_;
  std::unordered_map<std::uint64_t, std::int8_t> memo_;
  std::size_t calls_ = 0;
};

/**
 * Visits every integer vector of dimension m with max-norm exactly tau.
 * Stops early and returns true as soon as visit returns true.
 */
bool for_each_shell_point(std::size_t m, int tau,
                          const std::function<bool(std::span<const int>)>& visit);

/// Synchronous temporal robustness; at most 2r + 1 checker calls.
RobustnessValue eta(const Signal& s, const Checker& k, int r, EvalStats* stats = nullptr);

/// Asynchronous temporal robustness over groups, scanned shell by shell.
RobustnessValue theta(const Signal& s, const Checker& k, int r, const GroupPartition& p,
                      EvalStats* stats = nullptr);

/// Full enumeration of [-r, r]^m. Throws ResourceError above 10^6 points.
RobustnessValue theta_bruteforce(const Signal& s, const Checker& k, int r,
                                 const GroupPartition& p, EvalStats* stats = nullptr);

inline constexpr std::size_t kBruteforceLimit = 1'000'000;

RobustnessValue eta_stl(const Signal& s, const StlFormula& f, Step t, int r,
                        EvalStats* stats = nullptr);
RobustnessValue theta_stl(const Signal& s, const StlFormula& f, Step t, int r,
                          const GroupPartition& p, EvalStats* stats = nullptr);

}  // namespace temprisk
