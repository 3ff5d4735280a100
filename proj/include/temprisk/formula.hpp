#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "temprisk/predicate.hpp"
#include "temprisk/signal.hpp"

namespace temprisk {

/// Closed integer step interval [lo, hi].
struct StepInterval {
  Step lo = 0;
  Step hi = 0;
  bool operator==(const StepInterval&) const = default;
};

enum class FormulaKind {
  True,
  Pred,
  Not,
  And,
  Or,
  UntilF,  // future until
  UntilP,  // past until (since)
  EvF,     // future eventually
  EvP,     // past eventually
  AlwF,    // future always
  AlwP,    // past always
};

struct FormulaNode;
using FormulaPtr = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
  FormulaKind kind = FormulaKind::True;
  StepInterval interval;                 // temporal operators only
  std::optional<PredicateExpr> predicate;  // Pred only
  std::string name;                      // optional display name of a Pred
  std::vector<FormulaPtr> children;
};

/**
 * Immutable STL formula with bounded, non-negative step intervals.
 *
 * Derived operators (Or, eventually, always) are kept as their own nodes so
 * the formula prints back the way it was written; desugar() rewrites them
 * into the core grammar.
 */
class StlFormula {
 public:
  explicit StlFormula(FormulaPtr root);

  const FormulaNode& root() const { return *root_; }
  const FormulaPtr& node() const { return root_; }

  /// Largest component index referenced by any predicate (0-based), -1 if none.
  int max_component() const;

  bool operator==(const StlFormula& o) const;

 private:
  FormulaPtr root_;
};

namespace stl {

StlFormula top();
StlFormula pred(PredicateExpr h, std::string name = {});
StlFormula negate(const StlFormula& a);
StlFormula conj(const StlFormula& a, const StlFormula& b);
StlFormula disj(const StlFormula& a, const StlFormula& b);
StlFormula until(const StlFormula& a, StepInterval i, const StlFormula& b);
StlFormula since(const StlFormula& a, StepInterval i, const StlFormula& b);
StlFormula eventually(StepInterval i, const StlFormula& a);
StlFormula always(StepInterval i, const StlFormula& a);
StlFormula once(StepInterval i, const StlFormula& a);
StlFormula historically(StepInterval i, const StlFormula& a);

}  // namespace stl

/// Rewrites Or, EvF/EvP, AlwF/AlwP into True, Pred, Not, And, UntilF, UntilP.
StlFormula desugar(const StlFormula& f);

/// Throws ValidationError for negative or reversed intervals.
void validate(const StlFormula& f);

bool same_formula(const FormulaNode& a, const FormulaNode& b);

/**
 * Piecewise constraint function c(x, t).
 *
 * Each piece applies its predicate on an integer window; an `unbounded`
 * piece applies at every time. Outside all pieces c equals `default_value`.
 */
struct ConstraintPiece {
  StepInterval window;
  bool unbounded = false;
  PredicateExpr expr;
};

class ConstraintSpec {
 public:
  ConstraintSpec(std::vector<ConstraintPiece> pieces, double default_value = 1.0);

  const std::vector<ConstraintPiece>& pieces() const { return pieces_; }
  double default_value() const { return default_value_; }
  bool has_unbounded_piece() const;
  int max_component() const;

 private:
  std::vector<ConstraintPiece> pieces_;
  double default_value_;
};

}  // namespace temprisk
