#include "temprisk/formula.hpp"

#include <algorithm>

namespace temprisk {

namespace {

FormulaPtr make(FormulaKind kind, std::vector<FormulaPtr> children, StepInterval i = {}) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = kind;
  n->interval = i;
  n->children = std::move(children);
  return n;
}

bool is_temporal(FormulaKind k) {
  switch (k) {
    case FormulaKind::UntilF:
    case FormulaKind::UntilP:
    case FormulaKind::EvF:
    case FormulaKind::EvP:
    case FormulaKind::AlwF:
    case FormulaKind::AlwP: return true;
    default: return false;
  }
}

int max_component(const FormulaNode& n) {
  int m = n.predicate ? n.predicate->max_component() : -1;
  for (const auto& c : n.children) m = std::max(m, max_component(*c));
  return m;
}

void validate(const FormulaNode& n) {
  if (is_temporal(n.kind)) {
    if (n.interval.lo < 0) throw ValidationError("temporal interval has a negative bound");
    if (n.interval.hi < n.interval.lo) throw ValidationError("temporal interval is reversed");
  }
  if (n.kind == FormulaKind::Pred && !n.predicate) {
    throw ValidationError("predicate node without expression");
  }
  for (const auto& c : n.children) validate(*c);
}

FormulaPtr desugar(const FormulaPtr& n) {
  std::vector<FormulaPtr> kids;
  for (const auto& c : n->children) kids.push_back(desugar(c));
  const auto i = n->interval;
  auto top = make(FormulaKind::True, {});
  auto neg = [](FormulaPtr a) { return make(FormulaKind::Not, {std::move(a)}); };
  switch (n->kind) {
    case FormulaKind::True:
    case FormulaKind::Pred: return n;
    case FormulaKind::Not: return make(FormulaKind::Not, kids);
    case FormulaKind::And: return make(FormulaKind::And, kids);
    case FormulaKind::UntilF: return make(FormulaKind::UntilF, kids, i);
    case FormulaKind::UntilP: return make(FormulaKind::UntilP, kids, i);
    case FormulaKind::Or:
      return neg(make(FormulaKind::And, {neg(kids[0]), neg(kids[1])}));
    case FormulaKind::EvF: return make(FormulaKind::UntilF, {top, kids[0]}, i);
    case FormulaKind::EvP: return make(FormulaKind::UntilP, {top, kids[0]}, i);
    case FormulaKind::AlwF:
      return neg(make(FormulaKind::UntilF, {top, neg(kids[0])}, i));
    case FormulaKind::AlwP:
      return neg(make(FormulaKind::UntilP, {top, neg(kids[0])}, i));
  }
  return n;
}

}  // namespace

StlFormula::StlFormula(FormulaPtr root) : root_(std::move(root)) {
  if (!root_) throw ValidationError("empty formula");
}

int StlFormula::max_component() const { return temprisk::max_component(*root_); }

bool same_formula(const FormulaNode& a, const FormulaNode& b) {
  if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
  if (is_temporal(a.kind) && !(a.interval == b.interval)) return false;
  if (a.kind == FormulaKind::Pred) {
    if (a.name != b.name) return false;
    if (!same_expr(a.predicate->root(), b.predicate->root())) return false;
  }
  for (std::size_t k = 0; k < a.children.size(); ++k) {
    if (!same_formula(*a.children[k], *b.children[k])) return false;
  }
  return true;
}

bool StlFormula::operator==(const StlFormula& o) const { return same_formula(*root_, *o.root_); }

void validate(const StlFormula& f) { validate(f.root()); }

StlFormula desugar(const StlFormula& f) { return StlFormula(desugar(f.node())); }

namespace stl {

StlFormula top() { return StlFormula(make(FormulaKind::True, {})); }

StlFormula pred(PredicateExpr h, std::string name) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = FormulaKind::Pred;
  n->predicate = std::move(h);
  n->name = std::move(name);
  return StlFormula(n);
}

StlFormula negate(const StlFormula& a) { return StlFormula(make(FormulaKind::Not, {a.node()})); }
StlFormula conj(const StlFormula& a, const StlFormula& b) {
  return StlFormula(make(FormulaKind::And, {a.node(), b.node()}));
}
StlFormula disj(const StlFormula& a, const StlFormula& b) {
  return StlFormula(make(FormulaKind::Or, {a.node(), b.node()}));
}
StlFormula until(const StlFormula& a, StepInterval i, const StlFormula& b) {
  return StlFormula(make(FormulaKind::UntilF, {a.node(), b.node()}, i));
}
StlFormula since(const StlFormula& a, StepInterval i, const StlFormula& b) {
  return StlFormula(make(FormulaKind::UntilP, {a.node(), b.node()}, i));
}
StlFormula eventually(StepInterval i, const StlFormula& a) {
  return StlFormula(make(FormulaKind::EvF, {a.node()}, i));
}
StlFormula always(StepInterval i, const StlFormula& a) {
  return StlFormula(make(FormulaKind::AlwF, {a.node()}, i));
}
StlFormula once(StepInterval i, const StlFormula& a) {
  return StlFormula(make(FormulaKind::EvP, {a.node()}, i));
}
StlFormula historically(StepInterval i, const StlFormula& a) {
  return StlFormula(make(FormulaKind::AlwP, {a.node()}, i));
}

}  // namespace stl

ConstraintSpec::ConstraintSpec(std::vector<ConstraintPiece> pieces, double default_value)
    : pieces_(std::move(pieces)), default_value_(default_value) {
  if (!std::isfinite(default_value_)) throw ValidationError("constraint default must be finite");
  for (const auto& p : pieces_) {
    if (!p.unbounded && p.window.hi < p.window.lo) {
      throw ValidationError("constraint window is reversed");
    }
  }
  if (has_unbounded_piece() && pieces_.size() > 1) {
    throw ValidationError("an unbounded constraint piece must be the only piece");
  }
  std::vector<StepInterval> w;
  for (const auto& p : pieces_) w.push_back(p.window);
  std::sort(w.begin(), w.end(), [](auto a, auto b) { return a.lo < b.lo; });
  for (std::size_t k = 1; k < w.size(); ++k) {
    if (w[k].lo <= w[k - 1].hi) throw ValidationError("constraint windows overlap");
  }
}

bool ConstraintSpec::has_unbounded_piece() const {
  return std::any_of(pieces_.begin(), pieces_.end(), [](const auto& p) { return p.unbounded; });
}

int ConstraintSpec::max_component() const {
  int m = -1;
  for (const auto& p : pieces_) m = std::max(m, p.expr.max_component());
  return m;
}

}  // namespace temprisk
