#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "temprisk/formula.hpp"

namespace temprisk {

/// Named predicates usable as bare identifiers inside formulas.
using PredicateTable = std::map<std::string, PredicateExpr, std::less<>>;

/// Record of one time-unit to step conversion performed while parsing.
struct IntervalConversion {
  double lo = 0.0;
  double hi = 0.0;
  StepInterval steps;
};

/**
 * Parses a predicate expression such as "1 - abs(x[1] - x[2])".
 *
 * Grammar: constants, x[i] (1-based), unary -, + - * / with the usual
 * precedence, abs(e), norm2(e, ...), min(a, b), max(a, b), parentheses.
 */
PredicateExpr parse_predicate(std::string_view text);

/**
 * Parses an STL formula. Interval bounds are in time units and converted to
 * steps with round-half-away-from-zero of bound / dt.
 *
 *   TRUE | pred{e} | pred{e >= c} | NAME | !f | f & f | f | f
 *   f U[a,b] f | f S[a,b] f | F[a,b] f | G[a,b] f | P[a,b] f | H[a,b] f
 *
 * `&` binds tighter than `|`; until/since bind tighter than `&`.
 */
StlFormula parse_formula(std::string_view text, double dt, const PredicateTable& names = {},
                         std::vector<IntervalConversion>* conversions = nullptr);

/// A formula spec file: `def NAME = <expr>` lines followed by one formula.
struct FormulaFile {
  PredicateTable definitions;
  std::vector<std::string> order;  // definition order, for printing
  StlFormula formula;
};

FormulaFile parse_formula_file(std::string_view text, double dt,
                               std::vector<IntervalConversion>* conversions = nullptr);

/// Parses `on [Ta,Tb]: <expr>`, `always: <expr>` and `default: <real>` lines.
ConstraintSpec parse_constraint(std::string_view text);

/// True when the text uses constraint-file directives.
bool looks_like_constraint(std::string_view text);

std::string to_string(const StlFormula& f, double dt);
std::string to_string(const FormulaFile& f, double dt);
std::string to_string(const ConstraintSpec& c);

}  // namespace temprisk
