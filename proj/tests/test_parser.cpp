#include <doctest.h>

#include <vector>

#include "oracles.hpp"
#include "temprisk/error.hpp"
#include "temprisk/parser.hpp"

using namespace temprisk;

namespace {

double eval(const PredicateExpr& e, std::vector<double> x) { return e.eval<double>(x); }

}  // namespace

TEST_CASE("predicate parsing") {
  const auto h = parse_predicate("1 - abs(x[1] - x[2])");
  CHECK(eval(h, {0.25, -0.5}) == doctest::Approx(0.25));
  CHECK(h.max_component() == 1);

  const auto c = parse_predicate(
      "max(-(10 - norm2(x[1],x[2])), min(norm2(x[1]-x[3],x[2]-x[4]) - 15, "
      "norm2(x[1]-x[5],x[2]-x[6]) - 15))");
  CHECK(c.max_component() == 5);
  // Green at the origin, red 20 away, blue 16 away: inside the center disc,
  // so the gap term decides.
  CHECK(eval(c, {0, 0, 20, 0, -16, 0}) == doctest::Approx(1.0));
  CHECK(eval(c, {0, 30, 0, 0, 0, 0}) == doctest::Approx(20.0));

  CHECK(eval(parse_predicate("2 * 3 - 4 / 2"), {}) == doctest::Approx(4.0));
  CHECK(eval(parse_predicate("-x[1] * -2"), {1.5}) == doctest::Approx(3.0));
  CHECK(eval(parse_predicate("1 - 2 - 3"), {}) == doctest::Approx(-4.0));
  CHECK(eval(parse_predicate("2.5e1"), {}) == doctest::Approx(25.0));
}

TEST_CASE("predicate syntax errors carry a location") {
  try {
    parse_predicate("x[1");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 4);
  }
  CHECK_THROWS_AS(parse_predicate("x[0]"), SyntaxError);
  CHECK_THROWS_AS(parse_predicate("foo(x[1])"), SyntaxError);
  CHECK_THROWS_AS(parse_predicate("min(x[1])"), SyntaxError);
  CHECK_THROWS_AS(parse_predicate("1 +"), SyntaxError);
  CHECK_THROWS_AS(parse_predicate("1 2"), SyntaxError);
}

TEST_CASE("formula parsing converts intervals to steps") {
  std::vector<IntervalConversion> conv;
  const auto f = parse_formula("F[0,1](pred{x[1] >= 0})", 0.1, {}, &conv);
  CHECK(f.root().kind == FormulaKind::EvF);
  CHECK(f.root().interval == StepInterval{0, 10});
  CHECK(f.root().children[0]->kind == FormulaKind::Pred);
  REQUIRE(conv.size() == 1);
  CHECK(conv[0].hi == doctest::Approx(1.0));

  CHECK_THROWS_AS(parse_formula("G[2,1] pred{x[1]}", 1.0), ValidationError);
  CHECK_THROWS_AS(parse_formula("G[-1,1] pred{x[1]}", 1.0), ValidationError);
  CHECK_THROWS_AS(parse_formula("G[0,1] p", 1.0), SyntaxError);
  CHECK_THROWS_AS(parse_formula("pred{x[1]} U pred{x[2]}", 1.0), SyntaxError);
}

TEST_CASE("comparison forms inside pred") {
  const auto ge = parse_formula("pred{x[1] >= 2}", 1.0);
  CHECK(eval(*ge.root().predicate, {3.0}) == doctest::Approx(1.0));
  const auto le = parse_formula("pred{x[1] <= 2}", 1.0);
  CHECK(eval(*le.root().predicate, {3.0}) == doctest::Approx(-1.0));
}

TEST_CASE("operator precedence") {
  const auto f = parse_formula("pred{x[1]} | pred{x[2]} & pred{x[3]}", 1.0);
  CHECK(f.root().kind == FormulaKind::Or);
  CHECK(f.root().children[1]->kind == FormulaKind::And);

  const auto g = parse_formula("pred{x[1]} & pred{x[2]} U[0,2] pred{x[3]}", 1.0);
  CHECK(g.root().kind == FormulaKind::And);
  CHECK(g.root().children[1]->kind == FormulaKind::UntilF);

  const auto h = parse_formula("F[0,2] pred{x[1]} S[1,3] pred{x[2]}", 1.0);
  CHECK(h.root().kind == FormulaKind::UntilP);
  CHECK(h.root().children[0]->kind == FormulaKind::EvF);
}

TEST_CASE("formula files with named predicates") {
  const auto ff = parse_formula_file(
      "# regions\n"
      "def A = min(x[1] - 1, 2 - x[1])\n"
      "def B = x[2]\n"
      "F[0,3](A & !B)\n",
      1.0);
  CHECK(ff.order == std::vector<std::string>{"A", "B"});
  const std::string text = to_string(ff, 1.0);
  const auto again = parse_formula_file(text, 1.0);
  CHECK(same_formula(again.formula.root(), ff.formula.root()));
  CHECK(to_string(again, 1.0) == text);

  CHECK_THROWS_AS(parse_formula_file("def A = x[1]\ndef A = x[2]\nA\n", 1.0), SyntaxError);
  try {
    parse_formula_file("def A = x[1]\n\nA & Q\n", 1.0);
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 5);
  }
}

TEST_CASE("constraint files") {
  const auto c = parse_constraint("on [145,155]: 1 - abs(x[1] - x[2])\ndefault: 1\n");
  REQUIRE(c.pieces().size() == 1);
  CHECK(c.pieces()[0].window == StepInterval{145, 155});
  CHECK_FALSE(c.pieces()[0].unbounded);
  CHECK(c.default_value() == 1.0);
  CHECK(looks_like_constraint("# c\non [0,1]: x[1]\n"));
  CHECK_FALSE(looks_like_constraint("F[0,1] pred{x[1]}\n"));

  const auto u = parse_constraint("always: x[1] - 2\n");
  CHECK(u.has_unbounded_piece());
  CHECK(to_string(parse_constraint(to_string(u))) == to_string(u));

  CHECK_THROWS_AS(parse_constraint("on [5,1]: x[1]\n"), ValidationError);
  CHECK_THROWS_AS(parse_constraint("on [0,5]: x[1]\non [5,9]: x[2]\n"), ValidationError);
  CHECK_THROWS_AS(parse_constraint("always: x[1]\non [0,1]: x[2]\n"), ValidationError);
  CHECK_THROWS_AS(parse_constraint("on [0,5]: x[1] x[2]\n"), SyntaxError);
}

TEST_CASE("random formulas round-trip through text") {
  oracle::Rng rng(2024);
  for (int k = 0; k < 300; ++k) {
    const auto f = oracle::random_formula(rng, 3, oracle::uniform(rng, 0, 4));
    for (double dt : {1.0, 0.1, 0.25}) {
      const std::string text = to_string(f, dt);
      const auto g = parse_formula(text, dt);
      INFO(text);
      CHECK(same_formula(f.root(), g.root()));
      CHECK(to_string(g, dt) == text);
    }
  }
}

TEST_CASE("random predicates round-trip through text") {
  oracle::Rng rng(77);
  for (int k = 0; k < 300; ++k) {
    const auto e = oracle::random_expr(rng, 4, 4);
    const auto back = parse_predicate(e.str());
    INFO(e.str());
    CHECK(back.str() == e.str());
    std::vector<double> x{0.3, -1.2, 2.5, 0.0};
    const double a = e.eval<double>(x), b = back.eval<double>(x);
    CHECK(((std::isnan(a) && std::isnan(b)) || a == b));
  }
}
