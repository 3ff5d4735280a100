#include <doctest.h>

#include "oracles.hpp"
#include "temprisk/error.hpp"
#include "temprisk/parser.hpp"
#include "temprisk/scenarios.hpp"
#include "temprisk/semantics.hpp"

using namespace temprisk;

namespace {

Signal constant_signal(double v, Step len) { return Signal(Eigen::MatrixXd::Constant(1, len, v), 0); }

}  // namespace

TEST_CASE("constraint satisfaction") {
  CHECK(beta_c(sine_example_signal(), sine_example_constraint()) == Sign::Positive);
  CHECK(beta_c(constant_signal(0, 20), parse_constraint("on [0,10]: x[1] - 1")) == Sign::Negative);
  CHECK(beta_c(constant_signal(0, 5), ConstraintSpec({}, 1.0)) == Sign::Positive);
  CHECK_THROWS_AS(beta_c(constant_signal(0, 5), ConstraintSpec({}, -1.0)), SpecError);
  CHECK_THROWS_AS(beta_c(constant_signal(0, 5), parse_constraint("on [0,1]: x[2]")), ShapeError);
}

TEST_CASE("spatial robustness") {
  CHECK(spatial_robustness(constant_signal(3, 10), parse_constraint("on [0,5]: x[1]\ndefault: 1")) ==
        doctest::Approx(1.0));
  CHECK(spatial_robustness(constant_signal(3, 10), parse_constraint("always: x[1]")) ==
        doctest::Approx(3.0));
  CHECK(spatial_robustness(constant_signal(-2, 10), parse_constraint("on [0,5]: x[1]")) ==
        doctest::Approx(-2.0));
}

TEST_CASE("constraint windows reach outside the sampled window") {
  // The held value of the last sample applies after the signal ends.
  Eigen::MatrixXd m(1, 3);
  m << 1, 1, -1;
  const Signal s(m, 0);
  CHECK(beta_c(s, parse_constraint("on [50,60]: x[1]")) == Sign::Negative);
  CHECK(beta_c(s, parse_constraint("on [-60,-50]: x[1]")) == Sign::Positive);
}

TEST_CASE("formula semantics on a hand-made trace") {
  // x[1] >= 0 exactly on steps 4..6.
  Eigen::MatrixXd m(1, 20);
  m.setConstant(-1.0);
  m(0, 4) = m(0, 5) = m(0, 6) = 1.0;
  const Signal s(m, 0);
  auto at = [&](const char* text, Step t) { return beta_phi(s, parse_formula(text, 1.0), t); };
  CHECK(at("TRUE", 0) == Sign::Positive);
  CHECK(at("F[0,10] pred{x[1]}", 0) == Sign::Positive);
  CHECK(at("G[0,10] pred{x[1]}", 0) == Sign::Negative);
  CHECK(at("G[0,2] pred{x[1]}", 4) == Sign::Positive);
  CHECK(at("G[0,3] pred{x[1]}", 4) == Sign::Negative);
  CHECK(at("F[0,3] pred{x[1]}", 0) == Sign::Negative);
  CHECK(at("P[1,3] pred{x[1]}", 9) == Sign::Positive);
  CHECK(at("P[0,2] pred{x[1]}", 9) == Sign::Negative);
  CHECK(at("H[0,2] pred{x[1]}", 6) == Sign::Positive);
  // The left operand must hold on the closed range [t, t''].
  CHECK(at("!pred{x[1]} U[0,10] pred{x[1]}", 0) == Sign::Negative);
  CHECK(at("!pred{x[1] - 2} U[0,10] pred{x[1]}", 0) == Sign::Positive);
  CHECK(at("!pred{x[1] - 2} U[7,10] pred{x[1]}", 0) == Sign::Negative);
  CHECK(at("pred{x[1]} U[2,2] TRUE", 4) == Sign::Positive);
  CHECK(at("pred{x[1]} U[3,3] TRUE", 4) == Sign::Negative);
  CHECK(at("!pred{x[1] - 2} S[0,10] pred{x[1]}", 12) == Sign::Positive);
  CHECK(at("pred{x[1]} S[1,2] !pred{x[1]}", 6) == Sign::Negative);
  CHECK(at("pred{x[1]} S[2,2] TRUE", 6) == Sign::Positive);
  CHECK(at("pred{x[1]} S[3,3] TRUE", 6) == Sign::Negative);
}

TEST_CASE("satisfaction trace agrees with pointwise evaluation") {
  oracle::Rng rng(3);
  const Signal s = oracle::random_signal(rng, 2, 40);
  const auto f = parse_formula("pred{x[1]} U[1,4] pred{x[2]} | H[0,3] pred{x[1] - x[2]}", 1.0);
  const auto tr = satisfaction(SignalView(s), f, -5, 45);
  for (Step t = -5; t <= 45; ++t) CHECK(tr[static_cast<std::size_t>(t + 5)] == to_int(beta_phi(s, f, t)));
}

TEST_CASE("formula semantics match the literal definitions") {
  oracle::Rng rng(99);
  int disagreements = 0;
  for (int k = 0; k < 300; ++k) {
    const int n = oracle::uniform(rng, 1, 3);
    const Signal s = oracle::random_signal(rng, n, oracle::uniform(rng, 10, 40));
    const auto f = oracle::random_formula(rng, n, oracle::uniform(rng, 1, 4));
    const Step t = oracle::uniform(rng, -5, 45);
    if ((beta_phi(s, f, t) == Sign::Positive) != oracle::formula_holds(s, f, t)) ++disagreements;
  }
  CHECK(disagreements == 0);
}

TEST_CASE("desugaring preserves meaning") {
  oracle::Rng rng(123);
  for (int k = 0; k < 150; ++k) {
    const Signal s = oracle::random_signal(rng, 2, 30);
    const auto f = oracle::random_formula(rng, 2, 3);
    const auto g = desugar(f);
    const Step t = oracle::uniform(rng, 0, 29);
    CHECK(beta_phi(s, f, t) == beta_phi(s, g, t));
  }
}

TEST_CASE("shifted views evaluate like materialized signals") {
  oracle::Rng rng(41);
  for (int k = 0; k < 100; ++k) {
    const Signal s = oracle::random_signal(rng, 2, 30);
    ShiftVector off(2);
    off << oracle::uniform(rng, -6, 6), oracle::uniform(rng, -6, 6);
    const Signal y = shift_async(s, off);
    const auto f = oracle::random_formula(rng, 2, 3);
    const auto c = oracle::random_constraint(rng, 2, 0, 29);
    CHECK(beta_phi(SignalView(s, off), f, 7) == beta_phi(y, f, 7));
    CHECK(beta_c(SignalView(s, off), c) == beta_c(y, c));
    CHECK((beta_c(y, c) == Sign::Positive) == oracle::constraint_holds(y, c));
  }
}
