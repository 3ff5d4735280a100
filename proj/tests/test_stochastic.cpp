#include <doctest.h>

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "temprisk/error.hpp"
#include "temprisk/scenarios.hpp"
#include "temprisk/stochastic.hpp"

using namespace temprisk;

TEST_CASE("rng streams are reproducible and distinct") {
  Rng a(7, 3, 0), b(7, 3, 0), c(7, 3, 1), d(7, 4, 0);
  const auto x = a.next();
  CHECK(x == b.next());
  CHECK(x != c.next());
  CHECK(x != d.next());
  Rng u(1, 0, 0);
  for (int k = 0; k < 1000; ++k) {
    const double v = u.uniform01();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("uniform shifts pass a chi-square test") {
  const auto dist = ShiftDistribution::uniform(5);
  Rng rng(99, 0, 1);
  std::map<int, int> counts;
  const int n = 100000;
  for (int k = 0; k < n; ++k) ++counts[dist.draw(rng)];
  REQUIRE(counts.size() == 11);
  CHECK(counts.begin()->first == -5);
  CHECK(counts.rbegin()->first == 5);
  double chi2 = 0.0;
  const double expected = n / 11.0;
  for (const auto& [v, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 10 degrees of freedom, 0.999 quantile.
  CHECK(chi2 < 29.59);
}

TEST_CASE("poisson delays") {
  const auto dist = ShiftDistribution::poisson_delay(3.0);
  CHECK_FALSE(dist.bound().has_value());
  Rng rng(5, 0, 1);
  const int n = 50000;
  double sum = 0.0, sq = 0.0;
  for (int k = 0; k < n; ++k) {
    const int s = dist.draw(rng);
    CHECK(s <= 0);
    sum += s;
    sq += static_cast<double>(s) * s;
  }
  const double mean = sum / n, var = sq / n - mean * mean;
  CHECK(mean == doctest::Approx(-3.0).epsilon(0.03));
  CHECK(var == doctest::Approx(3.0).epsilon(0.05));

  Rng big(5, 1, 1);
  double bsum = 0.0;
  for (int k = 0; k < 20000; ++k) bsum += static_cast<double>(big.poisson(60.0));
  CHECK(bsum / 20000 == doctest::Approx(60.0).epsilon(0.01));
  CHECK_THROWS_AS(ShiftDistribution::poisson_delay(-1.0), ValidationError);
  CHECK_THROWS_AS(ShiftDistribution::uniform(-1), ValidationError);
}

TEST_CASE("deterministic shifts") {
  const auto dist = ShiftDistribution::deterministic(-4);
  Rng rng(1, 1, 1);
  for (int k = 0; k < 10; ++k) CHECK(dist.draw(rng) == -4);
  CHECK(dist.bound() == 4);
}

TEST_CASE("realizations are reproducible") {
  const auto sm = scenario_model("tintersection:S2", {ShiftDistribution::uniform(8)}, {{"v_red", 0.3}}, 42);
  for (std::size_t i : {0u, 1u, 17u}) {
    const auto a = draw(sm.model, i), b = draw(sm.model, i);
    CHECK(a.shifts == b.shifts);
    CHECK(a.params == b.params);
    CHECK(realize(sm.model, i) == realize(sm.model, i));
  }
  CHECK(draw(sm.model, 0).params != draw(sm.model, 1).params);
}

TEST_CASE("a zero shift reproduces the nominal signal") {
  const auto sm = scenario_model("servicing", {ShiftDistribution::deterministic(0)}, {}, 1);
  CHECK(sm.model.shift_only());
  for (std::size_t i = 0; i < 3; ++i) CHECK(sample_equal(realize(sm.model, i), sm.nominal, -20, 1200));
}

TEST_CASE("costs follow robustness values") {
  CHECK(cost_of({Sign::Positive, 5, false}) == -5);
  CHECK(cost_of({Sign::Negative, 2, false}) == 2);
  CHECK(cost_of({Sign::Positive, 7, true}) == -7);
}

TEST_CASE("Monte Carlo results do not depend on the thread count") {
  const auto sm = sine_model({}, {ShiftDistribution::uniform(6)}, 3);
  McConfig cfg;
  cfg.n = 400;
  cfg.r = 15;
  cfg.checker = sm.checker;
  cfg.betas = {0.9};
  cfg.delta = 0.05;
  cfg.threads = 1;
  const auto one = mc_risk(sm.model, cfg);
  cfg.threads = 4;
  const auto four = mc_risk(sm.model, cfg);
  CHECK(one.costs == four.costs);
  REQUIRE(one.report.has_value());
  CHECK(one.report->var[0].upper == four.report->var[0].upper);

  // Each cost matches a direct evaluation of its realization.
  for (std::size_t i = 0; i < 20; ++i) {
    const auto v = theta(realize(sm.model, i), *sm.checker, cfg.r, sm.model.groups);
    CHECK(one.costs[i] == cost_of(v));
  }
  std::size_t violations = 0;
  for (std::size_t i = 0; i < one.costs.size(); ++i) {
    // A zero cost is either a fragile pass or a fragile violation.
    if (one.signs[i] == Sign::Negative) CHECK(one.costs[i] >= 0);
    if (one.costs[i] > 0) CHECK(one.signs[i] == Sign::Negative);
    violations += one.signs[i] == Sign::Negative;
  }
  CHECK(one.violation_count == violations);
}

TEST_CASE("too few realizations leave the report empty") {
  const auto sm = sine_model({}, {ShiftDistribution::uniform(2)}, 3);
  McConfig cfg;
  cfg.n = 10;
  cfg.r = 5;
  cfg.checker = sm.checker;
  cfg.betas = {0.98};
  cfg.delta = 0.01;
  const auto res = mc_risk(sm.model, cfg);
  CHECK(res.costs.size() == 10);
  CHECK_FALSE(res.report.has_value());
  REQUIRE(res.risk_error.has_value());
  CHECK(res.required_samples == required_samples(0.98, 0.01));
}

TEST_CASE("model validation") {
  auto sm = sine_model({}, {ShiftDistribution::uniform(2)}, 3);
  sm.model.shifts.push_back(ShiftDistribution::uniform(1));
  sm.model.shifts.push_back(ShiftDistribution::uniform(1));
  CHECK_THROWS_AS(sm.model.validate(), ValidationError);
  CHECK_THROWS_AS(scenario_model("nope", {ShiftDistribution::uniform(1)}, {}, 0), ValidationError);
  CHECK_THROWS_AS(scenario_model("servicing", {ShiftDistribution::uniform(1)}, {{"v_red", 0.1}}, 0),
                  ValidationError);
}
