#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "temprisk/error.hpp"
#include "temprisk/signal.hpp"

using namespace temprisk;

namespace {

Signal row(std::initializer_list<double> v, Step t_min = 0) {
  Eigen::MatrixXd m(1, static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) m(0, k++) = x;
  return Signal(std::move(m), t_min);
}

}  // namespace

TEST_CASE("sample uses endpoint hold") {
  const Signal s = row({5, 6, 7});
  CHECK(sample(s, 1)(0) == 6);
  CHECK(sample(s, -10)(0) == 5);
  CHECK(sample(s, 100)(0) == 7);
  CHECK(s.t_max() == 2);
}

TEST_CASE("signal construction is validated") {
  CHECK_THROWS_AS(Signal(Eigen::MatrixXd(0, 3), 0), ValidationError);
  CHECK_THROWS_AS(Signal(Eigen::MatrixXd(2, 0), 0), ValidationError);
  CHECK_THROWS_AS(Signal(Eigen::MatrixXd::Zero(1, 3), 0, 0.0), ValidationError);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(1, 3);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(Signal(bad, 0), ValidationError);
}

TEST_CASE("synchronous shift") {
  const Signal s = row({5, 6, 7});
  const Signal z = shift_sync(s, 0);
  CHECK(sample_equal(z, s, -5, 8));
  const Signal one = shift_sync(s, 1);
  CHECK(one.value(0, 0) == 6);
  CHECK(one.value(0, 1) == 7);
  CHECK(one.value(0, 2) == 7);
}

TEST_CASE("asynchronous shift") {
  Eigen::MatrixXd m(2, 3);
  m << 1, 2, 3, 9, 8, 7;
  const Signal s(m, 0);
  ShiftVector k(2);
  k << 1, -1;
  const Signal y = shift_async(s, k);
  CHECK(y.value(0, 1) == 3);
  CHECK(y.value(1, 1) == 9);

  CHECK(sample_equal(shift_async(s, ShiftVector::Zero(2)), s, -4, 6));
  ShiftVector c = ShiftVector::Constant(2, 2);
  CHECK(sample_equal(shift_async(s, c), shift_sync(s, 2), -6, 8));

  ShiftVector wrong(3);
  wrong << 0, 0, 0;
  CHECK_THROWS_AS(shift_async(s, wrong), ShapeError);
}

TEST_CASE("grouped shift expands per group") {
  oracle::Rng rng(11);
  const Signal s = oracle::random_signal(rng, 4, 20);
  const GroupPartition p(4, {{0, 1}, {2, 3}});
  const std::vector<int> g{2, -1};
  ShiftVector k(4);
  k << 2, 2, -1, -1;
  CHECK(sample_equal(shift_grouped(s, p, g), shift_async(s, k), -10, 30));

  const std::vector<int> c{3};
  CHECK(sample_equal(shift_grouped(s, GroupPartition::single(4), c), shift_sync(s, 3), -10, 30));
  const std::vector<int> per{1, -2, 0, 4};
  ShiftVector kp(4);
  kp << 1, -2, 0, 4;
  CHECK(sample_equal(shift_grouped(s, GroupPartition::per_component(4), per), shift_async(s, kp), -10, 30));
}

TEST_CASE("shifts compose exactly") {
  oracle::Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = oracle::uniform(rng, 1, 3);
    const Signal s = oracle::random_signal(rng, n, oracle::uniform(rng, 3, 25), oracle::uniform(rng, -5, 5));
    ShiftVector a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = oracle::uniform(rng, -8, 8);
      b[i] = oracle::uniform(rng, -8, 8);
    }
    const Signal twice = shift_async(shift_async(s, a), b);
    const Signal once = shift_async(s, ShiftVector(a + b));
    CHECK(sample_equal(twice, once, s.t_min() - 30, s.t_max() + 30));
  }
}

TEST_CASE("materialized view matches the literal shift") {
  oracle::Rng rng(9);
  const Signal s = oracle::random_signal(rng, 3, 15);
  ShiftVector k(3);
  k << 4, -2, 0;
  const Signal got = shift_async(s, k);
  const Signal want = oracle::shift(s, {4, -2, 0});
  CHECK(got.t_min() == want.t_min());
  CHECK(got.t_max() == want.t_max());
  CHECK(got == want);
}

TEST_CASE("group partition validation and parsing") {
  CHECK_THROWS_AS(GroupPartition(3, {{0, 1}}), ValidationError);
  CHECK_THROWS_AS(GroupPartition(3, {{0, 1}, {1, 2}}), ValidationError);
  CHECK_THROWS_AS(GroupPartition(2, {{0}, {}, {1}}), ValidationError);
  CHECK_THROWS_AS(GroupPartition(2, {{0}, {2}}), ValidationError);
  const auto p = GroupPartition::parse(4, "1,2;3,4");
  CHECK(p == GroupPartition(4, {{0, 1}, {2, 3}}));
  CHECK(p.str() == "1,2;3,4");
  CHECK_THROWS_AS(GroupPartition::parse(4, "1,2;3,x"), ValidationError);
  CHECK_THROWS_AS(GroupPartition::parse(4, "1,2;3"), ValidationError);
  const std::vector<int> g{1};
  CHECK_THROWS_AS(p.expand(g), ShapeError);
}
