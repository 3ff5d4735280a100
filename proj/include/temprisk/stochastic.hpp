#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "temprisk/random.hpp"
#include "temprisk/risk.hpp"
#include "temprisk/robustness.hpp"
#include "temprisk/signal.hpp"

namespace temprisk {

/**
 * Integer time shift applied to one group of a realization.
 *
 * Poisson draws are delays: a delay D >= 0 yields the shift -D, so the group
 * runs D steps late.
 */
class ShiftDistribution {
 public:
  enum class Kind { Deterministic, UniformInt, Poisson };

  static ShiftDistribution deterministic(int k);
  static ShiftDistribution uniform(int d);
  static ShiftDistribution poisson_delay(double lambda);

  Kind kind() const { return kind_; }
  int offset() const { return offset_; }
  int half_width() const { return half_width_; }
  double rate() const { return rate_; }

  int draw(Rng& rng) const;
  /// Largest |shift| this distribution can produce, or nullopt if unbounded.
  std::optional<int> bound() const;
  std::string str() const;

 private:
  Kind kind_ = Kind::Deterministic;
  int offset_ = 0;
  int half_width_ = 0;
  double rate_ = 0.0;
};

using Parameters = std::map<std::string, double, std::less<>>;
using Generator = std::function<Signal(const Parameters&)>;

struct ParamNoise {
  std::string name;
  double sigma = 0.0;
};

struct ProcessModel {
  Generator generator;
  Parameters nominal;
  std::vector<ParamNoise> noise;
  GroupPartition groups = GroupPartition::single(1);
  std::vector<ShiftDistribution> shifts;
  std::uint64_t seed = 0;

  /// True when realizations differ only by their group shifts.
  bool shift_only() const;
  void validate() const;
};

/// The random ingredients of realization i.
struct RealizationDraw {
  Parameters params;
  std::vector<int> shifts;
};

RealizationDraw draw(const ProcessModel& m, std::size_t i);

/// Bitwise reproducible for fixed (m.seed, i).
Signal realize(const ProcessModel& m, std::size_t i);

enum class RobustnessKind { Eta, Theta };

struct McConfig {
  std::size_t n = 1000;
  int r = 50;
  RobustnessKind kind = RobustnessKind::Theta;
  std::shared_ptr<const Checker> checker;
  std::vector<double> betas{0.95};
  double delta = 0.01;
  /// 0 means use TEMPRISK_THREADS or the hardware concurrency.
  unsigned threads = 0;
};

struct McResult {
  /// Costs in realization order (unsorted).
  std::vector<double> costs;
  std::vector<Sign> signs;
  std::size_t saturated_count = 0;
  std::size_t violation_count = 0;
  std::size_t checker_calls = 0;
  std::optional<RiskReport> report;
  /// Set when the report could not be built (e.g. too few samples).
  std::optional<std::string> risk_error;
  std::size_t required_samples = 0;
};

/// Cost of one robustness value: -signed, with saturated positives at -r.
double cost_of(const RobustnessValue& v);

McResult mc_risk(const ProcessModel& m, const McConfig& cfg);

unsigned worker_count(unsigned requested);

}  // namespace temprisk
