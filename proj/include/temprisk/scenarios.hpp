#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "temprisk/formula.hpp"
#include "temprisk/parser.hpp"
#include "temprisk/signal.hpp"
#include "temprisk/stochastic.hpp"

namespace temprisk {

// ---------------------------------------------------------------------------
// Two sinusoids that must stay close on a window.

struct SineExampleConfig {
  double a = 0.04;
  double b = 1.05;
  Step t_end = 400;
  Step window_lo = 145;
  Step window_hi = 155;
  double eps = 1.0;
};

/// x1 = sin(a pi t), x2 = -b sin(1.5 a pi t) on [0, t_end].
Signal sine_example_signal(const SineExampleConfig& cfg = {});
ConstraintSpec sine_example_constraint(const SineExampleConfig& cfg = {});

// ---------------------------------------------------------------------------
// Three cars at a T-intersection.

enum class TScenario { S1, S2 };

struct TIntersectionConfig {
  TScenario scenario = TScenario::S1;
  double eps_center = 10.0;
  double eps_gap = 15.0;
  double v_green = 15.0;
  double v_red = 12.0;
  double v_blue = 18.0;
  Eigen::Vector2d green0{-5.0, 300.0};
  Eigen::Vector2d red0{300.0, 5.0};
  Eigen::Vector2d blue0{-300.0, -5.0};
  double horizon = 60.0;
  double dt = 0.1;

  static TIntersectionConfig preset(TScenario s);
  void validate() const;
};

struct TIntersection {
  Signal signal;
  ConstraintSpec constraint;
  GroupPartition groups;
};

/// Components: green (x, y), red (x, y), blue (x, y).
TIntersection t_intersection(const TIntersectionConfig& cfg);

/// Generator over parameters v_green, v_red, v_blue.
Generator t_intersection_generator(const TIntersectionConfig& cfg);
Parameters t_intersection_parameters(const TIntersectionConfig& cfg);

// ---------------------------------------------------------------------------
// Two robots on a servicing mission.

struct Box {
  double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;

  bool contains(const Eigen::Vector2d& p) const {
    return p.x() >= x_lo && p.x() <= x_hi && p.y() >= y_lo && p.y() <= y_hi;
  }
};

struct Waypoint {
  Step from = 0;
  Eigen::Vector2d target = Eigen::Vector2d::Zero();
};

struct RobotPlan {
  Eigen::Vector2d start = Eigen::Vector2d::Zero();
  std::vector<Waypoint> schedule;
};

struct ServicingConfig {
  double ts = 0.1;
  Step horizon = 100;
  Box region_a{3, 5, 6, 8};
  Box region_b{8, 10, 3, 5};
  Box charge{3, 5, 0, 2};
  double kp = 30.0;
  double kd = 11.0;
  double u_max = 40.0;
  /// A waypoint counts as reached when approached within this distance.
  double reach_tolerance = 1.0;
  std::array<RobotPlan, 2> robots;

  static ServicingConfig nominal();
  void validate() const;
};

/// Double-integrator step matrices for one planar robot: state (px, py, vx, vy).
std::pair<Eigen::Matrix4d, Eigen::Matrix<double, 4, 2>> double_integrator(double ts);

struct Servicing {
  Signal signal;
  FormulaFile spec;
  GroupPartition groups;
};

/// Components: robot 1 (px, py, vx, vy), robot 2 (px, py, vx, vy).
/// Throws GenerationError when a waypoint is not reached before the next one.
Servicing servicing(const ServicingConfig& cfg);

Signal servicing_signal(const ServicingConfig& cfg);

/// The mission formula in its textual form (intervals in time units).
std::string servicing_formula_text(const ServicingConfig& cfg);

// ---------------------------------------------------------------------------
// Scenario lookup by name, e.g. "tintersection:S1", "servicing", "sine".

struct ScenarioModel {
  std::string name;
  ProcessModel model;
  std::shared_ptr<const Checker> checker;
  Signal nominal;
};

ScenarioModel tintersection_model(const TIntersectionConfig& cfg, std::vector<ShiftDistribution> shifts,
                                  std::vector<ParamNoise> noise, std::uint64_t seed);
ScenarioModel servicing_model(const ServicingConfig& cfg, std::vector<ShiftDistribution> shifts,
                              std::uint64_t seed);
ScenarioModel sine_model(const SineExampleConfig& cfg, std::vector<ShiftDistribution> shifts,
                         std::uint64_t seed);

/// Builds the named scenario with the given per-group shift distributions.
/// A single distribution is applied to every group.
ScenarioModel scenario_model(const std::string& name, std::vector<ShiftDistribution> shifts,
                             std::vector<ParamNoise> noise, std::uint64_t seed);

/// Number of shift groups of a named scenario.
std::size_t scenario_group_count(const std::string& name);

}  // namespace temprisk
