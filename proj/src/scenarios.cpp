#include "temprisk/scenarios.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

#include "temprisk/error.hpp"

namespace temprisk {

namespace {

std::string num(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Step steps_of(double time, double dt) { return static_cast<Step>(std::llround(time / dt)); }

}  // namespace

// ---------------------------------------------------------------------------

Signal sine_example_signal(const SineExampleConfig& cfg) {
  if (cfg.t_end < 0) throw ValidationError("sine example needs t_end >= 0");
  Eigen::MatrixXd v(2, cfg.t_end + 1);
  for (Step t = 0; t <= cfg.t_end; ++t) {
    const double phase = cfg.a * std::numbers::pi * static_cast<double>(t);
    v(0, t) = std::sin(phase);
    v(1, t) = -cfg.b * std::sin(1.5 * phase);
  }
  return Signal(std::move(v), 0);
}

ConstraintSpec sine_example_constraint(const SineExampleConfig& cfg) {
  const auto h = constant(cfg.eps) - abs(component(0) - component(1));
  return ConstraintSpec({ConstraintPiece{{cfg.window_lo, cfg.window_hi}, false, h}}, 1.0);
}

// ---------------------------------------------------------------------------

TIntersectionConfig TIntersectionConfig::preset(TScenario s) {
  TIntersectionConfig c;
  c.scenario = s;
  if (s == TScenario::S2) {
    c.v_red = 18.0;
    c.v_blue = 12.0;
  }
  return c;
}

void TIntersectionConfig::validate() const {
  if (!(dt > 0.0)) throw ValidationError("T-intersection dt must be positive");
  if (!(horizon > 0.0)) throw ValidationError("T-intersection horizon must be positive");
  if (!(eps_center >= 0.0) || !(eps_gap >= 0.0)) {
    throw ValidationError("T-intersection distances must be non-negative");
  }
}

Parameters t_intersection_parameters(const TIntersectionConfig& cfg) {
  return {{"v_green", cfg.v_green}, {"v_red", cfg.v_red}, {"v_blue", cfg.v_blue}};
}

Generator t_intersection_generator(const TIntersectionConfig& cfg) {
  cfg.validate();
  return [cfg](const Parameters& p) {
    const auto get = [&](const char* key) {
      auto it = p.find(key);
      if (it == p.end()) throw GenerationError(std::string("missing parameter ") + key);
      return it->second;
    };
    const double vg = get("v_green"), vr = get("v_red"), vb = get("v_blue");
    const Step last = steps_of(cfg.horizon, cfg.dt);
    Eigen::MatrixXd v(6, last + 1);
    for (Step k = 0; k <= last; ++k) {
      const double t = static_cast<double>(k) * cfg.dt;
      v.col(k) << cfg.green0.x(), cfg.green0.y() - vg * t, cfg.red0.x() - vr * t, cfg.red0.y(),
          cfg.blue0.x() + vb * t, cfg.blue0.y();
    }
    return Signal(std::move(v), 0, cfg.dt);
  };
}

TIntersection t_intersection(const TIntersectionConfig& cfg) {
  const Signal s = t_intersection_generator(cfg)(t_intersection_parameters(cfg));
  const auto gx = component(0), gy = component(1);
  // Outside the center disc, or keeping a gap to both cross-traffic cars.
  const auto center = constant(cfg.eps_center) - norm2({gx, gy});
  const auto gap_red = norm2({gx - component(2), gy - component(3)}) - constant(cfg.eps_gap);
  const auto gap_blue = norm2({gx - component(4), gy - component(5)}) - constant(cfg.eps_gap);
  const auto c = max(-center, min(gap_red, gap_blue));
  ConstraintSpec spec({ConstraintPiece{{0, 0}, true, c}}, 1.0);
  return {s, std::move(spec), GroupPartition(6, {{0, 1}, {2, 3}, {4, 5}})};
}

// ---------------------------------------------------------------------------

ServicingConfig ServicingConfig::nominal() {
  ServicingConfig c;
  c.robots[0].start = {2.2, 7.0};
  c.robots[0].schedule = {{0, {4, 7}}, {5, {4, 1}}, {31, {9, 4}}, {45, {9, 8}}};
  c.robots[1].start = {4.0, 1.0};
  c.robots[1].schedule = {{0, {4, 1}}, {13, {4, 7}}, {27, {9, 4}}, {48, {4, 1}}};
  return c;
}

void ServicingConfig::validate() const {
  if (!(ts > 0.0)) throw ValidationError("servicing sampling time must be positive");
  if (horizon <= 0) throw ValidationError("servicing horizon must be positive");
  for (const Box* b : {&region_a, &region_b, &charge}) {
    if (!(b->x_lo <= b->x_hi && b->y_lo <= b->y_hi)) {
      throw ValidationError("servicing regions must be non-empty boxes");
    }
  }
  if (!(u_max > 0.0)) throw ValidationError("servicing u_max must be positive");
  for (const auto& r : robots) {
    if (r.schedule.empty() || r.schedule.front().from != 0) {
      throw ValidationError("each robot schedule must start at step 0");
    }
    for (std::size_t k = 1; k < r.schedule.size(); ++k) {
      if (r.schedule[k].from <= r.schedule[k - 1].from) {
        throw ValidationError("robot schedule steps must be strictly increasing");
      }
    }
    if (r.schedule.back().from > horizon) {
      throw ValidationError("robot schedule extends past the horizon");
    }
  }
}

std::pair<Eigen::Matrix4d, Eigen::Matrix<double, 4, 2>> double_integrator(double ts) {
  Eigen::Matrix4d a = Eigen::Matrix4d::Identity();
  a.topRightCorner<2, 2>() = ts * Eigen::Matrix2d::Identity();
  Eigen::Matrix<double, 4, 2> b;
  b.topRows<2>() = 0.5 * ts * ts * Eigen::Matrix2d::Identity();
  b.bottomRows<2>() = ts * Eigen::Matrix2d::Identity();
  return {a, b};
}

Signal servicing_signal(const ServicingConfig& cfg) {
  cfg.validate();
  const auto [a, b] = double_integrator(cfg.ts);
  Eigen::MatrixXd out(8, cfg.horizon + 1);
  for (std::size_t r = 0; r < cfg.robots.size(); ++r) {
    const auto& plan = cfg.robots[r];
    Eigen::Vector4d x;
    x << plan.start, 0.0, 0.0;
    std::size_t wp = 0;
    double closest = std::numeric_limits<double>::infinity();
    for (Step t = 0; t <= cfg.horizon; ++t) {
      while (wp + 1 < plan.schedule.size() && plan.schedule[wp + 1].from <= t) {
        if (closest > cfg.reach_tolerance) {
          throw GenerationError("robot " + std::to_string(r + 1) + " misses waypoint " +
                                std::to_string(wp + 1) + " (closest approach " + num(closest) + ")");
        }
        ++wp;
        closest = std::numeric_limits<double>::infinity();
      }
      const Eigen::Vector2d target = plan.schedule[wp].target;
      closest = std::min(closest, (x.head<2>() - target).norm());
      out.block<4, 1>(4 * static_cast<Eigen::Index>(r), t) = x;
      Eigen::Vector2d u = cfg.kp * (target - x.head<2>()) - cfg.kd * x.tail<2>();
      if (const double nu = u.norm(); nu > cfg.u_max) u *= cfg.u_max / nu;
      x = a * x + b * u;
    }
    if (closest > cfg.reach_tolerance) {
      throw GenerationError("robot " + std::to_string(r + 1) + " misses its final waypoint");
    }
  }
  return Signal(std::move(out), 0, cfg.ts);
}

std::string servicing_formula_text(const ServicingConfig& cfg) {
  auto box = [](const Box& b, int px) {
    const std::string x = "x[" + std::to_string(px) + "]";
    const std::string y = "x[" + std::to_string(px + 1) + "]";
    return "min(min(" + x + " - " + num(b.x_lo) + ", " + num(b.x_hi) + " - " + x + "), min(" + y +
           " - " + num(b.y_lo) + ", " + num(b.y_hi) + " - " + y + "))";
  };
  std::string text;
  text += "def A1 = " + box(cfg.region_a, 1) + "\n";
  text += "def A2 = " + box(cfg.region_a, 5) + "\n";
  text += "def B1 = " + box(cfg.region_b, 1) + "\n";
  text += "def B2 = " + box(cfg.region_b, 5) + "\n";
  text += "def C1 = " + box(cfg.charge, 1) + "\n";
  text += "def C2 = " + box(cfg.charge, 5) + "\n";
  text +=
      "F[0,1]((A1 | A2) & F[1,5](A1 | A2)) & F[1,6](B1 & B2) & F[0,2] G[0,0.5] C1 & "
      "F[0,2] G[0,0.5] C2\n";
  return text;
}

Servicing servicing(const ServicingConfig& cfg) {
  Signal s = servicing_signal(cfg);
  FormulaFile spec = parse_formula_file(servicing_formula_text(cfg), cfg.ts);
  return {std::move(s), std::move(spec), GroupPartition(8, {{0, 1, 2, 3}, {4, 5, 6, 7}})};
}

// ---------------------------------------------------------------------------

std::size_t scenario_group_count(const std::string& name) {
  if (name == "tintersection:S1" || name == "tintersection:S2") return 3;
  if (name == "servicing" || name == "sine") return 2;
  throw ValidationError("unknown scenario '" + name +
                        "' (expected tintersection:S1, tintersection:S2, servicing or sine)");
}

namespace {

ScenarioModel start_model(std::string name, std::size_t groups, std::vector<ShiftDistribution> shifts,
                          std::vector<ParamNoise> noise, std::uint64_t seed) {
  if (shifts.size() == 1 && groups > 1) shifts.assign(groups, shifts.front());
  ScenarioModel out{std::move(name), {}, nullptr, Signal(Eigen::MatrixXd::Zero(1, 1), 0)};
  out.model.shifts = std::move(shifts);
  out.model.noise = std::move(noise);
  out.model.seed = seed;
  return out;
}

}  // namespace

ScenarioModel tintersection_model(const TIntersectionConfig& cfg, std::vector<ShiftDistribution> shifts,
                                  std::vector<ParamNoise> noise, std::uint64_t seed) {
  const std::string name = cfg.scenario == TScenario::S1 ? "tintersection:S1" : "tintersection:S2";
  auto out = start_model(name, 3, std::move(shifts), std::move(noise), seed);
  auto ti = t_intersection(cfg);
  out.model.generator = t_intersection_generator(cfg);
  out.model.nominal = t_intersection_parameters(cfg);
  out.model.groups = ti.groups;
  out.checker = std::make_shared<ConstraintChecker>(ti.constraint);
  out.nominal = std::move(ti.signal);
  out.model.validate();
  return out;
}

ScenarioModel servicing_model(const ServicingConfig& cfg, std::vector<ShiftDistribution> shifts,
                              std::uint64_t seed) {
  auto out = start_model("servicing", 2, std::move(shifts), {}, seed);
  auto sv = servicing(cfg);
  out.model.generator = [cfg](const Parameters&) { return servicing_signal(cfg); };
  out.model.groups = sv.groups;
  out.checker = std::make_shared<StlChecker>(sv.spec.formula, 0);
  out.nominal = std::move(sv.signal);
  out.model.validate();
  return out;
}

ScenarioModel sine_model(const SineExampleConfig& cfg, std::vector<ShiftDistribution> shifts,
                         std::uint64_t seed) {
  auto out = start_model("sine", 2, std::move(shifts), {}, seed);
  out.model.generator = [cfg](const Parameters&) { return sine_example_signal(cfg); };
  out.model.groups = GroupPartition::per_component(2);
  out.checker = std::make_shared<ConstraintChecker>(sine_example_constraint(cfg));
  out.nominal = sine_example_signal(cfg);
  out.model.validate();
  return out;
}

ScenarioModel scenario_model(const std::string& name, std::vector<ShiftDistribution> shifts,
                             std::vector<ParamNoise> noise, std::uint64_t seed) {
  scenario_group_count(name);
  if (name == "tintersection:S1") {
    return tintersection_model(TIntersectionConfig::preset(TScenario::S1), std::move(shifts),
                               std::move(noise), seed);
  }
  if (name == "tintersection:S2") {
    return tintersection_model(TIntersectionConfig::preset(TScenario::S2), std::move(shifts),
                               std::move(noise), seed);
  }
  if (!noise.empty()) throw ValidationError("scenario '" + name + "' has no noisy parameters");
  if (name == "servicing") return servicing_model(ServicingConfig::nominal(), std::move(shifts), seed);
  return sine_model(SineExampleConfig{}, std::move(shifts), seed);
}

}  // namespace temprisk
