#include "temprisk/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "temprisk/error.hpp"

namespace temprisk {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Shortest text that reads back to the same double.
std::string shortest(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view s, std::size_t line) {
  const std::string tmp(trim(s));
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size()) {
    throw ValidationError("signal CSV line " + std::to_string(line) + ": bad number '" + tmp + "'");
  }
  return v;
}

json pair_json(const Eigen::Vector2d& v) { return json::array({v.x(), v.y()}); }

Eigen::Vector2d pair_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ValidationError("expected a [x, y] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

json box_json(const Box& b) { return json::array({b.x_lo, b.x_hi, b.y_lo, b.y_hi}); }

Box box_from(const json& j) {
  if (!j.is_array() || j.size() != 4) throw ValidationError("expected a [x_lo, x_hi, y_lo, y_hi] box");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

template <typename T>
T value_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
  return ss.str();
}

void write_text_file(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Signal read_signal_csv(std::string_view text, double dt) {
  std::vector<std::vector<double>> rows;
  std::vector<Step> steps;
  std::size_t width = 0;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line = trim(text.substr(pos, nl == std::string_view::npos ? nl : nl - pos));
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto cells = split(line, ',');
    if (!header_seen) {
      header_seen = true;
      if (trim(cells[0]) != "t") {
        throw ValidationError("signal CSV must start with a header row 't,x1,...'");
      }
      width = cells.size();
      if (width < 2) throw ValidationError("signal CSV needs at least one component column");
      continue;
    }
    if (cells.size() != width) {
      throw ValidationError("signal CSV line " + std::to_string(line_no) + ": expected " +
                            std::to_string(width) + " cells, got " + std::to_string(cells.size()));
    }
    const double t = parse_double(cells[0], line_no);
    if (t != std::floor(t)) {
      throw ValidationError("signal CSV line " + std::to_string(line_no) + ": step must be an integer");
    }
    steps.push_back(static_cast<Step>(t));
    std::vector<double> row;
    for (std::size_t c = 1; c < cells.size(); ++c) row.push_back(parse_double(cells[c], line_no));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError("signal CSV contains no samples");
  for (std::size_t k = 1; k < steps.size(); ++k) {
    if (steps[k] != steps[k - 1] + 1) {
      throw ValidationError("signal CSV steps must be consecutive integers");
    }
  }
  Eigen::MatrixXd v(static_cast<Eigen::Index>(width - 1), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (std::size_t i = 0; i < rows[k].size(); ++i) v(i, k) = rows[k][i];
  }
  return Signal(std::move(v), steps.front(), dt);
}

std::string write_signal_csv(const Signal& s) {
  std::string out = "t";
  for (Eigen::Index i = 0; i < s.components(); ++i) out += ",x" + std::to_string(i + 1);
  out += '\n';
  for (Step t = s.t_min(); t <= s.t_max(); ++t) {
    out += std::to_string(t);
    for (Eigen::Index i = 0; i < s.components(); ++i) out += "," + shortest(s.value(i, t));
    out += '\n';
  }
  return out;
}

Signal signal_from_json(const json& j) {
  try {
    const double dt = value_or(j, "dt", 1.0);
    const Step t_min = value_or<Step>(j, "t_min", 0);
    const auto& cols = j.at("columns");
    if (!cols.is_array() || cols.empty()) throw ValidationError("signal JSON needs non-empty 'columns'");
    const std::size_t n = cols[0].size();
    Eigen::MatrixXd v(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k].size() != n) throw ValidationError("signal JSON columns differ in length");
      for (std::size_t i = 0; i < n; ++i) v(i, k) = cols[k][i].get<double>();
    }
    return Signal(std::move(v), t_min, dt);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed signal JSON: ") + e.what());
  }
}

json signal_to_json(const Signal& s) {
  json cols = json::array();
  for (Step t = s.t_min(); t <= s.t_max(); ++t) {
    json c = json::array();
    for (Eigen::Index i = 0; i < s.components(); ++i) c.push_back(s.value(i, t));
    cols.push_back(std::move(c));
  }
  return {{"schema", kSchemaVersion}, {"dt", s.dt()}, {"t_min", s.t_min()}, {"columns", cols}};
}

Signal load_signal(const fs::path& path, double dt) {
  const std::string text = read_text_file(path);
  if (path.extension() == ".json") {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw ValidationError("'" + path.string() + "': " + e.what());
    }
    return signal_from_json(j);
  }
  return read_signal_csv(text, dt);
}

json robustness_to_json(const RobustnessValue& v, const EvalStats& stats) {
  return {{"schema", kSchemaVersion},
          {"sign", to_int(v.sign)},
          {"magnitude", v.magnitude},
          {"saturated", v.saturated},
          {"signed", v.signed_value()},
          {"checker_calls", stats.checker_calls}};
}

json report_to_json(const RiskReport& r) {
  json var = json::array();
  for (const auto& e : r.var) {
    var.push_back({{"beta", e.beta},
                   {"delta", e.delta},
                   {"lower_index", e.lower_index},
                   {"upper_index", e.upper_index},
                   {"lower", e.lower},
                   {"upper", e.upper}});
  }
  json cvar = json::array();
  for (const auto& e : r.cvar) cvar.push_back({{"beta", e.beta}, {"value", e.value}});
  return {{"schema", kSchemaVersion},
          {"n", r.n},
          {"var", var},
          {"cvar", cvar},
          {"expectation", r.expectation},
          {"violation_count", r.violation_count},
          {"saturated_count", r.saturated_count}};
}

RiskReport report_from_json(const json& j) {
  try {
    RiskReport r;
    r.n = j.at("n").get<std::size_t>();
    for (const auto& e : j.at("var")) {
      r.var.push_back({e.at("beta").get<double>(), e.at("delta").get<double>(),
                       e.at("lower_index").get<std::size_t>(), e.at("upper_index").get<std::size_t>(),
                       e.at("lower").get<double>(), e.at("upper").get<double>()});
    }
    for (const auto& e : j.at("cvar")) r.cvar.push_back({e.at("beta").get<double>(), e.at("value").get<double>()});
    r.expectation = j.at("expectation").get<double>();
    r.violation_count = j.at("violation_count").get<std::size_t>();
    r.saturated_count = j.at("saturated_count").get<std::size_t>();
    return r;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed report JSON: ") + e.what());
  }
}

std::string report_csv(const RiskReport& r, std::string_view label) {
  std::string head = "label";
  std::string row(label);
  for (const auto& e : r.var) {
    head += ",var_upper_" + shortest(e.beta) + ",var_lower_" + shortest(e.beta);
    row += "," + shortest(e.upper) + "," + shortest(e.lower);
  }
  for (const auto& e : r.cvar) {
    head += ",cvar_" + shortest(e.beta);
    row += "," + shortest(e.value);
  }
  head += ",expectation,violations,saturated,n\n";
  row += "," + shortest(r.expectation) + "," + std::to_string(r.violation_count) + "," +
         std::to_string(r.saturated_count) + "," + std::to_string(r.n) + "\n";
  return head + row;
}

std::string samples_csv(const std::vector<double>& costs) {
  std::string out = "cost\n";
  for (double c : costs) out += shortest(c) + "\n";
  return out;
}

json histogram_json(const std::vector<double>& costs) {
  std::map<long long, std::size_t> bins;
  for (double c : costs) ++bins[static_cast<long long>(std::floor(c))];
  json arr = json::array();
  for (const auto& [lo, count] : bins) arr.push_back({{"lo", lo}, {"hi", lo + 1}, {"count", count}});
  return {{"schema", kSchemaVersion}, {"bin_width", 1}, {"n", costs.size()}, {"bins", arr}};
}

json to_json(const TIntersectionConfig& c) {
  return {{"scenario", c.scenario == TScenario::S1 ? "S1" : "S2"},
          {"eps_center", c.eps_center},
          {"eps_gap", c.eps_gap},
          {"v_green", c.v_green},
          {"v_red", c.v_red},
          {"v_blue", c.v_blue},
          {"green0", pair_json(c.green0)},
          {"red0", pair_json(c.red0)},
          {"blue0", pair_json(c.blue0)},
          {"horizon", c.horizon},
          {"dt", c.dt}};
}

TIntersectionConfig tintersection_config_from_json(const json& j) {
  try {
    const std::string name = value_or<std::string>(j, "scenario", "S1");
    if (name != "S1" && name != "S2") throw ValidationError("scenario must be S1 or S2");
    auto c = TIntersectionConfig::preset(name == "S1" ? TScenario::S1 : TScenario::S2);
    c.eps_center = value_or(j, "eps_center", c.eps_center);
    c.eps_gap = value_or(j, "eps_gap", c.eps_gap);
    c.v_green = value_or(j, "v_green", c.v_green);
    c.v_red = value_or(j, "v_red", c.v_red);
    c.v_blue = value_or(j, "v_blue", c.v_blue);
    if (j.contains("green0")) c.green0 = pair_from(j["green0"]);
    if (j.contains("red0")) c.red0 = pair_from(j["red0"]);
    if (j.contains("blue0")) c.blue0 = pair_from(j["blue0"]);
    c.horizon = value_or(j, "horizon", c.horizon);
    c.dt = value_or(j, "dt", c.dt);
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed T-intersection config: ") + e.what());
  }
}

json to_json(const ServicingConfig& c) {
  json robots = json::array();
  for (const auto& r : c.robots) {
    json sched = json::array();
    for (const auto& w : r.schedule) sched.push_back({{"from", w.from}, {"target", pair_json(w.target)}});
    robots.push_back({{"start", pair_json(r.start)}, {"schedule", sched}});
  }
  return {{"ts", c.ts},
          {"horizon", c.horizon},
          {"region_a", box_json(c.region_a)},
          {"region_b", box_json(c.region_b)},
          {"charge", box_json(c.charge)},
          {"kp", c.kp},
          {"kd", c.kd},
          {"u_max", c.u_max},
          {"reach_tolerance", c.reach_tolerance},
          {"robots", robots}};
}

ServicingConfig servicing_config_from_json(const json& j) {
  try {
    auto c = ServicingConfig::nominal();
    c.ts = value_or(j, "ts", c.ts);
    c.horizon = value_or<Step>(j, "horizon", c.horizon);
    if (j.contains("region_a")) c.region_a = box_from(j["region_a"]);
    if (j.contains("region_b")) c.region_b = box_from(j["region_b"]);
    if (j.contains("charge")) c.charge = box_from(j["charge"]);
    c.kp = value_or(j, "kp", c.kp);
    c.kd = value_or(j, "kd", c.kd);
    c.u_max = value_or(j, "u_max", c.u_max);
    c.reach_tolerance = value_or(j, "reach_tolerance", c.reach_tolerance);
    if (j.contains("robots")) {
      const auto& rs = j["robots"];
      if (!rs.is_array() || rs.size() != 2) throw ValidationError("servicing config needs two robots");
      for (std::size_t k = 0; k < 2; ++k) {
        c.robots[k].start = pair_from(rs[k].at("start"));
        c.robots[k].schedule.clear();
        for (const auto& w : rs[k].at("schedule")) {
          c.robots[k].schedule.push_back({w.at("from").get<Step>(), pair_from(w.at("target"))});
        }
      }
    }
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed servicing config: ") + e.what());
  }
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string RunManifest::digest() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(config.dump())));
  return buf;
}

json RunManifest::to_json() const {
  return {{"schema", kSchemaVersion},
          {"command", command},
          {"config", config},
          {"config_digest", digest()},
          {"seed", seed},
          {"version", version},
          {"elapsed_seconds", elapsed_seconds}};
}

}  // namespace temprisk
