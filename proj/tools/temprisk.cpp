// Command-line front end: eval, mc, parse-check, export.
//
// Exit codes: 0 success, 2 specification / validation / risk precondition
// error, 3 I/O error, 1 anything else.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "temprisk/error.hpp"
#include "temprisk/io.hpp"
#include "temprisk/parser.hpp"
#include "temprisk/robustness.hpp"
#include "temprisk/scenarios.hpp"
#include "temprisk/stochastic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace temprisk;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSpec = 2;
constexpr int kExitIo = 3;

struct SpecFile {
  std::optional<ConstraintSpec> constraint;
  std::optional<FormulaFile> formula;
};

SpecFile load_spec(const fs::path& path, double dt) {
  const std::string text = read_text_file(path);
  SpecFile out;
  if (looks_like_constraint(text)) {
    out.constraint = parse_constraint(text);
  } else {
    out.formula = parse_formula_file(text, dt);
  }
  return out;
}

std::shared_ptr<const Checker> make_checker(const SpecFile& spec, Step t) {
  if (spec.constraint) return std::make_shared<ConstraintChecker>(*spec.constraint);
  return std::make_shared<StlChecker>(spec.formula->formula, t);
}

RobustnessKind parse_kind(const std::string& k) {
  if (k == "eta") return RobustnessKind::Eta;
  if (k == "theta") return RobustnessKind::Theta;
  throw ValidationError("--kind must be 'eta' or 'theta'");
}

GroupPartition parse_groups(const std::string& text, Eigen::Index n) {
  return text.empty() ? GroupPartition::per_component(n) : GroupPartition::parse(n, text);
}

// --- eval -----------------------------------------------------------------

struct EvalOptions {
  std::string signal, spec, kind = "theta", groups;
  int r = 50;
  Step t = 0;
  double dt = 1.0;
};

int run_eval(const EvalOptions& o) {
  const Signal s = load_signal(o.signal, o.dt);
  const SpecFile spec = load_spec(o.spec, s.dt());
  const auto checker = make_checker(spec, o.t);
  EvalStats stats;
  RobustnessValue v;
  if (parse_kind(o.kind) == RobustnessKind::Eta) {
    v = eta(s, *checker, o.r, &stats);
  } else {
    v = theta(s, *checker, o.r, parse_groups(o.groups, s.components()), &stats);
  }
  json out = robustness_to_json(v, stats);
  out["kind"] = o.kind;
  out["r"] = o.r;
  if (spec.constraint) out["spatial_robustness"] = spatial_robustness(s, *spec.constraint);
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

// --- mc -------------------------------------------------------------------

struct McOptions {
  std::string scenario, model, kind = "theta", out_dir = ".", config, groups, noise;
  std::vector<double> beta{0.95, 0.98}, lambda;
  std::vector<int> offsets;
  std::optional<int> d;
  double delta = 0.01, dt = 1.0;
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  int r = 50;
  unsigned threads = 0;
};

std::vector<ShiftDistribution> shifts_from(const McOptions& o, std::size_t groups) {
  const int given = (o.d ? 1 : 0) + (o.lambda.empty() ? 0 : 1) + (o.offsets.empty() ? 0 : 1);
  if (given > 1) throw ValidationError("use only one of --d, --lambda, --offset");
  auto fit = [&](auto values, auto make) {
    std::vector<ShiftDistribution> out;
    if (values.size() != 1 && values.size() != groups) {
      throw ValidationError("expected 1 or " + std::to_string(groups) + " shift values, got " +
                            std::to_string(values.size()));
    }
    for (auto v : values) out.push_back(make(v));
    if (out.size() == 1) out.assign(groups, out.front());
    return out;
  };
  if (o.d) return std::vector<ShiftDistribution>(groups, ShiftDistribution::uniform(*o.d));
  if (!o.lambda.empty()) return fit(o.lambda, ShiftDistribution::poisson_delay);
  if (!o.offsets.empty()) return fit(o.offsets, ShiftDistribution::deterministic);
  return std::vector<ShiftDistribution>(groups, ShiftDistribution::deterministic(0));
}

std::vector<ParamNoise> noise_from(const std::string& text) {
  std::vector<ParamNoise> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("--noise expects name=sigma pairs");
    out.push_back({item.substr(0, eq), std::stod(item.substr(eq + 1))});
  }
  return out;
}

// A model file is a JSON object naming either a built-in scenario (with an
// optional config override) or a signal file plus a spec file.
ScenarioModel model_from_file(const McOptions& o, json& echo) {
  json j;
  try {
    j = json::parse(read_text_file(o.model));
  } catch (const json::parse_error& e) {
    throw ValidationError("'" + o.model + "': " + e.what());
  }
  echo["model_file"] = j;
  const fs::path base = fs::path(o.model).parent_path();
  if (j.contains("signal")) {
    const Signal s = load_signal(base / j.at("signal").get<std::string>(), j.value("dt", o.dt));
    const SpecFile spec = load_spec(base / j.at("spec").get<std::string>(), s.dt());
    const auto groups = parse_groups(j.value("groups", o.groups), s.components());
    ScenarioModel m{"file", {}, make_checker(spec, j.value("t", Step{0})), s};
    m.model.generator = [s](const Parameters&) { return s; };
    m.model.groups = groups;
    m.model.shifts = shifts_from(o, groups.size());
    m.model.seed = o.seed;
    return m;
  }
  const std::string name = j.at("scenario").get<std::string>();
  const auto shifts = shifts_from(o, scenario_group_count(name));
  if (j.contains("config")) {
    if (name.starts_with("tintersection")) {
      json cfg = j["config"];
      cfg["scenario"] = name.substr(name.find(':') + 1);
      return tintersection_model(tintersection_config_from_json(cfg), shifts, noise_from(o.noise), o.seed);
    }
    if (name == "servicing") return servicing_model(servicing_config_from_json(j["config"]), shifts, o.seed);
  }
  return scenario_model(name, shifts, noise_from(o.noise), o.seed);
}

int run_mc(const McOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  json config = {{"kind", o.kind},     {"r", o.r},         {"N", o.n},
                 {"seed", o.seed},     {"beta", o.beta},   {"delta", o.delta},
                 {"lambda", o.lambda}, {"offset", o.offsets}, {"noise", o.noise}};
  if (o.d) config["d"] = *o.d;
  ScenarioModel sm = [&] {
    if (!o.model.empty()) return model_from_file(o, config);
    if (o.scenario.empty()) throw ValidationError("mc needs --scenario or --model");
    config["scenario"] = o.scenario;
    return scenario_model(o.scenario, shifts_from(o, scenario_group_count(o.scenario)),
                          noise_from(o.noise), o.seed);
  }();

  McConfig cfg;
  cfg.n = o.n;
  cfg.r = o.r;
  cfg.kind = parse_kind(o.kind);
  cfg.checker = sm.checker;
  cfg.betas = o.beta;
  cfg.delta = o.delta;
  cfg.threads = o.threads;
  const McResult res = mc_risk(sm.model, cfg);

  fs::create_directories(o.out_dir);
  const fs::path dir(o.out_dir);
  write_text_file(dir / "samples.csv", samples_csv(res.costs));
  write_text_file(dir / "hist.json", histogram_json(res.costs).dump(2) + "\n");

  RunManifest manifest{"mc", config, o.seed};
  manifest.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_text_file(dir / "manifest.json", manifest.to_json().dump(2) + "\n");

  if (!res.report) {
    std::cerr << "error: " << *res.risk_error << " (required N >= " << res.required_samples << ")\n";
    return kExitSpec;
  }
  json report = report_to_json(*res.report);
  report["config_digest"] = manifest.digest();
  write_text_file(dir / "report.json", report.dump(2) + "\n");
  write_text_file(dir / "report.csv", report_csv(*res.report, sm.name));
  std::cout << report.dump(2) << "\n";
  return kExitOk;
}

// --- parse-check / export ---------------------------------------------------

int run_parse_check(const std::string& spec_path, double dt) {
  const std::string text = read_text_file(spec_path);
  if (looks_like_constraint(text)) {
    std::cout << to_string(parse_constraint(text));
  } else {
    std::cout << to_string(parse_formula_file(text, dt), dt);
  }
  return kExitOk;
}

int run_export(const std::string& scenario, const std::string& config_path, const std::string& out,
               const std::string& config_out) {
  scenario_group_count(scenario);
  Signal s = sine_example_signal();
  json cfg;
  if (scenario.starts_with("tintersection")) {
    json j = config_path.empty() ? json::object() : json::parse(read_text_file(config_path));
    j["scenario"] = scenario.substr(scenario.find(':') + 1);
    const auto c = tintersection_config_from_json(j);
    s = t_intersection(c).signal;
    cfg = to_json(c);
  } else if (scenario == "servicing") {
    const auto c = config_path.empty() ? ServicingConfig::nominal()
                                       : servicing_config_from_json(json::parse(read_text_file(config_path)));
    s = servicing_signal(c);
    cfg = to_json(c);
  }
  const std::string body = fs::path(out).extension() == ".json" ? signal_to_json(s).dump() + "\n"
                                                                : write_signal_csv(s);
  if (out.empty() || out == "-") {
    std::cout << write_signal_csv(s);
  } else {
    write_text_file(out, body);
  }
  if (!config_out.empty()) write_text_file(config_out, cfg.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal robustness and risk of signals"};
  app.require_subcommand(1);

  EvalOptions ev;
  auto* eval_cmd = app.add_subcommand("eval", "Temporal robustness of one signal");
  eval_cmd->add_option("--signal", ev.signal, "Signal file (.csv or .json)")->required();
  eval_cmd->add_option("--spec", ev.spec, "Constraint or formula file")->required();
  eval_cmd->add_option("--kind", ev.kind, "eta or theta")->capture_default_str();
  eval_cmd->add_option("--r", ev.r, "Saturation bound in steps")->capture_default_str();
  eval_cmd->add_option("--groups", ev.groups, "Component groups, e.g. \"1,2;3,4\"");
  eval_cmd->add_option("--t", ev.t, "Evaluation step for formulas")->capture_default_str();
  eval_cmd->add_option("--dt", ev.dt, "Sampling time of CSV signals")->capture_default_str();

  McOptions mc;
  std::string beta_text, lambda_text, offset_text;
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo risk of temporal robustness");
  mc_cmd->add_option("--scenario", mc.scenario, "tintersection:S1|tintersection:S2|servicing|sine");
  mc_cmd->add_option("--model", mc.model, "Model JSON file");
  mc_cmd->add_option("--kind", mc.kind, "eta or theta")->capture_default_str();
  mc_cmd->add_option("--r", mc.r, "Saturation bound in steps")->capture_default_str();
  mc_cmd->add_option("--N", mc.n, "Number of realizations")->capture_default_str();
  mc_cmd->add_option("--seed", mc.seed, "Base seed")->capture_default_str();
  mc_cmd->add_option("--beta", beta_text, "Comma-separated risk levels (default 0.95,0.98)");
  mc_cmd->add_option("--delta", mc.delta, "Confidence parameter")->capture_default_str();
  mc_cmd->add_option("--d", mc.d, "Uniform shifts in [-d, d] for every group");
  mc_cmd->add_option("--lambda", lambda_text, "Poisson delay rates, one or one per group");
  mc_cmd->add_option("--offset", offset_text, "Fixed shifts, one or one per group");
  mc_cmd->add_option("--noise", mc.noise, "Gaussian parameter noise, e.g. v_green=0.3,v_red=0.3");
  mc_cmd->add_option("--groups", mc.groups, "Groups for file-based models");
  mc_cmd->add_option("--dt", mc.dt, "Sampling time of CSV signals")->capture_default_str();
  mc_cmd->add_option("--threads", mc.threads, "Worker threads (0: TEMPRISK_THREADS or all cores)");
  mc_cmd->add_option("--out-dir", mc.out_dir, "Output directory")->capture_default_str();

  std::string pc_spec;
  double pc_dt = 1.0;
  auto* pc_cmd = app.add_subcommand("parse-check", "Parse a spec file and print its canonical form");
  pc_cmd->add_option("--spec", pc_spec, "Constraint or formula file")->required();
  pc_cmd->add_option("--dt", pc_dt, "Time units per step for formula intervals")->capture_default_str();

  std::string ex_scenario, ex_config, ex_out, ex_config_out;
  auto* ex_cmd = app.add_subcommand("export", "Write a built-in scenario's nominal signal");
  ex_cmd->add_option("--scenario", ex_scenario, "Scenario name")->required();
  ex_cmd->add_option("--config", ex_config, "Scenario config JSON");
  ex_cmd->add_option("--out", ex_out, "Output file (.csv or .json); stdout if omitted");
  ex_cmd->add_option("--config-out", ex_config_out, "Write the effective config JSON here");

  CLI11_PARSE(app, argc, argv);

  auto split_list = [](const std::string& text, auto convert) {
    std::vector<decltype(convert(std::string{}))> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(convert(item));
    return out;
  };

  try {
    if (*eval_cmd) return run_eval(ev);
    if (*mc_cmd) {
      auto to_d = [](const std::string& s) { return std::stod(s); };
      auto to_i = [](const std::string& s) { return std::stoi(s); };
      if (!beta_text.empty()) mc.beta = split_list(beta_text, to_d);
      if (!lambda_text.empty()) mc.lambda = split_list(lambda_text, to_d);
      if (!offset_text.empty()) mc.offsets = split_list(offset_text, to_i);
      return run_mc(mc);
    }
    if (*pc_cmd) return run_parse_check(pc_spec, pc_dt);
    if (*ex_cmd) return run_export(ex_scenario, ex_config, ex_out, ex_config_out);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const SyntaxError& e) {
    std::cerr << "syntax error at " << e.what() << "\n";
    return kExitSpec;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSpec;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSpec;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: bad number in argument list\n";
    return kExitSpec;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
