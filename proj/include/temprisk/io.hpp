#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "temprisk/risk.hpp"
#include "temprisk/robustness.hpp"
#include "temprisk/scenarios.hpp"
#include "temprisk/signal.hpp"
#include "temprisk/stochastic.hpp"

namespace temprisk {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// Signals. CSV layout: header "t,x1,...,xn", one row per consecutive integer
// step. Values are written in shortest round-trip form, so reading back
// reproduces them bit for bit.
Signal read_signal_csv(std::string_view text, double dt = 1.0);
std::string write_signal_csv(const Signal& s);

// JSON layout: {"schema", "dt", "t_min", "columns": [[x1..xn] per step]}.
Signal signal_from_json(const nlohmann::json& j);
nlohmann::json signal_to_json(const Signal& s);

/// Dispatches on the extension (.json, otherwise CSV).
Signal load_signal(const std::filesystem::path& path, double dt = 1.0);

// Results.
nlohmann::json robustness_to_json(const RobustnessValue& v, const EvalStats& stats);
nlohmann::json report_to_json(const RiskReport& r);
RiskReport report_from_json(const nlohmann::json& j);

/// Header plus one summary row: upper/lower VaR per beta, CVaR, mean, counts.
std::string report_csv(const RiskReport& r, std::string_view label);

/// One cost per line, in realization order, under a "cost" header.
std::string samples_csv(const std::vector<double>& costs);

/// Histogram with unit-width bins [k, k + 1).
nlohmann::json histogram_json(const std::vector<double>& costs);

// Scenario configurations.
nlohmann::json to_json(const TIntersectionConfig& c);
TIntersectionConfig tintersection_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ServicingConfig& c);
ServicingConfig servicing_config_from_json(const nlohmann::json& j);

// Provenance of a CLI run.
struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::string version = kToolVersion;
  double elapsed_seconds = 0.0;

  /// FNV-1a of the canonical (key-sorted) config dump, as 16 hex digits.
  std::string digest() const;
  nlohmann::json to_json() const;
};

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace temprisk
