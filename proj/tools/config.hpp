#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "feller/engine.hpp"
#include "feller/sampler.hpp"
#include "feller/symbol.hpp"

namespace feller::cli {

inline constexpr const char* kLibraryVersion = "0.1.0";

struct IniEntry {
  std::string key;
  std::string value;
  int line = 0;
};

struct IniSection {
  std::string name;
  int line = 0;
  std::vector<IniEntry> entries;
};

/// `[section]` headers and `key = value` lines; `#` or `;` start a comment.
/// Duplicate sections or keys are errors. Throws ConfigError with "source:line: ...".
std::vector<IniSection> parse_ini(std::string_view text, const std::string& source);

struct SymbolConfig {
  std::string family = "stable_like";
  /// Canonical text of every parameter of the family, defaults filled in.
  std::map<std::string, std::string> params;
};

struct SimulationConfig {
  std::vector<double> x0;  // empty: the origin
  std::optional<double> h;
  std::optional<double> T;
  std::optional<long> n_steps;
  long n_paths = 1;
  std::optional<std::uint64_t> seed;

  double step_size() const;
  long steps() const;
};

struct CheckConfig {
  double x_min = -3.0;
  double x_max = 3.0;
  int x_points = 41;
  double xi_min = 1e-2;
  double xi_max = 1e3;
  int xi_points = 61;
  bool closed_form = true;
};

struct ValidateConfig {
  std::vector<std::string> tests{"cf"};
  /// Frozen states for cf and jump_count; empty: x0. `;` separates states.
  std::vector<std::vector<double>> states;
  long n = 100000;
  int points = 41;
  /// Added to the cf threshold; absent: 1e-3 for truncated samplers, else 0.
  std::optional<double> bias;
  double level = 0.01;
  std::vector<double> convergence_h;
  long convergence_paths = 10000;
  long state_dependence_n = 10000;
  double state_dependence_h = 1.0;
};

struct ExperimentConfig {
  std::string source = "<config>";
  SymbolConfig symbol;
  SimulationConfig simulation;
  SamplerOptions sampler;
  std::optional<double> quantization;
  CheckConfig check;
  ValidateConfig validate;
  std::string output_dir = ".";
};

/// Parses and validates a config. Unknown sections, keys or families, malformed
/// values and conflicting step settings all raise ConfigError.
ExperimentConfig parse_config(std::string_view text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

/// Canonical config text: every field with its effective value, no output
/// directory. Feeding it back reproduces the run.
std::string to_manifest(const ExperimentConfig& cfg, const std::string& command);

StateDependentSymbol build_symbol(const SymbolConfig& cfg);
EngineOptions engine_options(const ExperimentConfig& cfg);
/// x0 of the configured dimension.
Vector initial_state(const ExperimentConfig& cfg, int dim);

/// Names accepted for [symbol] family.
std::vector<std::string> family_names();

}  // namespace feller::cli
