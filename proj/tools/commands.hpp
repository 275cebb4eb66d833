#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "config.hpp"
#include "feller/engine.hpp"

namespace feller::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2 };

struct RunOptions {
  /// Output directory; empty: [output] dir of the config.
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

/// path_<stream id>.csv per recorded path, terminal.csv, manifest.ini.
int cmd_simulate(ExperimentConfig cfg, const RunOptions& opts, std::ostream& log);
/// report.txt, summary.json, manifest.ini; kFail when any condition fails.
int cmd_check_symbol(ExperimentConfig cfg, const RunOptions& opts, std::ostream& log);
/// report.txt, summary.json, manifest.ini; kFail when any test fails.
int cmd_validate(ExperimentConfig cfg, const RunOptions& opts, std::ostream& log);
/// figure1.csv, figure1.svg, manifest.ini for the T = 5, 1000-step preset.
int cmd_demo_figure1(ExperimentConfig cfg, const RunOptions& opts, std::ostream& log);

/// 17 significant digits, locale independent.
std::string format17(double v);
/// Header t,x1,...,xd then one row per time point; LF line endings.
std::string path_csv(const Path& p);
/// Time-vs-state line plot with a single polyline.
std::string path_svg(const Path& p);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace feller::cli
