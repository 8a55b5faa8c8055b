#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsense/app/csv.hpp"

namespace gsense::app {

/// Bad command-line input; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  int points = 0;
  bool log = false;

  /// "min:max:points[:log]". Throws UsageError.
  static GridSpec parse(const std::string& text);
  std::vector<double> values() const;
};

struct RunConfig {
  std::string command;  // bounds | figure | optimize | simulate
  std::string figure;
  std::optional<int> modes;
  std::optional<double> total_energy;     // --Nbar
  std::optional<double> per_mode_energy;  // --nbar
  std::optional<double> eta;
  std::vector<double> weights;
  std::optional<GridSpec> grid;
  std::string sweep = "Nbar";  // variable swept by --grid in `bounds`
  std::string objective = "average";
  std::uint64_t seed = 20240917;
  int batches = 500;
  std::vector<int> shots = {1, 10, 50, 200};
  std::string out;

  /// Space-separated key=value echo for the provenance line.
  std::string echo() const;
};

struct CommandResult {
  CsvTable table;
  std::string summary;  // optional one-line summary (optimize)
  std::string note;     // appended to the provenance line
};

CommandResult run_bounds(const RunConfig& cfg);
CommandResult run_figure(const RunConfig& cfg);
CommandResult run_optimize(const RunConfig& cfg);
CommandResult run_simulate(const RunConfig& cfg);

/// Dispatches on cfg.command.
CommandResult run_command(const RunConfig& cfg);

}  // namespace gsense::app
