#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tisr/run_config.hpp"

namespace tisr::cli {

/// Exit statuses shared by all subcommands.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,     // I/O, configuration or solver error
  kUsage = 2,       // bad command line
  kCheckFailed = 3  // an embedded check (e.g. oracle_check) did not pass
};

int cmd_simulate(const RunConfig& config, std::ostream& log);
int cmd_solve(const RunConfig& config, std::ostream& log);
int cmd_baseline(const RunConfig& config, std::ostream& log);
int cmd_evaluate(const RunConfig& config, std::ostream& log);
int cmd_register(const RunConfig& config, std::ostream& log);
int cmd_benchmark(const RunConfig& config, std::ostream& log);

/// Dispatches by name; returns kUsage for an unknown command.
int run_command(const std::string& name, const RunConfig& config, std::ostream& log);

const std::vector<std::string>& command_names();

/// Writes the resolved configuration as "run.meta" inside `dir`.
void write_run_meta(const std::filesystem::path& dir, const std::string& command,
                    const RunConfig& config);

/// One row of a dataset manifest.
struct ManifestRow {
  std::string tile_id;
  std::string source;
  std::string protocol;
  int shift_n = 0;
  double true_shift_x = 0.0;
  double true_shift_y = 0.0;
  std::filesystem::path y1;
  std::filesystem::path y2;
  std::filesystem::path ground_truth;
};

/// Reads a manifest; file paths are resolved against the manifest directory.
std::vector<ManifestRow> read_manifest(const std::filesystem::path& path);

}  // namespace tisr::cli
