#pragma once

#include <filesystem>
#include <iosfwd>

#include "config.hpp"

namespace qsocket::cli {

/// Exit statuses of the qsocket tool.
enum ExitCode : int {
  kExitSuccess = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitNoConvergence = 3,
};

struct Context {
  std::filesystem::path out_dir;
  std::ostream& out;
};

/// modes.csv with the lowest standing modes; also printed as a table.
void cmd_modes(const RunConfig& cfg, const Context& ctx);
/// fence_layout.csv and fence_summary.csv (analytic, plus numerical with solve).
void cmd_fence(const RunConfig& cfg, const Context& ctx);
/// pinning_report.csv, pinning_layout.csv and, with write_fields, one PGM per pass.
void cmd_pin(const RunConfig& cfg, const Context& ctx);
/// leakage_sweep.csv and, with plot, leakage_plot.svg.
void cmd_leakage(const RunConfig& cfg, const Context& ctx);
/// fit_report.txt from an anticrossing CSV.
void cmd_fit(const std::filesystem::path& data, const Context& ctx);

/// Full command line: parses arguments, runs one subcommand and maps errors
/// to exit codes. Diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qsocket::cli
