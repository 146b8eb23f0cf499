#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "proxres/io/config.hpp"
#include "proxres/io/table.hpp"

namespace proxres::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 1,
  kExitEmptyResult = 2,
  kExitPartialFailure = 3,
};

inline const char* const kDiskModesColumns =
    "family,m,n,p,frequency_GHz,kappa_r_per_mm,Q_estimate";
inline const char* const kDoubletColumns =
    "d_over_D,eps_S,gamma_S,eps_A,gamma_A,delta_eps,ratio_gamma_S_over_gamma_A";
inline const char* const kSymmetryBreakColumns =
    "b_over_D,sharp_width,sharp_Q,sharp_irrep_score,bright_width,mid_width";
inline const char* const kTwoLevelColumns =
    "T,gamma_common,gamma_individual,f_S,gamma_S_model,f_A,gamma_A_model";

/// Rows for disk_modes.csv. An empty table means no guided mode below cutoff.
io::CsvTable disk_modes_table(const io::RunConfig& config);

struct DoubletSweepOutput {
  io::CsvTable table;
  std::string fit_report;  // contents of splitting_fit.txt
  std::vector<std::string> warnings;
  std::size_t requested = 0;
  std::size_t solved = 0;
};

DoubletSweepOutput doublet_sweep_output(const io::RunConfig& config);

/// Rows for symmetry_break.csv. Throws GeometryError naming b on overlap.
io::CsvTable symmetry_break_table(const io::RunConfig& config);

struct TwoLevelOutput {
  io::CsvTable table;
  double max_mismatch = 0.0;  // against the closed form, relative to the row scale
};

TwoLevelOutput two_level_output(const io::RunConfig& config);

/// Config snapshot with a commented header; loadable with --config.
std::string manifest_text(const io::RunConfig& config, const std::string& subcommand,
                          const std::string& timestamp);

/// Full command line without the program name. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace proxres::cli
