#pragma once

// Run configuration: INI sections with typed keys and defaults. Every key is
// optional in the file; unknown sections or keys are errors.

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace proxres::io {

struct GeometrySection {
  double D_mm = 12.65;
  double l_mm = 6.38;
  double eps_r = 16.0;
  std::optional<double> surface_resistance_ohm;  // enables Q_estimate
  double loss_tangent = 0.0;
};

struct DiskModesSection {
  std::string family = "TM";
  int m = 0;
  int n_max = 3;
  int p = 1;
};

struct DoubleWellSection {
  double V0 = 900.0;
  double V1 = -27.0;
  double V2 = -0.0027;
  double Vb = 900.0;
  int level = 1;
  double d_min = 0.02;
  double d_max = 0.5;
  int d_steps = 49;
  bool warm_start = true;

  std::vector<double> d_values() const;
};

struct EffModelSection {
  double T0 = 0.05;
  double kappa_re = 5.69;
  double kappa_im = 0.0;
  double gamma_common = 0.01;
  double gamma_individual = 0.002;
  double side_s = 1.1;
  double b_min = 0.0;
  double b_max = 0.5;
  int b_steps = 26;
  double freq_scale_GHz = 9.45;
  double site_energy = 1.0;
  double channel_shift_coeff = 0.0;

  std::vector<double> b_values() const;
};

struct TwoLevelSection {
  std::vector<double> T_values{1.0, 1.0};
  std::vector<double> gamma_common_values{0.2, 0.2};
  std::vector<double> gamma_individual_values{0.0, 0.05};
  double site_energy = 1.0;
};

struct NumericsSection {
  double tolerance = 1e-11;
  int max_iterations = 100;
};

struct OutputSection {
  std::string directory;  // empty: not set
  int precision_digits = 12;
};

struct RunConfig {
  GeometrySection geometry;
  DiskModesSection disk_modes;
  DoubleWellSection doublewell;
  EffModelSection effmodel;
  TwoLevelSection two_level;
  NumericsSection numerics;
  OutputSection output;
};

using Override = std::pair<std::string, std::string>;  // "section.key", value

/// Parses INI text on top of the defaults, applies overrides, validates.
/// Throws ConfigError naming the section and key.
RunConfig parse_config(const std::string& text, const std::vector<Override>& overrides = {});
RunConfig load_config(const std::filesystem::path& path, const std::vector<Override>& overrides = {});

/// Re-checks every value; throws ConfigError.
void validate(const RunConfig& config);

/// INI text with every key, numbers in shortest round-trip form. Parsing it
/// back gives an identical RunConfig.
std::string render_config(const RunConfig& config);

}  // namespace proxres::io
