#include "proxres/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <ostream>

#include <CLI11.hpp>

#include "proxres/diskmode/diskmode.hpp"
#include "proxres/doublewell/doublewell.hpp"
#include "proxres/effmodel/effmodel.hpp"
#include "proxres/error.hpp"
#include "proxres/version.hpp"

namespace proxres::cli {

namespace {

std::vector<std::string> split_columns(const char* header) {
  std::vector<std::string> out;
  std::string cur;
  for (const char* p = header; *p; ++p) {
    if (*p == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += *p;
    }
  }
  out.push_back(cur);
  return out;
}

diskmode::ResonatorGeometry geometry_of(const io::RunConfig& c) {
  return {c.geometry.D_mm, c.geometry.l_mm, c.geometry.eps_r};
}

effmodel::TriangleParams triangle_of(const io::RunConfig& c) {
  const auto& e = c.effmodel;
  effmodel::TriangleParams p;
  p.side_s = e.side_s;
  p.T0 = e.T0;
  p.kappa = {e.kappa_re, e.kappa_im};
  p.gamma_common = e.gamma_common;
  p.gamma_individual = e.gamma_individual;
  p.site_energy = e.site_energy;
  p.channel_shift_coeff = e.channel_shift_coeff;
  p.freq_scale_GHz = e.freq_scale_GHz;
  return p;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// "--section.key=value" or "--section.key value"; everything else goes to CLI11.
void split_overrides(const std::vector<std::string>& args, std::vector<std::string>& rest,
                     std::vector<io::Override>& overrides) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) == 0) {
      const auto eq = a.find('=');
      const std::string name = a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
      if (name.find('.') != std::string::npos) {
        if (eq != std::string::npos) {
          overrides.emplace_back(name, a.substr(eq + 1));
        } else if (i + 1 < args.size()) {
          overrides.emplace_back(name, args[++i]);
        } else {
          throw ConfigError("", "", "override --" + name + " needs a value");
        }
        continue;
      }
    }
    rest.push_back(a);
  }
}

std::filesystem::path output_directory(const std::string& flag, const io::RunConfig& config) {
  if (!flag.empty()) return flag;
  if (!config.output.directory.empty()) return config.output.directory;
  if (const char* env = std::getenv("PROXRES_OUT"); env && *env) return env;
  return ".";
}

void write_outputs(const std::filesystem::path& dir,
                   const std::vector<std::pair<std::string, std::string>>& files,
                   const io::RunConfig& config, const std::string& subcommand, std::ostream& out) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, content] : files) {
    io::write_file_atomic(dir / name, content);
    out << "wrote " << (dir / name).string() << "\n";
  }
  io::write_file_atomic(dir / "run_manifest.txt", manifest_text(config, subcommand, utc_timestamp()));
}

}  // namespace

io::CsvTable disk_modes_table(const io::RunConfig& config) {
  const int digits = config.output.precision_digits;
  const auto geometry = geometry_of(config);
  const auto& dm = config.disk_modes;
  const auto family = diskmode::parse_mode_family(dm.family);
  const bool with_q = config.geometry.surface_resistance_ohm.has_value() &&
                      family != diskmode::ModeFamily::HEM;
  io::CsvTable table(split_columns(kDiskModesColumns));
  const auto freqs = diskmode::mode_frequencies(geometry, family, dm.m, dm.p, dm.n_max);
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    std::string q;
    if (with_q) {
      q = io::format_number(diskmode::q_budget(geometry, {family, dm.m, n, dm.p},
                                               *config.geometry.surface_resistance_ohm,
                                               config.geometry.loss_tangent)
                                .q_total,
                            digits);
    }
    table.add_row({dm.family, std::to_string(dm.m), std::to_string(n), std::to_string(dm.p),
                   io::format_number(freqs[i], digits),
                   io::format_number(diskmode::evanescent_kappa(geometry, freqs[i], dm.p), digits),
                   q});
  }
  return table;
}

DoubletSweepOutput doublet_sweep_output(const io::RunConfig& config) {
  const int digits = config.output.precision_digits;
  const auto& dw = config.doublewell;
  doublewell::DoubleWellSpec spec{dw.V0, dw.V1, dw.V2, dw.Vb, 0.0};
  doublewell::SolverOptions options;
  options.root.tolerance = config.numerics.tolerance;
  options.root.max_iterations = config.numerics.max_iterations;
  options.warm_start = dw.warm_start;

  const auto d_values = dw.d_values();
  const auto sweep = doublewell::sweep_distance(spec, d_values, dw.level, options);

  DoubletSweepOutput out{io::CsvTable(split_columns(kDoubletColumns)), {}, {}, d_values.size(), 0};
  std::vector<double> fit_d;
  std::vector<double> fit_de;
  for (const auto& p : sweep.points) {
    if (!p.result) {
      out.warnings.push_back("d = " + io::format_number(p.d, digits) + " skipped: " + p.error);
      continue;
    }
    const auto& r = *p.result;
    ++out.solved;
    out.table.add_row({io::format_number(p.d, digits), io::format_number(r.level_S.energy_eps, digits),
                       io::format_number(r.level_S.width_gamma, digits),
                       io::format_number(r.level_A.energy_eps, digits),
                       io::format_number(r.level_A.width_gamma, digits),
                       io::format_number(r.delta_eps, digits), io::format_number(r.width_ratio, digits)});
    fit_d.push_back(p.d);
    fit_de.push_back(r.delta_eps);
  }

  if (out.solved == 0) {
    out.fit_report = "error = no solved points\n";
    return out;
  }
  const double kappa_bar = doublewell::barrier_kappa(spec, sweep.mean_level_energy());
  try {
    const auto fit = doublewell::fit_splitting(fit_d, fit_de, kappa_bar);
    out.fit_report = "decay_constant = " + io::format_number(fit.decay_constant, digits) + "\n" +
                     "prefactor = " + io::format_number(fit.prefactor, digits) + "\n" +
                     "rms_residual = " + io::format_number(fit.rms_residual, digits) + "\n" +
                     "log_range = " + io::format_number(fit.log_range, digits) + "\n" +
                     "kappa_bar_r = " + io::format_number(kappa_bar, digits) + "\n" +
                     "points_used = " + std::to_string(fit.points_used) + "\n";
  } catch (const DomainError& e) {
    out.fit_report = "kappa_bar_r = " + io::format_number(kappa_bar, digits) + "\n" +
                     "error = " + e.what() + "\n";
  }
  return out;
}

io::CsvTable symmetry_break_table(const io::RunConfig& config) {
  const int digits = config.output.precision_digits;
  const auto params = triangle_of(config);
  const auto b_values = config.effmodel.b_values();
  for (double b : b_values) effmodel::triangle_network(params, b);
  if (b_values.front() < 0.0) throw ConfigError("effmodel", "b_min", "must be >= 0");

  io::CsvTable table(split_columns(kSymmetryBreakColumns));
  for (const auto& p : effmodel::symmetry_break_sweep(params, b_values)) {
    if (!p.row) throw GeometryError(p.error);
    const auto& r = *p.row;
    table.add_row({io::format_number(p.b, digits), io::format_number(r.sharp_width, digits),
                   io::format_number(r.sharp_Q, digits), io::format_number(r.sharp_irrep.score, digits),
                   io::format_number(r.bright_width, digits), io::format_number(r.mid_width, digits)});
  }
  return table;
}

TwoLevelOutput two_level_output(const io::RunConfig& config) {
  const int digits = config.output.precision_digits;
  const auto& tl = config.two_level;
  TwoLevelOutput out{io::CsvTable(split_columns(kTwoLevelColumns)), 0.0};
  for (std::size_t i = 0; i < tl.T_values.size(); ++i) {
    const double T = tl.T_values[i];
    const double gc = tl.gamma_common_values[i];
    const double gd = tl.gamma_individual_values[i];
    const auto modes = effmodel::spectrum(effmodel::two_site_network(tl.site_energy, T, gc, gd));
    const auto find = [&](const char* label) -> const effmodel::ModeReport& {
      for (const auto& m : modes) {
        if (m.irrep.name == label) return m;
      }
      throw ConvergenceError(std::string("two-level: no ") + label + " mode", 0.0, 0.0);
    };
    const auto& s = find("even");
    const auto& a = find("odd");
    const double scale = std::max({1.0, std::abs(tl.site_energy), T, gc, gd});
    const double mismatch = std::max({std::abs(s.eigenvalue.real() - (tl.site_energy - T)),
                                      std::abs(s.width - (2.0 * gc + gd)),
                                      std::abs(a.eigenvalue.real() - (tl.site_energy + T)),
                                      std::abs(a.width - gd)}) /
                            scale;
    out.max_mismatch = std::max(out.max_mismatch, mismatch);
    out.table.add_row({io::format_number(T, digits), io::format_number(gc, digits),
                       io::format_number(gd, digits), io::format_number(s.eigenvalue.real(), digits),
                       io::format_number(s.width, digits), io::format_number(a.eigenvalue.real(), digits),
                       io::format_number(a.width, digits)});
  }
  return out;
}

std::string manifest_text(const io::RunConfig& config, const std::string& subcommand,
                          const std::string& timestamp) {
  return std::string("# proxres ") + kVersion + "\n# created " + timestamp + "\n# subcommand " +
         subcommand + "\n" + io::render_config(config);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coupled dielectric resonator solvers", "proxres"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string config_path;
  std::string out_dir;
  std::string family;
  int m = -1;
  int n_max = -1;
  int p = -1;

  auto* disk = app.add_subcommand("disk-modes", "single-disk mode frequencies");
  auto* sweep = app.add_subcommand("doublet-sweep", "double-well doublet versus distance");
  auto* three = app.add_subcommand("three-disk", "triangle symmetry-breaking sweep");
  auto* two = app.add_subcommand("two-level", "two-site closed-form demo");
  for (auto* sub : {disk, sweep, three, two}) {
    sub->add_option("--config", config_path, "INI config file");
    sub->add_option("--out", out_dir, "output directory");
  }
  disk->add_option("--family", family, "TM, TE or HEM");
  disk->add_option("--m", m, "azimuthal index");
  disk->add_option("--n-max", n_max, "number of radial modes");
  disk->add_option("--p", p, "vertical index");

  std::vector<io::Override> overrides;
  try {
    std::vector<std::string> rest;
    split_overrides(args, rest, overrides);
    std::reverse(rest.begin(), rest.end());
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  if (!family.empty()) overrides.emplace_back("disk_modes.family", family);
  if (m >= 0) overrides.emplace_back("disk_modes.m", std::to_string(m));
  if (n_max >= 0) overrides.emplace_back("disk_modes.n_max", std::to_string(n_max));
  if (p >= 0) overrides.emplace_back("disk_modes.p", std::to_string(p));

  io::RunConfig config;
  try {
    config = config_path.empty() ? io::parse_config("", overrides)
                                 : io::load_config(config_path, overrides);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  const auto dir = output_directory(out_dir, config);

  try {
    if (disk->parsed()) {
      io::CsvTable table = disk_modes_table(config);
      if (table.rows().empty()) {
        err << "no guided " << config.disk_modes.family << " modes below the plate cutoff\n";
        return kExitEmptyResult;
      }
      write_outputs(dir, {{"disk_modes.csv", table.render()}}, config, "disk-modes", out);
      return kExitOk;
    }
    if (sweep->parsed()) {
      const auto result = doublet_sweep_output(config);
      for (const auto& w : result.warnings) err << "warning: " << w << "\n";
      write_outputs(dir,
                    {{"doublet_sweep.csv", result.table.render()},
                     {"splitting_fit.txt", result.fit_report}},
                    config, "doublet-sweep", out);
      if (5 * result.solved < 4 * result.requested) {
        err << "only " << result.solved << " of " << result.requested << " points solved\n";
        return kExitPartialFailure;
      }
      return kExitOk;
    }
    if (three->parsed()) {
      const io::CsvTable table = symmetry_break_table(config);
      write_outputs(dir, {{"symmetry_break.csv", table.render()}}, config, "three-disk", out);
      return kExitOk;
    }
    const auto result = two_level_output(config);
    write_outputs(dir, {{"two_level.csv", result.table.render()}}, config, "two-level", out);
    if (!(result.max_mismatch <= 1e-12)) {
      err << "two-level spectrum deviates from the closed form by " << result.max_mismatch << "\n";
      return kExitPartialFailure;
    }
    return kExitOk;
  } catch (const NoSuchModeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitEmptyResult;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const GeometryError& e) {
    err << "geometry error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitPartialFailure;
  }
}

}  // namespace proxres::cli
