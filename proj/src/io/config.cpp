#include "proxres/io/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <variant>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "proxres/diskmode/diskmode.hpp"
#include "proxres/doublewell/doublewell.hpp"
#include "proxres/effmodel/effmodel.hpp"
#include "proxres/error.hpp"
#include "proxres/io/table.hpp"

namespace proxres::io {

namespace {

using Target = std::variant<double*, int*, bool*, std::string*, std::optional<double>*,
                            std::vector<double>*>;

struct Binding {
  const char* section;
  const char* key;
  Target target;
};

std::vector<Binding> bindings(RunConfig& c) {
  return {
      {"geometry", "D_mm", &c.geometry.D_mm},
      {"geometry", "l_mm", &c.geometry.l_mm},
      {"geometry", "eps_r", &c.geometry.eps_r},
      {"geometry", "surface_resistance_ohm", &c.geometry.surface_resistance_ohm},
      {"geometry", "loss_tangent", &c.geometry.loss_tangent},
      {"disk_modes", "family", &c.disk_modes.family},
      {"disk_modes", "m", &c.disk_modes.m},
      {"disk_modes", "n_max", &c.disk_modes.n_max},
      {"disk_modes", "p", &c.disk_modes.p},
      {"doublewell", "V0", &c.doublewell.V0},
      {"doublewell", "V1", &c.doublewell.V1},
      {"doublewell", "V2", &c.doublewell.V2},
      {"doublewell", "Vb", &c.doublewell.Vb},
      {"doublewell", "level", &c.doublewell.level},
      {"doublewell", "d_min", &c.doublewell.d_min},
      {"doublewell", "d_max", &c.doublewell.d_max},
      {"doublewell", "d_steps", &c.doublewell.d_steps},
      {"doublewell", "warm_start", &c.doublewell.warm_start},
      {"effmodel", "T0", &c.effmodel.T0},
      {"effmodel", "kappa_re", &c.effmodel.kappa_re},
      {"effmodel", "kappa_im", &c.effmodel.kappa_im},
      {"effmodel", "gamma_common", &c.effmodel.gamma_common},
      {"effmodel", "gamma_individual", &c.effmodel.gamma_individual},
      {"effmodel", "side_s", &c.effmodel.side_s},
      {"effmodel", "b_min", &c.effmodel.b_min},
      {"effmodel", "b_max", &c.effmodel.b_max},
      {"effmodel", "b_steps", &c.effmodel.b_steps},
      {"effmodel", "freq_scale_GHz", &c.effmodel.freq_scale_GHz},
      {"effmodel", "site_energy", &c.effmodel.site_energy},
      {"effmodel", "channel_shift_coeff", &c.effmodel.channel_shift_coeff},
      {"two_level", "T_values", &c.two_level.T_values},
      {"two_level", "gamma_common_values", &c.two_level.gamma_common_values},
      {"two_level", "gamma_individual_values", &c.two_level.gamma_individual_values},
      {"two_level", "site_energy", &c.two_level.site_energy},
      {"numerics", "tolerance", &c.numerics.tolerance},
      {"numerics", "max_iterations", &c.numerics.max_iterations},
      {"output", "directory", &c.output.directory},
      {"output", "precision_digits", &c.output.precision_digits},
  };
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const Binding& b, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last || text.empty()) {
    throw ConfigError(b.section, b.key, "expected a number, got '" + text + "'");
  }
  if (!std::isfinite(v)) throw ConfigError(b.section, b.key, "value must be finite");
  return v;
}

int parse_int(const Binding& b, const std::string& text) {
  int v = 0;
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(text.data(), last, v);
  if (res.ec != std::errc{} || res.ptr != last || text.empty()) {
    throw ConfigError(b.section, b.key, "expected an integer, got '" + text + "'");
  }
  return v;
}

void assign(const Binding& b, const std::string& raw) {
  const std::string text = trim(raw);
  std::visit(
      [&](auto* target) {
        using T = std::remove_pointer_t<decltype(target)>;
        if constexpr (std::is_same_v<T, double>) {
          *target = parse_double(b, text);
        } else if constexpr (std::is_same_v<T, int>) {
          *target = parse_int(b, text);
        } else if constexpr (std::is_same_v<T, bool>) {
          if (text == "true" || text == "1") {
            *target = true;
          } else if (text == "false" || text == "0") {
            *target = false;
          } else {
            throw ConfigError(b.section, b.key, "expected true or false, got '" + text + "'");
          }
        } else if constexpr (std::is_same_v<T, std::string>) {
          *target = text;
        } else if constexpr (std::is_same_v<T, std::optional<double>>) {
          if (text.empty()) {
            target->reset();
          } else {
            *target = parse_double(b, text);
          }
        } else {
          target->clear();
          std::stringstream ss(text);
          std::string item;
          while (std::getline(ss, item, ',')) target->push_back(parse_double(b, trim(item)));
        }
      },
      b.target);
}

std::string render_value(const Target& target) {
  return std::visit(
      [](auto* value) -> std::string {
        using T = std::remove_pointer_t<decltype(value)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_shortest(*value);
        } else if constexpr (std::is_same_v<T, int>) {
          return std::to_string(*value);
        } else if constexpr (std::is_same_v<T, bool>) {
          return *value ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return *value;
        } else if constexpr (std::is_same_v<T, std::optional<double>>) {
          return *value ? format_shortest(**value) : "";
        } else {
          std::string out;
          for (std::size_t i = 0; i < value->size(); ++i) {
            if (i > 0) out += ',';
            out += format_shortest((*value)[i]);
          }
          return out;
        }
      },
      target);
}

const Binding* find_binding(const std::vector<Binding>& table, const std::string& section,
                            const std::string& key) {
  bool known_section = false;
  for (const auto& b : table) {
    if (section == b.section) {
      known_section = true;
      if (key == b.key) return &b;
    }
  }
  if (!known_section) throw ConfigError(section, "", "unknown section");
  throw ConfigError(section, key, "unknown key");
}

void require(bool ok, const char* section, const char* key, const std::string& what) {
  if (!ok) throw ConfigError(section, key, what);
}

std::vector<double> linspace(double lo, double hi, int steps) {
  std::vector<double> out;
  if (steps == 1) return {lo};
  for (int i = 0; i < steps; ++i) {
    out.push_back(i == steps - 1 ? hi : lo + (hi - lo) * i / (steps - 1));
  }
  return out;
}

}  // namespace

std::vector<double> DoubleWellSection::d_values() const { return linspace(d_min, d_max, d_steps); }

std::vector<double> EffModelSection::b_values() const { return linspace(b_min, b_max, b_steps); }

void validate(const RunConfig& c) {
  const auto& g = c.geometry;
  require(g.D_mm > 0.0, "geometry", "D_mm", "must be > 0");
  require(g.l_mm > 0.0, "geometry", "l_mm", "must be > 0");
  require(g.eps_r > 1.0, "geometry", "eps_r", "must be > 1");
  require(!g.surface_resistance_ohm || *g.surface_resistance_ohm > 0.0, "geometry",
          "surface_resistance_ohm", "must be > 0 when set");
  require(g.loss_tangent >= 0.0, "geometry", "loss_tangent", "must be >= 0");

  const auto& dm = c.disk_modes;
  try {
    const diskmode::ModeFamily family = diskmode::parse_mode_family(dm.family);
    require(dm.m >= 0, "disk_modes", "m", "must be >= 0");
    require((family == diskmode::ModeFamily::HEM) == (dm.m >= 1), "disk_modes", "m",
            "TM and TE need m = 0, HEM needs m >= 1");
  } catch (const DomainError& e) {
    throw ConfigError("disk_modes", "family", e.what());
  }
  require(dm.n_max >= 1, "disk_modes", "n_max", "must be >= 1");
  require(dm.p >= 1, "disk_modes", "p", "must be >= 1");

  const auto& dw = c.doublewell;
  require(dw.V0 > 0.0, "doublewell", "V0", "must be > 0");
  require(dw.Vb > 0.0 && dw.Vb <= dw.V0, "doublewell", "Vb", "must satisfy 0 < Vb <= V0");
  require(dw.V1 <= 0.0 && std::abs(dw.V1) <= 0.2 * dw.V0, "doublewell", "V1",
          "must satisfy -0.2 V0 <= V1 <= 0");
  require(dw.V2 <= 0.0 && std::abs(dw.V2) <= 0.2 * dw.V0, "doublewell", "V2",
          "must satisfy -0.2 V0 <= V2 <= 0");
  require(dw.level >= 1, "doublewell", "level", "must be >= 1");
  require(dw.d_min >= 0.0, "doublewell", "d_min", "must be >= 0");
  require(dw.d_steps >= 1, "doublewell", "d_steps", "must be >= 1");
  require(dw.d_steps == 1 ? dw.d_max >= dw.d_min : dw.d_max > dw.d_min, "doublewell", "d_max",
          "must exceed d_min");

  const auto& em = c.effmodel;
  require(em.T0 > 0.0, "effmodel", "T0", "must be > 0");
  require(em.kappa_re > 0.0, "effmodel", "kappa_re", "must be > 0");
  require(em.gamma_common >= 0.0, "effmodel", "gamma_common", "must be >= 0");
  require(em.gamma_individual >= 0.0, "effmodel", "gamma_individual", "must be >= 0");
  require(em.side_s > 1.0, "effmodel", "side_s", "must exceed the disk diameter 1");
  require(em.b_steps >= 1, "effmodel", "b_steps", "must be >= 1");
  require(em.b_steps == 1 ? em.b_max >= em.b_min : em.b_max > em.b_min, "effmodel", "b_max",
          "must exceed b_min");
  require(em.freq_scale_GHz > 0.0, "effmodel", "freq_scale_GHz", "must be > 0");

  const auto& tl = c.two_level;
  require(!tl.T_values.empty(), "two_level", "T_values", "needs at least one value");
  require(tl.gamma_common_values.size() == tl.T_values.size(), "two_level", "gamma_common_values",
          "needs one value per T");
  require(tl.gamma_individual_values.size() == tl.T_values.size(), "two_level",
          "gamma_individual_values", "needs one value per T");
  for (double t : tl.T_values) require(t > 0.0, "two_level", "T_values", "values must be > 0");
  for (double g : tl.gamma_common_values) {
    require(g >= 0.0, "two_level", "gamma_common_values", "values must be >= 0");
  }
  for (double g : tl.gamma_individual_values) {
    require(g >= 0.0, "two_level", "gamma_individual_values", "values must be >= 0");
  }

  require(c.numerics.tolerance > 0.0, "numerics", "tolerance", "must be > 0");
  require(c.numerics.max_iterations >= 1, "numerics", "max_iterations", "must be >= 1");
  require(c.output.precision_digits >= 1 && c.output.precision_digits <= 17, "output",
          "precision_digits", "must lie in 1..17");
}

RunConfig parse_config(const std::string& text, const std::vector<Override>& overrides) {
  RunConfig config;
  const auto table = bindings(config);

  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("", "", "config syntax error: " + e.message() + " (line " +
                                  std::to_string(e.line()) + ")");
  }
  for (const auto& [section, child] : tree) {
    if (child.empty() && !child.data().empty()) {
      throw ConfigError("", "", "key '" + section + "' outside of any section");
    }
    for (const auto& [key, value] : child) {
      assign(*find_binding(table, section, key), value.data());
    }
  }
  for (const auto& [path, value] : overrides) {
    const auto dot = path.find('.');
    if (dot == std::string::npos) throw ConfigError("", path, "override must be section.key");
    assign(*find_binding(table, path.substr(0, dot), path.substr(dot + 1)), value);
  }
  validate(config);
  return config;
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<Override>& overrides) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("", "", "cannot read config file " + path.string());
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_config(buf.str(), overrides);
}

std::string render_config(const RunConfig& config) {
  RunConfig copy = config;
  std::string out;
  std::string current;
  for (const auto& b : bindings(copy)) {
    if (current != b.section) {
      if (!current.empty()) out += '\n';
      current = b.section;
      out += "[" + current + "]\n";
    }
    out += std::string(b.key) + " = " + render_value(b.target) + "\n";
  }
  return out;
}

}  // namespace proxres::io
