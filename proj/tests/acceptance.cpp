// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "proxres/cli/commands.hpp"
#include "proxres/diskmode/diskmode.hpp"
#include "proxres/doublewell/doublewell.hpp"
#include "proxres/effmodel/effmodel.hpp"
#include "proxres/io/config.hpp"
#include "proxres/numerics/bessel.hpp"
#include "proxres/numerics/complex.hpp"

using namespace proxres;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  std::vector<std::string> notes;
};

std::string fmt(double v, int digits = 6) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

int failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what(), {}};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < budget_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("CRITERION %2d %s  %s: %s [%.3f s, limit %g s%s]\n", id, pass ? "PASS" : "FAIL",
              title.c_str(), o.detail.c_str(), secs, budget_s, in_time ? "" : ", too slow");
  for (const auto& n : o.notes) std::printf("    note: %s\n", n.c_str());
  std::fflush(stdout);
}

const diskmode::ResonatorGeometry kDisk{12.65, 6.38, 16.0};

doublewell::DoubleWellSpec figure_spec(double Vb, double d = 0.0) {
  doublewell::DoubleWellSpec s;
  s.V0 = 900.0;
  s.V1 = -27.0;
  s.V2 = -0.0027;
  s.Vb = Vb;
  s.d = d;
  return s;
}

std::vector<double> default_d_grid() { return io::RunConfig{}.doublewell.d_values(); }

struct Peak {
  double ratio = 0.0;
  double d = 0.0;
  std::size_t index = 0;
  std::size_t solved = 0;
  std::size_t total = 0;
};

Peak peak_ratio(const doublewell::SweepResult& sweep) {
  Peak p;
  p.total = sweep.points.size();
  for (std::size_t i = 0; i < sweep.points.size(); ++i) {
    const auto& pt = sweep.points[i];
    if (!pt.result) continue;
    ++p.solved;
    if (pt.result->width_ratio > p.ratio) p = {pt.result->width_ratio, pt.d, i, p.solved, p.total};
  }
  return p;
}

doublewell::SweepResult figure_sweep(double Vb) {
  return doublewell::sweep_distance(figure_spec(Vb), default_d_grid(), 1);
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

// Least-squares line y = a + c x; returns max |residual|.
double line_fit_max_residual(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double c = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double a = (sy - c * sx) / n;
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(y[i] - a - c * x[i]));
  return worst;
}

effmodel::SiteNetwork random_network(std::mt19937& rng, bool complex_kappa) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> count(2, 6);
  effmodel::SiteNetwork net;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    net.site_energies.push_back(0.8 + 0.4 * u(rng));
    net.positions.push_back({1.5 * i + 0.3 * u(rng), 0.5 * u(rng)});
  }
  net.rule = {0.02 + 0.1 * u(rng), {2.0 + 6.0 * u(rng), complex_kappa ? 2.0 * u(rng) - 1.0 : 0.0}};
  net.channels.push_back(effmodel::common_channel(n, 0.05 * u(rng)));
  for (auto& c : effmodel::individual_channels(n, 0.01 * u(rng))) net.channels.push_back(c);
  effmodel::DecayChannel extra{effmodel::ChannelKind::Common, {}};
  for (int i = 0; i < n; ++i) extra.amplitudes.push_back({0.1 * u(rng), 0.1 * u(rng)});
  net.channels.push_back(extra);
  return net;
}

double sum_rule_error(const effmodel::SiteNetwork& net) {
  double widths = 0.0;
  for (const auto& m : effmodel::spectrum(net)) widths += m.width;
  const double trace = net.decay_matrix().trace().real();
  return std::abs(widths - trace) / std::max(trace, 1e-300);
}

// Second-order width gained by the mirror-symmetric dark partner through its
// coupling to the bright symmetric state of the shifted triangle.
double perturbative_excess(const effmodel::TriangleParams& p, double b) {
  const auto t = effmodel::triangle_network(p, b).couplings();
  const double t12 = t(0, 1).real();
  const double t13 = t(0, 2).real();
  const double v2 = 2.0 * (t12 - t13) * (t12 - t13) / 9.0;
  const double gap = (t12 + 8.0 * t13) / 3.0;
  const double g = p.gamma_common;
  return 3.0 * g * v2 / (gap * gap + 2.25 * g * g);
}

struct ModeTrack {
  std::vector<double> b, width, q, bright;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

int main() {
  criterion(1, "TM011 frequency", 1.0, [] {
    const double f = diskmode::mode_frequency(kDisk, {diskmode::ModeFamily::TM, 0, 1, 1});
    const double dev = std::abs(f - 9.45) / 9.45;
    return Outcome{dev <= 0.03, "f = " + fmt(f) + " GHz, deviation from 9.45 GHz " + fmt(100 * dev, 3) + "% (<= 3%)", {}};
  });

  criterion(2, "evanescent constant", 0.1, [] {
    const double f = diskmode::mode_frequency(kDisk, {diskmode::ModeFamily::TM, 0, 1, 1});
    const double k = diskmode::evanescent_kappa(kDisk, f, 1);
    return Outcome{k >= 0.43 && k <= 0.47, "kappa_r = " + fmt(k) + " /mm (in [0.43, 0.47])", {}};
  });

  criterion(3, "HEM(3,1,1) frequency", 5.0, [] {
    const double f = diskmode::mode_frequency(kDisk, {diskmode::ModeFamily::HEM, 3, 1, 1});
    const double dev = std::abs(f - 10.8) / 10.8;
    return Outcome{dev <= 0.05, "f = " + fmt(f) + " GHz, deviation from 10.8 GHz " + fmt(100 * dev, 3) + "% (<= 5%)", {}};
  });

  criterion(4, "strong-barrier ratio peak", 30.0, [] {
    const auto p = peak_ratio(figure_sweep(900.0));
    const bool ok = p.solved == p.total && p.ratio >= 2.0 && p.ratio <= 5.0;
    return Outcome{ok, "max gamma_S/gamma_A = " + fmt(p.ratio) + " at d = " + fmt(p.d) + " (in [2, 5]), solved " +
                           std::to_string(p.solved) + "/" + std::to_string(p.total), {}};
  });

  criterion(5, "weak-barrier ratio peak and ordering", 60.0, [] {
    const auto a = peak_ratio(figure_sweep(900.0));
    const auto b = peak_ratio(figure_sweep(225.0));
    const auto c = peak_ratio(figure_sweep(100.0));
    const bool interior = c.index > 0 && c.index + 1 < c.total;
    const bool ok = c.ratio >= 30.0 && c.ratio <= 70.0 && interior && a.ratio < b.ratio && b.ratio < c.ratio &&
                    a.solved == a.total && b.solved == b.total && c.solved == c.total;
    return Outcome{ok, "peaks Vb=900 " + fmt(a.ratio) + " < Vb=225 " + fmt(b.ratio) + " < Vb=100 " + fmt(c.ratio) +
                           " (in [30, 70]) at interior d = " + fmt(c.d) + (interior ? "" : " (NOT interior)"),
                   {}};
  });

  criterion(6, "exponential splitting fit", 60.0, [] {
    const auto spec = figure_spec(100.0);
    const auto sweep = doublewell::sweep_distance(spec, default_d_grid(), 1);
    std::vector<double> d, de;
    for (const auto& p : sweep.points) {
      if (!p.result) continue;
      d.push_back(p.d);
      de.push_back(p.result->delta_eps);
    }
    const double kappa_bar = doublewell::barrier_kappa(spec, sweep.mean_level_energy());
    const auto fit = doublewell::fit_splitting(d, de, kappa_bar);
    const double dev = std::abs(fit.decay_constant - kappa_bar) / kappa_bar;
    const double rms_share = fit.rms_residual / fit.log_range;
    return Outcome{dev <= 0.10 && rms_share <= 0.15,
                   "decay " + fmt(fit.decay_constant) + " vs kappa_bar " + fmt(kappa_bar) + " (" + fmt(100 * dev, 3) +
                       "% <= 10%), rms/log-range " + fmt(100 * rms_share, 3) + "% (<= 15%), " +
                       std::to_string(fit.points_used) + " points",
                   {}};
  });

  criterion(7, "finite-difference oracle equivalence", 300.0, [] {
    std::vector<doublewell::DoubleWellSpec> specs;
    for (double Vb : {900.0, 225.0, 100.0}) {
      for (double d : {0.1, 0.4}) specs.push_back(figure_spec(Vb, d));
    }
    std::mt19937 rng(97);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 2; ++i) {
      doublewell::DoubleWellSpec s;
      s.V0 = 400.0 + 800.0 * u(rng);
      s.Vb = s.V0 * (0.15 + 0.8 * u(rng));
      s.V1 = -0.04 * s.V0 * u(rng);
      s.V2 = -0.3 * u(rng);
      s.d = 0.05 + 0.4 * u(rng);
      specs.push_back(s);
    }
    double worst = 0.0;
    for (const auto& s : specs) {
      const auto fd = doublewell::fd_oracle(s, 2);
      const auto r = doublewell::doublet(s, 1);
      worst = std::max({worst, rel(r.level_S.energy(), fd.eigenvalues[0]), rel(r.level_A.energy(), fd.eigenvalues[1])});
    }
    return Outcome{worst <= 1e-4, std::to_string(specs.size()) + " parameter sets, worst relative difference " + fmt(worst, 3) + " (<= 1e-4)", {}};
  });

  criterion(8, "two-level closed form", 0.1, [] {
    double worst = 0.0;
    for (const auto& [T, gc, gd] : std::vector<std::array<double, 3>>{{1.0, 0.2, 0.0}, {1.0, 0.2, 0.05}, {0.3, 0.01, 0.002}, {2.5, 1.0, 0.3}}) {
      const auto modes = effmodel::spectrum(effmodel::two_site_network(1.0, T, gc, gd));
      const auto& s = modes[0].irrep.name == "even" ? modes[0] : modes[1];
      const auto& a = modes[0].irrep.name == "even" ? modes[1] : modes[0];
      if (s.irrep.name != "even" || a.irrep.name != "odd") return Outcome{false, "parity labels missing", {}};
      worst = std::max({worst, std::abs(s.width - (2.0 * gc + gd)), std::abs(a.width - gd),
                        std::abs(a.eigenvalue.real() - s.eigenvalue.real() - 2.0 * T)});
    }
    return Outcome{worst <= 1e-12, "widths (2gc+gd, gd) and splitting 2T, worst deviation " + fmt(worst, 3) + " (<= 1e-12)", {}};
  });

  criterion(9, "three-site dark states and sum rule", 10.0, [] {
    effmodel::TriangleParams p;
    std::vector<double> w;
    for (const auto& m : effmodel::spectrum(effmodel::triangle_network(p, 0.0))) w.push_back(m.width);
    std::sort(w.begin(), w.end());
    const double target_err = std::max({std::abs(w[0] - p.gamma_individual), std::abs(w[1] - p.gamma_individual),
                                        std::abs(w[2] - 3.0 * p.gamma_common - p.gamma_individual)});
    std::mt19937 rng(5);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) worst = std::max(worst, sum_rule_error(random_network(rng, i % 2 == 1)));
    return Outcome{target_err <= 1e-10 && worst <= 1e-10,
                   "b = 0 widths off by " + fmt(target_err, 3) + ", 100-network sum-rule error " + fmt(worst, 3) + " (both <= 1e-10)", {}};
  });

  criterion(10, "symmetry breaking of the sharp mode", 60.0, [] {
    const io::RunConfig config;
    effmodel::TriangleParams p;
    p.side_s = config.effmodel.side_s;
    p.T0 = config.effmodel.T0;
    p.kappa = {config.effmodel.kappa_re, config.effmodel.kappa_im};
    p.gamma_common = config.effmodel.gamma_common;
    p.gamma_individual = config.effmodel.gamma_individual;
    const double gd = p.gamma_individual;
    const auto rows = effmodel::symmetry_break_sweep(p, config.effmodel.b_values());

    ModeTrack sharp, mid;
    for (const auto& r : rows) {
      if (!r.row) return Outcome{false, "sweep gap at b = " + fmt(r.b) + ": " + r.error, {}};
      sharp.b.push_back(r.b);
      sharp.width.push_back(r.row->sharp_width);
      sharp.q.push_back(r.row->sharp_Q);
      sharp.bright.push_back(r.row->bright_width);
      mid.b.push_back(r.b);
      mid.width.push_back(r.row->mid_width);
      mid.q.push_back(r.row->mid_Q);
      mid.bright.push_back(r.row->bright_width);
    }

    struct Checks {
      bool decreasing = true;
      double b2_err = 1e300;
      double linear_share = 1e300;
      double bright_change = 1e300;
      std::size_t window = 0;
    };
    // Small-b excess width against the perturbative oracle, ln Q linearity and
    // bright-width stability inside the window 3 gd < width < 0.3 bright.
    const auto evaluate = [&](const ModeTrack& t, const std::function<double(double)>& excess_at,
                              const std::function<double(double)>& oracle) {
      Checks c;
      for (std::size_t i = 1; i < t.q.size(); ++i) c.decreasing = c.decreasing && t.q[i] < t.q[i - 1];
      c.b2_err = 0.0;
      for (double b = 1e-4; b <= 1e-3 * (1 + 1e-9); b *= std::pow(10.0, 0.25)) {
        const double got = excess_at(b);
        const double want = oracle(b);
        c.b2_err = std::max(c.b2_err, want > 0 && got > 0 ? std::abs(got - want) / want : 1e300);
      }
      std::vector<double> xb, lnq, bright;
      for (std::size_t i = 0; i < t.b.size(); ++i) {
        if (t.width[i] > 3.0 * gd && t.width[i] < 0.3 * t.bright[i]) {
          xb.push_back(t.b[i]);
          lnq.push_back(std::log(t.q[i]));
          bright.push_back(t.bright[i]);
        }
      }
      c.window = xb.size();
      if (xb.size() >= 3) {
        const double range = *std::max_element(lnq.begin(), lnq.end()) - *std::min_element(lnq.begin(), lnq.end());
        c.linear_share = line_fit_max_residual(xb, lnq) / range;
        c.bright_change = (*std::max_element(bright.begin(), bright.end()) - *std::min_element(bright.begin(), bright.end())) /
                          *std::max_element(bright.begin(), bright.end());
      }
      return c;
    };
    const auto pass_of = [](const Checks& c) {
      return c.decreasing && c.b2_err <= 0.05 && c.linear_share <= 0.10 && c.bright_change < 0.05;
    };
    const auto describe = [](const Checks& c) {
      return std::string("Q strictly decreasing ") + (c.decreasing ? "yes" : "no") + ", b^2 oracle error " +
             (c.b2_err > 1e299 ? std::string("n/a (no excess width)") : fmt(100 * c.b2_err, 3) + "%") +
             ", window points " + std::to_string(c.window) + ", ln Q line residual " +
             (c.linear_share > 1e299 ? std::string("n/a") : fmt(100 * c.linear_share, 3) + "%") + ", bright change " +
             (c.bright_change > 1e299 ? std::string("n/a") : fmt(100 * c.bright_change, 3) + "%");
    };

    const auto mode_width = [&](double b, bool want_sharp) {
      const auto modes = effmodel::spectrum(effmodel::triangle_network(p, b));
      const std::size_t s = effmodel::sharpest_mode(modes);
      if (want_sharp) return modes[s].width;
      std::size_t bright = 0;
      for (std::size_t i = 1; i < modes.size(); ++i) {
        if (modes[i].width > modes[bright].width) bright = i;
      }
      std::size_t m = 0;
      while (m == s || m == bright) ++m;
      return modes[m].width;
    };
    const Checks sharp_checks = evaluate(
        sharp, [&](double b) { return mode_width(b, true) - gd; }, [](double) { return 0.0; });
    const Checks mid_checks = evaluate(
        mid, [&](double b) { return mode_width(b, false) - gd; }, [&](double b) { return perturbative_excess(p, b); });

    Outcome o;
    o.pass = pass_of(sharp_checks);
    o.detail = "sharpest mode: " + describe(sharp_checks);
    o.notes.push_back("sharpest-mode Q from " + fmt(sharp.q.front()) + " to " + fmt(sharp.q.back()) +
                      "; it is the mirror-odd combination, which stays dark for every b along the bisector");
    o.notes.push_back("mirror-symmetric partner (mid_width): " + describe(mid_checks) + ", Q from " +
                      fmt(mid.q.front()) + " to " + fmt(mid.q.back()));
    return o;
  });

  criterion(11, "invariant suites", 120.0, [] {
    std::vector<std::string> broken;
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);

    for (int i = 0; i < 10000; ++i) {
      const Complex z{100.0 * u(rng), 100.0 * u(rng)};
      const Complex s = numerics::sqrt_decaying(z);
      if (s.real() < 0.0 || std::abs(s * s - z) > 1e-12 * std::abs(z)) {
        broken.push_back("branch convention");
        break;
      }
    }

    double bessel_err = 0.0;
    for (double x = 0.15; x < 40.0; x *= 1.37) {
      for (int n = 1; n <= 6; ++n) {
        const double jr = numerics::bessel_j(n - 1, x) + numerics::bessel_j(n + 1, x);
        bessel_err = std::max(bessel_err, std::abs(jr - 2.0 * n / x * numerics::bessel_j(n, x)) /
                                              std::max(1.0, std::abs(jr)));
      }
      if (x < 30.0) {
        for (int n = 0; n <= 4; ++n) {
          const double w = numerics::bessel_i(n, x) * numerics::bessel_k_prime(n, x) -
                           numerics::bessel_i_prime(n, x) * numerics::bessel_k(n, x);
          bessel_err = std::max(bessel_err, std::abs(w * x + 1.0));
        }
      }
    }
    if (bessel_err > 1e-10) broken.push_back("Bessel identities (" + fmt(bessel_err, 3) + ")");

    std::mt19937 net_rng(8);
    double sum_err = 0.0;
    double min_width = 0.0;
    for (int i = 0; i < 100; ++i) {
      const auto net = random_network(net_rng, i % 2 == 1);
      sum_err = std::max(sum_err, sum_rule_error(net));
      if (i % 2 == 0) {
        for (const auto& m : effmodel::spectrum(net)) min_width = std::min(min_width, m.width);
      }
    }
    if (sum_err > 1e-10) broken.push_back("trace sum rule (" + fmt(sum_err, 3) + ")");
    if (min_width < -1e-12) broken.push_back("width nonnegativity (" + fmt(min_width, 3) + ")");

    effmodel::TriangleParams tp;
    int dark = 0;
    for (const auto& m : effmodel::spectrum(effmodel::triangle_network(tp, 0.0))) {
      if (m.width <= tp.gamma_individual + 1e-10) ++dark;
    }
    if (dark != 2) broken.push_back("dark-state count");
    for (double scale : {0.1, 0.5, 2.0, 10.0}) {
      auto scaled = tp;
      scaled.T0 *= scale;
      const auto modes = effmodel::spectrum(effmodel::triangle_network(scaled, 0.0));
      if (modes[effmodel::sharpest_mode(modes)].irrep.name != "E") broken.push_back("argmax stability");
    }
    {
      auto herm = effmodel::two_site_network(1.0, 0.7, 0.0, 0.0);
      for (const auto& m : effmodel::spectrum(herm)) {
        if (std::abs(m.eigenvalue.imag()) > 1e-12) broken.push_back("Hermitian limit");
      }
    }

    for (double Vb : {900.0, 225.0, 100.0}) {
      const auto spec = figure_spec(Vb, 0.2);
      for (auto parity : {doublewell::Parity::Even, doublewell::Parity::Odd}) {
        const auto levels = doublewell::hermitian_levels(spec, parity);
        if (!std::is_sorted(levels.begin(), levels.end())) broken.push_back("Hermitian level ordering");
        const auto l1 = doublewell::solve_level(spec, parity, 1);
        const auto l2 = doublewell::solve_level(spec, parity, 2);
        if (!(l1.energy_eps < l2.energy_eps)) broken.push_back("level ordering");
        if (l1.width_gamma < 0.0 || l2.width_gamma < 0.0) broken.push_back("absorbing sign");
      }
      for (const auto& pt : figure_sweep(Vb).points) {
        if (!pt.result) {
          broken.push_back("sweep gap");
          continue;
        }
        const auto& r = *pt.result;
        if (!(r.level_S.energy_eps < r.level_A.energy_eps)) broken.push_back("eps_S < eps_A at d = " + fmt(pt.d));
        if (r.level_S.width_gamma < 0.0 || r.level_A.width_gamma < 0.0) broken.push_back("absorbing sign");
      }
    }

    Outcome o;
    o.pass = broken.empty();
    o.detail = broken.empty() ? "branch, Bessel, sum rule, nonnegativity, dark count, argmax, Hermitian limit, "
                                "absorbing sign, level ordering, eps_S < eps_A all hold"
                              : "broken: ";
    std::set<std::string> unique(broken.begin(), broken.end());
    for (const auto& b : unique) o.detail += b + "; ";
    return o;
  });

  criterion(12, "CSV determinism and headers", 60.0, [] {
    const fs::path root = fs::temp_directory_path() / ("proxres_accept_" + std::to_string(::getpid()));
    fs::remove_all(root);
    const std::vector<std::pair<std::string, std::string>> runs{{"disk-modes", "disk_modes.csv"},
                                                                {"doublet-sweep", "doublet_sweep.csv"},
                                                                {"three-disk", "symmetry_break.csv"},
                                                                {"two-level", "two_level.csv"}};
    const std::vector<std::string> headers{cli::kDiskModesColumns, cli::kDoubletColumns, cli::kSymmetryBreakColumns,
                                           cli::kTwoLevelColumns};
    std::ostringstream sink;
    for (const char* tag : {"a", "b"}) {
      for (const auto& [cmd, file] : runs) {
        const int code = cli::run_cli({cmd, "--out", (root / tag).string(), "--doublewell.Vb=100"}, sink, sink);
        if (code != 0) return Outcome{false, cmd + " exited with " + std::to_string(code), {}};
      }
    }
    bool same = true;
    bool golden = true;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const std::string a = slurp(root / "a" / runs[i].second);
      same = same && a == slurp(root / "b" / runs[i].second);
      golden = golden && a.substr(0, a.find('\n')) == headers[i];
    }
    same = same && slurp(root / "a" / "splitting_fit.txt") == slurp(root / "b" / "splitting_fit.txt");
    fs::remove_all(root);
    return Outcome{same && golden, std::string("byte-identical across two runs: ") + (same ? "yes" : "no") +
                                       ", golden headers: " + (golden ? "yes" : "no"),
                   {}};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
