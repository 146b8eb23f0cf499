#include "proxres/doublewell/doublewell.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "proxres/error.hpp"

namespace proxres::doublewell {

using numerics::sqrt_decaying;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct HalfState {
  Complex psi;
  Complex dpsi;
};

// Barrier solution of definite parity evaluated at x = d/2, scaled by
// exp(-kappa d / 2) so that wide barriers stay finite.
HalfState barrier_state(Parity parity, Complex kappa, double d) {
  const Complex e = std::exp(-kappa * d);
  if (parity == Parity::Even) return {0.5 * (1.0 + e), 0.5 * kappa * (1.0 - e)};
  const Complex x = kappa * d;
  Complex psi;
  if (std::abs(x) < 1e-4) {
    psi = 0.5 * d * (1.0 - x / 2.0 + x * x / 6.0 - x * x * x / 24.0);
  } else {
    psi = (1.0 - e) / (2.0 * kappa);
  }
  return {psi, 0.5 * (1.0 + e)};
}

Complex sinc_of(Complex k) {
  if (std::abs(k) < 1e-4) return 1.0 - k * k / 6.0;
  return std::sin(k) / k;
}

double sinc_of(double k) {
  if (std::abs(k) < 1e-4) return 1.0 - k * k / 6.0;
  return std::sin(k) / k;
}

}  // namespace

std::string to_string(Parity parity) { return parity == Parity::Even ? "even" : "odd"; }

void DoubleWellSpec::validate() const {
  for (double v : {V0, V1, V2, Vb, d}) {
    if (!std::isfinite(v)) throw DomainError("double well: parameters must be finite");
  }
  if (!(V0 > 0.0)) throw DomainError("double well: V0 must be > 0");
  if (!(Vb > 0.0 && Vb <= V0)) throw DomainError("double well: need 0 < Vb <= V0");
  if (V1 > 0.0 || V2 > 0.0) throw DomainError("double well: V1 and V2 must be <= 0 (absorbing)");
  if (std::abs(V1) > 0.2 * V0 || std::abs(V2) > 0.2 * V0) {
    throw DomainError("double well: |V1| and |V2| must not exceed 0.2 V0");
  }
  if (!(d >= 0.0)) throw DomainError("double well: d must be >= 0");
}

Complex DoubleWellSpec::potential(double x) const {
  const double ax = std::abs(x);
  if (ax > 0.5 * d + 1.0) return {V0, V1};
  if (ax > 0.5 * d) return {0.0, V2};
  return {Vb, V1};
}

DoubleWellSpec DoubleWellSpec::with_absorption_scaled(double t) const {
  DoubleWellSpec s = *this;
  s.V1 *= t;
  s.V2 *= t;
  return s;
}

DoubleWellSpec DoubleWellSpec::with_distance(double distance) const {
  DoubleWellSpec s = *this;
  s.d = distance;
  return s;
}

void SolverOptions::validate() const {
  root.validate();
  if (ramp_steps < 4) throw DomainError("solver: ramp_steps must be >= 4");
  if (max_ramp_halvings < 0) throw DomainError("solver: max_ramp_halvings must be >= 0");
  if (hermitian_scan_points < 100) throw DomainError("solver: hermitian_scan_points must be >= 100");
}

Complex parity_residual(const DoubleWellSpec& spec, Parity parity, Complex E) {
  const Complex kappa_b = sqrt_decaying(Complex(spec.Vb, spec.V1) - E);
  const HalfState start = barrier_state(parity, kappa_b, spec.d);

  const Complex k2 = E - Complex(0.0, spec.V2);
  const Complex k = sqrt_decaying(k2);
  const Complex c = std::cos(k);
  const Complex s = sinc_of(k);
  const Complex psi = c * start.psi + s * start.dpsi;
  const Complex dpsi = -k2 * s * start.psi + c * start.dpsi;

  const Complex kappa_out = sqrt_decaying(Complex(spec.V0, spec.V1) - E);
  return dpsi + kappa_out * psi;
}

double hermitian_residual(const DoubleWellSpec& spec, Parity parity, double E) {
  double psi0 = 0.0;
  double dpsi0 = 0.0;
  if (E < spec.Vb) {
    const double kappa = std::sqrt(spec.Vb - E);
    const HalfState st = barrier_state(parity, Complex(kappa, 0.0), spec.d);
    psi0 = st.psi.real();
    dpsi0 = st.dpsi.real();
  } else {
    const double q = std::sqrt(E - spec.Vb);
    const double phase = 0.5 * q * spec.d;
    if (parity == Parity::Even) {
      psi0 = std::cos(phase);
      dpsi0 = -q * std::sin(phase);
    } else {
      psi0 = 0.5 * spec.d * sinc_of(phase);
      dpsi0 = std::cos(phase);
    }
  }
  const double k = std::sqrt(std::max(E, 0.0));
  const double c = std::cos(k);
  const double s = sinc_of(k);
  const double psi = c * psi0 + s * dpsi0;
  const double dpsi = -E * s * psi0 + c * dpsi0;
  return dpsi + std::sqrt(std::max(spec.V0 - E, 0.0)) * psi;
}

std::vector<double> hermitian_levels(const DoubleWellSpec& spec, Parity parity,
                                     const SolverOptions& options) {
  const DoubleWellSpec herm = spec.with_absorption_scaled(0.0);
  herm.validate();
  const int n = options.hermitian_scan_points;
  const auto f = [&](double E) { return hermitian_residual(herm, parity, E); };

  std::vector<double> levels;
  double e_prev = herm.V0 / n;
  double f_prev = f(e_prev);
  if (f_prev == 0.0) levels.push_back(e_prev);
  for (int i = 2; i < n; ++i) {
    const double e = herm.V0 * i / n;
    const double fe = f(e);
    if (fe == 0.0) {
      levels.push_back(e);
    } else if (f_prev != 0.0 && (f_prev < 0.0) != (fe < 0.0)) {
      levels.push_back(numerics::bracket_root(f, e_prev, e));
    }
    e_prev = e;
    f_prev = fe;
  }
  return levels;
}

namespace {

struct LevelWindow {
  double lower;
  double upper;
  double hermitian;
};

LevelWindow level_window(const DoubleWellSpec& spec, Parity parity, int level_index,
                         const SolverOptions& options) {
  if (level_index < 1) throw DomainError("level_index must be >= 1");
  const auto levels = hermitian_levels(spec, parity, options);
  if (static_cast<int>(levels.size()) < level_index) {
    std::ostringstream msg;
    msg << "no " << to_string(parity) << " level " << level_index << " below V0 (found "
        << levels.size() << ") at d = " << spec.d;
    throw NoSuchModeError(msg.str());
  }
  const std::size_t i = static_cast<std::size_t>(level_index - 1);
  const double lower = i == 0 ? 0.0 : 0.5 * (levels[i - 1] + levels[i]);
  const double upper = i + 1 < levels.size() ? 0.5 * (levels[i] + levels[i + 1]) : spec.V0;
  return {lower, upper, levels[i]};
}

bool inside(const LevelWindow& w, Complex E, const DoubleWellSpec& spec) {
  return E.real() > w.lower && E.real() < w.upper &&
         E.imag() <= 1e-12 * std::max(1.0, spec.V0);
}

QuasiBoundLevel make_level(Parity parity, int level_index, Complex E, bool hermitian) {
  QuasiBoundLevel level;
  level.parity = parity;
  level.level_index = level_index;
  level.energy_eps = E.real();
  level.width_gamma = hermitian ? 0.0 : -2.0 * E.imag();
  return level;
}

}  // namespace

QuasiBoundLevel solve_level(const DoubleWellSpec& spec, Parity parity, int level_index,
                            const SolverOptions& options) {
  spec.validate();
  options.validate();
  const LevelWindow window = level_window(spec, parity, level_index, options);
  if (spec.V1 == 0.0 && spec.V2 == 0.0) {
    return make_level(parity, level_index, window.hermitian, true);
  }

  Complex E = window.hermitian;
  double t = 0.0;
  double step = 1.0 / options.ramp_steps;
  int halvings = 0;
  while (t < 1.0) {
    const double t_next = std::min(1.0, t + step);
    const DoubleWellSpec stage = spec.with_absorption_scaled(t_next);
    const auto residual = [&](Complex z) { return parity_residual(stage, parity, z); };
    bool ok = false;
    Complex next;
    try {
      next = numerics::find_root_complex(residual, E, options.root);
      ok = inside(window, next, stage);
    } catch (const ConvergenceError&) {
      ok = false;
    }
    if (ok) {
      E = next;
      t = t_next;
      continue;
    }
    if (++halvings > options.max_ramp_halvings) {
      std::ostringstream msg;
      msg << "continuation of " << to_string(parity) << " level " << level_index
          << " failed; last good homotopy parameter t = " << t << " at d = " << spec.d;
      throw ConvergenceError(msg.str(), E, std::abs(parity_residual(spec, parity, E)));
    }
    step *= 0.5;
  }
  return make_level(parity, level_index, E, false);
}

std::optional<QuasiBoundLevel> refine_level(const DoubleWellSpec& spec, Parity parity,
                                            int level_index, Complex seed,
                                            const SolverOptions& options) {
  spec.validate();
  options.validate();
  const LevelWindow window = level_window(spec, parity, level_index, options);
  const auto residual = [&](Complex z) { return parity_residual(spec, parity, z); };
  try {
    const Complex E = numerics::find_root_complex(residual, seed, options.root);
    if (!inside(window, E, spec)) return std::nullopt;
    return make_level(parity, level_index, E, spec.V1 == 0.0 && spec.V2 == 0.0);
  } catch (const ConvergenceError&) {
    return std::nullopt;
  }
}

DoubletResult make_doublet(const QuasiBoundLevel& even, const QuasiBoundLevel& odd) {
  DoubletResult r;
  r.level_S = even;
  r.level_A = odd;
  r.delta_eps = odd.energy_eps - even.energy_eps;
  r.width_ratio = odd.width_gamma == 0.0 ? kInf : even.width_gamma / odd.width_gamma;
  return r;
}

DoubletResult doublet(const DoubleWellSpec& spec, int level_index, const SolverOptions& options) {
  return make_doublet(solve_level(spec, Parity::Even, level_index, options),
                      solve_level(spec, Parity::Odd, level_index, options));
}

std::size_t SweepResult::solved_count() const {
  return static_cast<std::size_t>(
      std::count_if(points.begin(), points.end(), [](const SweepPoint& p) { return p.result.has_value(); }));
}

double SweepResult::mean_level_energy() const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& p : points) {
    if (!p.result) continue;
    sum += 0.5 * (p.result->level_S.energy_eps + p.result->level_A.energy_eps);
    ++n;
  }
  if (n == 0) throw DomainError("sweep has no solved points");
  return sum / static_cast<double>(n);
}

SweepResult sweep_distance(const DoubleWellSpec& spec_template, const std::vector<double>& d_values,
                           int level_index, const SolverOptions& options) {
  options.validate();
  for (std::size_t i = 0; i < d_values.size(); ++i) {
    if (!(d_values[i] >= 0.0)) throw DomainError("sweep: d values must be >= 0");
    if (i > 0 && !(d_values[i] > d_values[i - 1])) {
      throw DomainError("sweep: d values must be strictly increasing");
    }
  }
  SweepResult out;
  std::optional<QuasiBoundLevel> previous[2];
  for (double d : d_values) {
    const DoubleWellSpec spec = spec_template.with_distance(d);
    SweepPoint point;
    point.d = d;
    try {
      QuasiBoundLevel levels[2];
      for (int k = 0; k < 2; ++k) {
        const Parity parity = k == 0 ? Parity::Even : Parity::Odd;
        std::optional<QuasiBoundLevel> warm;
        if (options.warm_start && previous[k]) {
          warm = refine_level(spec, parity, level_index, previous[k]->energy(), options);
        }
        levels[k] = warm ? *warm : solve_level(spec, parity, level_index, options);
      }
      point.result = make_doublet(levels[0], levels[1]);
      previous[0] = levels[0];
      previous[1] = levels[1];
    } catch (const Error& e) {
      point.error = e.what();
      previous[0].reset();
      previous[1].reset();
    }
    out.points.push_back(std::move(point));
  }
  return out;
}

double barrier_kappa(const DoubleWellSpec& spec, double eps) {
  return sqrt_decaying(Complex(spec.Vb - eps, spec.V1)).real();
}

SplittingFit fit_splitting(const std::vector<double>& d_values,
                           const std::vector<double>& delta_eps_values, double window_kappa) {
  if (d_values.size() != delta_eps_values.size()) {
    throw DomainError("fit_splitting: d and delta_eps lengths differ");
  }
  if (!(window_kappa > 0.0)) throw DomainError("fit_splitting: window kappa must be > 0");
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < d_values.size(); ++i) {
    if (window_kappa * d_values[i] < 1.0) continue;
    if (!(delta_eps_values[i] > 0.0)) {
      std::ostringstream msg;
      msg << "fit_splitting: non-positive splitting " << delta_eps_values[i] << " at d = "
          << d_values[i];
      throw DomainError(msg.str());
    }
    xs.push_back(d_values[i]);
    ys.push_back(std::log(delta_eps_values[i]));
  }
  if (xs.size() < 3) throw DomainError("fit_splitting: fewer than 3 points in the fit window");

  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw DomainError("fit_splitting: window points share one d");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;

  SplittingFit fit;
  fit.decay_constant = -slope;
  fit.prefactor = std::exp(intercept);
  fit.points_used = xs.size();
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    fit.residuals.push_back(r);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  const auto [lo, hi] = std::minmax_element(ys.begin(), ys.end());
  fit.log_range = *hi - *lo;
  return fit;
}

diskmode::ResonanceLine qm_to_em(Complex E_qm, double frequency_scale) {
  if (!(frequency_scale > 0.0)) throw DomainError("qm_to_em: frequency scale must be > 0");
  if (E_qm.imag() > 0.0) throw GainError("qm_to_em: Im(E) > 0 describes gain, not loss");
  if (!(E_qm.real() > 0.0)) throw DomainError("qm_to_em: Re(E) must be > 0");
  const Complex f = frequency_scale * sqrt_decaying(E_qm);
  diskmode::ResonanceLine line;
  line.frequency_GHz = f.real();
  line.width_GHz = -2.0 * f.imag();
  line.q_factor = line.width_GHz == 0.0 ? kInf : line.frequency_GHz / line.width_GHz;
  return line;
}

}  // namespace proxres::doublewell
