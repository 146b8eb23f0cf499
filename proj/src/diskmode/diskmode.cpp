#include "proxres/diskmode/diskmode.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "proxres/error.hpp"
#include "proxres/numerics/bessel.hpp"
#include "proxres/numerics/roots.hpp"

namespace proxres::diskmode {
namespace {

using numerics::bessel_j;
using numerics::bessel_j_prime;
using numerics::bessel_k;
using numerics::bessel_k_prime;

constexpr double kMu0 = 4e-7 * std::numbers::pi;  // H/m
constexpr int kScanPoints = 2001;
constexpr double kScanFloor_GHz = 0.05;

double angular_wavenumber(double f_GHz) { return 2.0 * std::numbers::pi * f_GHz / kSpeedOfLight; }

// Normalized interior (u) and exterior (w) radial arguments at the wall.
struct WallArguments {
  double u;
  double w;
  double k0;
  double kz;
};

WallArguments wall_arguments(const ResonatorGeometry& g, int p, double f_GHz) {
  const double k0 = angular_wavenumber(f_GHz);
  const double kzv = kz(g, p);
  const double inner = g.eps_r * k0 * k0 - kzv * kzv;
  if (!(inner > 0.0)) {
    throw DomainError("dispersion_residual: no radially oscillating interior field at f = " +
                      std::to_string(f_GHz) + " GHz");
  }
  const double a = g.radius_mm();
  return {a * std::sqrt(inner), a * evanescent_kappa(g, f_GHz, p), k0, kzv};
}

void check_family(ModeFamily family, int m) {
  if (m < 0) throw DomainError("azimuthal index must be >= 0");
  if ((family == ModeFamily::HEM) != (m >= 1)) {
    throw DomainError("mode family " + to_string(family) + " incompatible with m = " +
                      std::to_string(m));
  }
}

}  // namespace

void ResonatorGeometry::validate() const {
  if (!(diameter_mm > 0.0)) throw DomainError("geometry: diameter must be > 0");
  if (!(plate_gap_mm > 0.0)) throw DomainError("geometry: plate gap must be > 0");
  if (!(eps_r > 1.0)) throw DomainError("geometry: eps_r must be > 1");
}

ResonatorGeometry ResonatorGeometry::scaled(double s) const {
  return {diameter_mm * s, plate_gap_mm * s, eps_r};
}

std::string to_string(ModeFamily family) {
  switch (family) {
    case ModeFamily::TM:
      return "TM";
    case ModeFamily::TE:
      return "TE";
    case ModeFamily::HEM:
      return "HEM";
  }
  return "?";
}

ModeFamily parse_mode_family(const std::string& text) {
  if (text == "TM") return ModeFamily::TM;
  if (text == "TE") return ModeFamily::TE;
  if (text == "HEM") return ModeFamily::HEM;
  throw DomainError("unknown mode family '" + text + "' (expected TM, TE or HEM)");
}

void ModeIndex::validate() const {
  check_family(family, m);
  if (n < 1) throw DomainError("radial index n must be >= 1");
  if (p < 1) throw DomainError("vertical index p must be >= 1");
}

double kz(const ResonatorGeometry& geometry, int p) {
  if (p < 1) throw DomainError("vertical index p must be >= 1");
  return p * std::numbers::pi / geometry.plate_gap_mm;
}

double cutoff_frequency(const ResonatorGeometry& geometry, int p) {
  if (p < 1) throw DomainError("vertical index p must be >= 1");
  return kSpeedOfLight * p / (2.0 * geometry.plate_gap_mm);
}

double evanescent_kappa(const ResonatorGeometry& geometry, double f_GHz, int p) {
  const double kzv = kz(geometry, p);
  const double k0 = angular_wavenumber(f_GHz);
  const double arg = kzv * kzv - k0 * k0;
  if (!(arg > 1e-12 * kzv * kzv)) {
    throw DomainError("evanescent_kappa: f = " + std::to_string(f_GHz) +
                      " GHz is at or above the plate cutoff " +
                      std::to_string(cutoff_frequency(geometry, p)) + " GHz");
  }
  return std::sqrt(arg);
}

double guided_window_start(const ResonatorGeometry& geometry, int p) {
  return cutoff_frequency(geometry, p) / std::sqrt(geometry.eps_r);
}

double dispersion_residual(const ResonatorGeometry& geometry, ModeFamily family, int m, int p,
                           double f_GHz) {
  check_family(family, m);
  const auto [u, w, k0, kzv] = wall_arguments(geometry, p, f_GHz);
  const double k_ratio = bessel_k_prime(m, w) / bessel_k(m, w);  // K'_m/K_m, never singular
  if (m == 0) {
    // (w_in J1(u) w K0(w) + u J0(u) K1(w)) / K0(w)
    const double weight = family == ModeFamily::TM ? geometry.eps_r : 1.0;
    return weight * w * bessel_j(1, u) - u * bessel_j(0, u) * k_ratio;
  }
  // Coupled TE/TM matching for a dielectric rod at fixed kz, multiplied
  // through by (u w J_m K_m)^2 u^2 w^2 / K_m^2 to remove every pole.
  const double a = geometry.radius_mm();
  const double jm = bessel_j(m, u);
  const double inner = bessel_j_prime(m, u) * w;
  const double outer = k_ratio * u * jm;
  const double eps = geometry.eps_r;
  const double coupling = static_cast<double>(m) * m * kzv * kzv * std::pow(a, 4) * k0 * k0 *
                          (eps - 1.0) * (eps - 1.0) * jm * jm;
  return u * u * w * w * (inner + outer) * (eps * inner + outer) - coupling;
}

double log_derivative_mismatch(const ResonatorGeometry& geometry, ModeFamily family, int p,
                               double f_GHz) {
  check_family(family, 0);
  const auto [u, w, k0, kzv] = wall_arguments(geometry, p, f_GHz);
  const double weight = family == ModeFamily::TM ? geometry.eps_r : 1.0;
  return weight * bessel_j(1, u) / (u * bessel_j(0, u)) + bessel_k(1, w) / (w * bessel_k(0, w));
}

std::vector<double> mode_frequencies(const ResonatorGeometry& geometry, ModeFamily family, int m,
                                     int p, int n_max) {
  geometry.validate();
  check_family(family, m);
  const double hi = cutoff_frequency(geometry, p) * (1.0 - 1e-9);
  const double lo = std::max(kScanFloor_GHz, guided_window_start(geometry, p) * (1.0 + 1e-9));
  std::vector<double> roots;
  if (!(hi > lo)) return roots;

  auto residual = [&](double f) { return dispersion_residual(geometry, family, m, p, f); };
  const double step = (hi - lo) / (kScanPoints - 1);
  double f_prev = lo;
  double r_prev = residual(lo);
  for (int i = 1; i < kScanPoints && static_cast<int>(roots.size()) < n_max; ++i) {
    const double f = i == kScanPoints - 1 ? hi : lo + i * step;
    const double r = residual(f);
    if (r_prev == 0.0) {
      roots.push_back(f_prev);
    } else if ((r_prev < 0.0) != (r < 0.0) && r != 0.0) {
      roots.push_back(numerics::bracket_root(residual, f_prev, f, 1e-15));
    }
    f_prev = f;
    r_prev = r;
  }
  return roots;
}

double mode_frequency(const ResonatorGeometry& geometry, const ModeIndex& mode) {
  mode.validate();
  const auto roots = mode_frequencies(geometry, mode.family, mode.m, mode.p, mode.n);
  if (static_cast<int>(roots.size()) < mode.n) {
    throw NoSuchModeError("no " + to_string(mode.family) + "(" + std::to_string(mode.m) + "," +
                          std::to_string(mode.n) + "," + std::to_string(mode.p) +
                          ") mode below the plate cutoff (" + std::to_string(roots.size()) +
                          " found)");
  }
  return roots[static_cast<size_t>(mode.n - 1)];
}

double q_from_width(double f_GHz, double gamma_GHz) {
  if (!(gamma_GHz > 0.0)) throw DomainError("q_from_width: width must be > 0");
  return f_GHz / gamma_GHz;
}

double surface_resistance(double f_GHz, double conductivity_S_per_m) {
  if (!(f_GHz > 0.0) || !(conductivity_S_per_m > 0.0)) {
    throw DomainError("surface_resistance: frequency and conductivity must be > 0");
  }
  return std::sqrt(std::numbers::pi * f_GHz * 1e9 * kMu0 / conductivity_S_per_m);
}

QBudget q_budget(const ResonatorGeometry& geometry, const ModeIndex& mode,
                 double surface_resistance_ohm, double loss_tangent) {
  mode.validate();
  if (mode.family == ModeFamily::HEM) {
    throw UnsupportedModeError("q_budget: hybrid modes have no closed-form field profile here");
  }
  if (!(surface_resistance_ohm > 0.0)) throw DomainError("q_budget: surface resistance must be > 0");
  if (!(loss_tangent >= 0.0)) throw DomainError("q_budget: loss tangent must be >= 0");

  const double f = mode_frequency(geometry, mode);
  const auto [u, w, k0, kzv] = wall_arguments(geometry, mode.p, f);
  const double a = geometry.radius_mm();
  const double kr = u / a;
  const double kappa = w / a;

  const double j0 = bessel_j(0, u), j1 = bessel_j(1, u), j2 = bessel_j(2, u);
  const double k0w = bessel_k(0, w), k1w = bessel_k(1, w), k2w = bessel_k(2, w);
  // Radial integrals of squared profiles, in units of a^2/2 (Lommel forms).
  // The exterior amplitude C = J0(u)/K0(w) matches the longitudinal field.
  const double c2 = (j0 / k0w) * (j0 / k0w);
  const double in_j0 = j0 * j0 + j1 * j1;
  const double in_j1 = j1 * j1 - j0 * j2;
  const double out_k0 = c2 * (k1w * k1w - k0w * k0w);
  const double out_k1 = c2 * (k0w * k2w - k1w * k1w);
  const double kz_kr2 = (kzv / kr) * (kzv / kr);
  const double kz_ka2 = (kzv / kappa) * (kzv / kappa);

  const double omega = 2.0 * std::numbers::pi * f * 1e9;
  const double gap_m = geometry.plate_gap_mm * 1e-3;
  const double q_plates = omega * kMu0 * gap_m / (4.0 * surface_resistance_ohm);

  QBudget out;
  if (mode.family == ModeFamily::TM) {
    // H is purely transverse, so stored energy and plate loss share one profile.
    out.q_conductor = q_plates;
    const double inside = geometry.eps_r * (in_j0 + kz_kr2 * in_j1);
    const double outside = out_k0 + kz_ka2 * out_k1;
    out.electric_filling_factor = inside / (inside + outside);
  } else {
    // TE: H_z vanishes on the plates but stores energy.
    const double hz = in_j0 + out_k0;
    const double ht = kz_kr2 * in_j1 + kz_ka2 * out_k1;
    out.q_conductor = q_plates * (1.0 + hz / ht);
    const double inside = geometry.eps_r * in_j1 / (kr * kr);
    const double outside = out_k1 / (kappa * kappa);
    out.electric_filling_factor = inside / (inside + outside);
  }
  out.q_dielectric = loss_tangent > 0.0 ? 1.0 / (loss_tangent * out.electric_filling_factor)
                                        : std::numeric_limits<double>::infinity();
  out.q_total = loss_tangent > 0.0
                    ? 1.0 / (1.0 / out.q_conductor + 1.0 / out.q_dielectric)
                    : out.q_conductor;
  return out;
}

}  // namespace proxres::diskmode
