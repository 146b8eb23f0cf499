#pragma once

// Single dielectric disk between parallel conducting plates, treated as an
// infinite dielectric rod waveguide with the vertical wavenumber fixed by the
// plates (k_z = p*pi/l). Lengths in mm, frequencies in GHz.

#include <string>
#include <vector>

namespace proxres::diskmode {

/// Speed of light in mm * GHz (exact).
inline constexpr double kSpeedOfLight = 299.792458;

struct ResonatorGeometry {
  double diameter_mm = 12.65;
  double plate_gap_mm = 6.38;
  double eps_r = 16.0;  // exterior permittivity is 1

  double radius_mm() const { return 0.5 * diameter_mm; }
  /// Throws DomainError unless diameter > 0, gap > 0, eps_r > 1.
  void validate() const;
  /// Same geometry with every length multiplied by `s`.
  ResonatorGeometry scaled(double s) const;
};

enum class ModeFamily { TM, TE, HEM };

std::string to_string(ModeFamily family);
/// Parses "TM", "TE" or "HEM" (case-sensitive); throws DomainError otherwise.
ModeFamily parse_mode_family(const std::string& text);

struct ModeIndex {
  ModeFamily family = ModeFamily::TM;
  int m = 0;  // azimuthal
  int n = 1;  // radial
  int p = 1;  // vertical

  /// TM/TE require m == 0, HEM requires m >= 1; n >= 1 and p >= 1.
  void validate() const;
};

struct ResonanceLine {
  double frequency_GHz = 0.0;
  double width_GHz = 0.0;
  double q_factor = 0.0;  // f / width, +inf for a zero width
};

/// Vertical wavenumber p*pi/l in 1/mm.
double kz(const ResonatorGeometry& geometry, int p);

/// Parallel-plate cutoff c*p/(2l) in GHz; above it the exterior field propagates.
double cutoff_frequency(const ResonatorGeometry& geometry, int p);

/// Exterior decay constant sqrt(kz^2 - (2 pi f / c)^2) in 1/mm.
/// Throws DomainError at or above the cutoff.
double evanescent_kappa(const ResonatorGeometry& geometry, double f_GHz, int p);

/// Wall-matching residual in pole-free determinant form. Zeros in f are the
/// mode frequencies. m == 0 requires TM or TE, m >= 1 requires HEM.
/// Throws DomainError when f is outside the guided window (k_rho^2 <= 0 or at
/// or above cutoff).
double dispersion_residual(const ResonatorGeometry& geometry, ModeFamily family, int m, int p,
                           double f_GHz);

/// m = 0 log-derivative mismatch  w_in * J1(u)/(u J0(u)) + K1(w)/(w K0(w)),
/// with w_in = eps_r for TM and 1 for TE. Has poles at the zeros of J0.
double log_derivative_mismatch(const ResonatorGeometry& geometry, ModeFamily family, int p,
                               double f_GHz);

/// Lower edge of the guided window (interior radial wavenumber vanishes).
double guided_window_start(const ResonatorGeometry& geometry, int p);

/// All roots of dispersion_residual below cutoff, ascending, at most n_max.
std::vector<double> mode_frequencies(const ResonatorGeometry& geometry, ModeFamily family, int m,
                                     int p, int n_max);

/// Frequency of the n-th radial mode. Throws NoSuchModeError when fewer than
/// n roots lie below the cutoff.
double mode_frequency(const ResonatorGeometry& geometry, const ModeIndex& mode);

/// Q = f / gamma; throws DomainError for gamma <= 0.
double q_from_width(double f_GHz, double gamma_GHz);

/// Surface resistance sqrt(pi f mu0 / sigma) of a good conductor in ohm.
double surface_resistance(double f_GHz, double conductivity_S_per_m);

struct QBudget {
  double q_conductor = 0.0;
  double q_dielectric = 0.0;  // +inf for a lossless dielectric
  double q_total = 0.0;
  double electric_filling_factor = 0.0;  // share of electric energy inside the disk
};

/// Order-of-magnitude loss budget for an m = 0 mode: plate ohmic loss from
/// the closed-form rod fields, dielectric loss from the electric filling
/// factor, combined as 1/Q = 1/Qc + 1/Qd. Throws UnsupportedModeError for HEM.
QBudget q_budget(const ResonatorGeometry& geometry, const ModeIndex& mode,
                 double surface_resistance_ohm, double loss_tangent);

}  // namespace proxres::diskmode
