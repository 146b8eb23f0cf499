#pragma once

// One-dimensional complex-potential double well in units hbar = 2m = 1 with
// the well width as the length unit:
//
//   -psi'' + V(x) psi = E psi,
//   V = V0 + i V1        for |x| > d/2 + 1
//     = i V2             for d/2 < |x| < d/2 + 1
//     = Vb + i V1        for |x| < d/2
//
// Quasi-bound levels E = eps - i gamma/2 are found from a transfer-matrix
// matching residual, with a finite-difference solver as an independent check.

#include <optional>
#include <string>
#include <vector>

#include "proxres/diskmode/diskmode.hpp"
#include "proxres/numerics/complex.hpp"
#include "proxres/numerics/roots.hpp"

namespace proxres::doublewell {

using proxres::Complex;

enum class Parity { Even, Odd };

std::string to_string(Parity parity);

struct DoubleWellSpec {
  double V0 = 900.0;
  double V1 = -27.0;
  double V2 = -0.0027;
  double Vb = 900.0;
  double d = 0.0;

  /// V0 > 0, 0 < Vb <= V0, |V1|, |V2| <= 0.2 V0, V1, V2 <= 0, d >= 0, all finite.
  void validate() const;
  Complex potential(double x) const;
  /// Copy with the imaginary parts scaled by t (t = 0 is the Hermitian problem).
  DoubleWellSpec with_absorption_scaled(double t) const;
  DoubleWellSpec with_distance(double distance) const;
};

struct QuasiBoundLevel {
  Parity parity = Parity::Even;
  double energy_eps = 0.0;
  double width_gamma = 0.0;
  int level_index = 1;

  Complex energy() const { return {energy_eps, -0.5 * width_gamma}; }
};

struct DoubletResult {
  QuasiBoundLevel level_S;
  QuasiBoundLevel level_A;
  double delta_eps = 0.0;    // eps_A - eps_S
  double width_ratio = 0.0;  // gamma_S / gamma_A, +inf when gamma_A == 0
};

struct SolverOptions {
  numerics::RootFindConfig root{1e-11, 100, 1e-7};
  int ramp_steps = 4;       // homotopy steps from the Hermitian problem
  int max_ramp_halvings = 6;
  int hermitian_scan_points = 4000;
  bool warm_start = true;   // sweeps: seed each d from the previous one

  void validate() const;
};

/// Matching residual for parity P; zeros in E are the parity-P levels.
/// Built from the barrier solution of definite parity, the exact transfer
/// matrix across the well and the decaying exterior solution.
Complex parity_residual(const DoubleWellSpec& spec, Parity parity, Complex E);

/// Real-valued residual of the Hermitian problem (V1 = V2 = 0), rescaled so it
/// stays finite for large barriers. Same zeros as parity_residual there.
double hermitian_residual(const DoubleWellSpec& spec, Parity parity, double E);

/// Parity-P levels of the Hermitian problem in (0, V0), ascending.
std::vector<double> hermitian_levels(const DoubleWellSpec& spec, Parity parity,
                                     const SolverOptions& options = {});

/// level_index-th (from 1) parity-P quasi-bound level, by continuation from the
/// Hermitian level. Throws NoSuchModeError if the Hermitian level does not
/// exist and ConvergenceError if the continuation fails.
QuasiBoundLevel solve_level(const DoubleWellSpec& spec, Parity parity, int level_index,
                            const SolverOptions& options = {});

/// Newton refinement from `seed` at the full absorption, accepted only when
/// the result stays closest to the requested Hermitian level. Returns nullopt
/// otherwise.
std::optional<QuasiBoundLevel> refine_level(const DoubleWellSpec& spec, Parity parity,
                                            int level_index, Complex seed,
                                            const SolverOptions& options = {});

DoubletResult make_doublet(const QuasiBoundLevel& even, const QuasiBoundLevel& odd);
DoubletResult doublet(const DoubleWellSpec& spec, int level_index,
                      const SolverOptions& options = {});

struct SweepPoint {
  double d = 0.0;
  std::optional<DoubletResult> result;  // empty for a failed point
  std::string error;
};

struct SweepResult {
  std::vector<SweepPoint> points;

  std::size_t solved_count() const;
  /// Mean of (eps_S + eps_A)/2 over solved points.
  double mean_level_energy() const;
};

/// Doublets at each d (strictly increasing, >= 0). Failures become gap rows.
SweepResult sweep_distance(const DoubleWellSpec& spec_template, const std::vector<double>& d_values,
                           int level_index, const SolverOptions& options = {});

/// Re sqrt_decaying(Vb + i V1 - eps): barrier decay constant at energy eps.
double barrier_kappa(const DoubleWellSpec& spec, double eps);

struct SplittingFit {
  double decay_constant = 0.0;
  double prefactor = 0.0;
  double rms_residual = 0.0;  // of ln(delta_eps)
  double log_range = 0.0;     // max - min of ln(delta_eps) in the window
  std::size_t points_used = 0;
  std::vector<double> residuals;  // in window order
};

/// Least-squares line through ln(delta_eps) against d over the points with
/// window_kappa * d >= 1. Throws DomainError for fewer than 3 window points or
/// a non-positive delta_eps inside the window.
SplittingFit fit_splitting(const std::vector<double>& d_values,
                           const std::vector<double>& delta_eps_values, double window_kappa);

struct FdOracleOptions {
  double grid_step = 0.0025;
  std::optional<double> box_halfwidth;  // default: d/2 + 1 + 24 / Re(kappa_out)
  double richardson_tolerance = 1e-4;
};

struct FdOracleResult {
  std::vector<Complex> eigenvalues;  // Richardson-extrapolated, ascending real part
  std::vector<Complex> coarse;       // at grid_step
  std::vector<Complex> fine;         // at grid_step / 2
  std::vector<double> parity_score;  // +1 even, -1 odd (fine grid)
  double box_halfwidth = 0.0;
};

/// Lowest `level_count` eigenvalues of the three-point finite-difference
/// operator on [-X, X] with Dirichlet ends, at steps h and h/2. Throws
/// BoxError when an eigenvector has not decayed at the box edge, DomainError
/// for h > 0.01 or too small a box, ConvergenceError when the two grids
/// disagree beyond the Richardson tolerance.
FdOracleResult fd_oracle(const DoubleWellSpec& spec, int level_count,
                         const FdOracleOptions& options = {});

/// Complex frequency scale * sqrt(E): f = Re, width = -2 Im, Q = f / width.
/// Throws GainError for Im(E) > 0 and DomainError for Re(E) <= 0.
diskmode::ResonanceLine qm_to_em(Complex E_qm, double frequency_scale);

}  // namespace proxres::doublewell
