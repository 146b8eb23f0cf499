#pragma once

// Non-Hermitian effective Hamiltonians for N coupled single-mode resonators:
//
//   H = diag(eps) - T - (i/2) Gamma,   Gamma = sum_c w_c w_c^dagger
//
// with T_ij = T0 exp(-kappa (|r_i - r_j| - 1)) between disks of unit diameter.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "proxres/numerics/complex.hpp"

namespace proxres::effmodel {

using proxres::Complex;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point2& a, const Point2& b);

enum class ChannelKind { Common, Individual };

struct DecayChannel {
  ChannelKind kind = ChannelKind::Common;
  std::vector<Complex> amplitudes;  // one per site
};

/// One common channel with amplitude sqrt(gamma) on every site.
DecayChannel common_channel(std::size_t sites, double gamma);
/// One channel per site with the single entry sqrt(gamma).
std::vector<DecayChannel> individual_channels(std::size_t sites, double gamma);

struct CouplingRule {
  double T0 = 0.05;
  Complex kappa{5.69, 0.0};
};

struct SiteNetwork {
  std::vector<double> site_energies;
  std::vector<Point2> positions;  // ignored when coupling_override is set
  CouplingRule rule;
  std::optional<Eigen::MatrixXcd> coupling_override;  // T_ij, symmetric, zero diagonal
  std::vector<DecayChannel> channels;

  std::size_t size() const { return site_energies.size(); }
  /// Throws DomainError for inconsistent sizes, N > 16, T0 <= 0, Re(kappa) <= 0
  /// or an asymmetric override; GeometryError when two disks overlap.
  void validate() const;
  Eigen::MatrixXcd couplings() const;
  Eigen::MatrixXcd decay_matrix() const;
};

Eigen::MatrixXcd build_heff(const SiteNetwork& network);

enum class SymmetryGroup { None, Z2, C3v };

struct IrrepLabel {
  std::string name;    // even, odd, A1, E or mixed
  double score = 0.0;  // squared projection norm of the labelled (or dominant) irrep
};

/// Projects a site vector onto the irreps of the site permutation
/// representation. Z2 needs N = 2 and C3v needs N = 3 (DomainError otherwise).
IrrepLabel classify_symmetry(const Eigen::VectorXcd& vector, SymmetryGroup group);

struct ModeReport {
  Complex eigenvalue;
  double width = 0.0;  // -2 Im(eigenvalue)
  IrrepLabel irrep;
  Eigen::VectorXcd vector;
};

/// Group used by spectrum(): Z2 for two sites, C3v for three, None otherwise.
SymmetryGroup default_group(std::size_t sites);

/// Eigenmodes sorted by ascending real part.
std::vector<ModeReport> spectrum(const SiteNetwork& network);

/// Sharpest mode: smallest width, near-ties (1e-12 relative) by lowest real part.
std::size_t sharpest_mode(const std::vector<ModeReport>& modes);

/// Two sites with explicit coupling T, one common channel and individual loss.
SiteNetwork two_site_network(double site_energy, double T, double gamma_common,
                             double gamma_individual);

struct TriangleParams {
  double side_s = 1.1;
  double T0 = 0.05;
  Complex kappa{5.69, 0.0};
  double gamma_common = 0.01;
  double gamma_individual = 0.002;
  double site_energy = 1.0;
  double channel_shift_coeff = 0.0;  // common amplitude of site 3 scales by 1 + coeff * b
  double freq_scale_GHz = 9.45;

  void validate() const;
};

/// Equilateral triangle of side s with site 3 moved by b outward along its
/// bisector. Throws GeometryError when disks overlap.
SiteNetwork triangle_network(const TriangleParams& params, double shift_b);

struct BreakRow {
  double sharp_width = 0.0;
  double sharp_Q = 0.0;
  IrrepLabel sharp_irrep;
  double bright_width = 0.0;
  double mid_width = 0.0;  // the remaining mode of the triplet
  double mid_Q = 0.0;
  std::vector<ModeReport> modes;
};

struct BreakPoint {
  double b = 0.0;
  std::optional<BreakRow> row;
  std::string error;
};

/// Spectrum of the shifted triangle at each b (>= 0, strictly increasing).
/// Geometry failures become gap rows.
std::vector<BreakPoint> symmetry_break_sweep(const TriangleParams& params,
                                             const std::vector<double>& b_values);

}  // namespace proxres::effmodel
