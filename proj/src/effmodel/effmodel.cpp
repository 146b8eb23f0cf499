#include "proxres/effmodel/effmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "proxres/doublewell/doublewell.hpp"
#include "proxres/error.hpp"
#include "proxres/numerics/eigen_dense.hpp"

namespace proxres::effmodel {

double distance(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

DecayChannel common_channel(std::size_t sites, double gamma) {
  if (!(gamma >= 0.0)) throw DomainError("common channel: gamma must be >= 0");
  return {ChannelKind::Common, std::vector<Complex>(sites, std::sqrt(gamma))};
}

std::vector<DecayChannel> individual_channels(std::size_t sites, double gamma) {
  if (!(gamma >= 0.0)) throw DomainError("individual channel: gamma must be >= 0");
  std::vector<DecayChannel> out;
  for (std::size_t i = 0; i < sites; ++i) {
    DecayChannel c{ChannelKind::Individual, std::vector<Complex>(sites, 0.0)};
    c.amplitudes[i] = std::sqrt(gamma);
    out.push_back(std::move(c));
  }
  return out;
}

void SiteNetwork::validate() const {
  const std::size_t n = size();
  if (n == 0) throw DomainError("network: no sites");
  if (n > static_cast<std::size_t>(numerics::kMaxDenseEigenSize)) {
    throw DomainError("network: at most 16 sites");
  }
  for (double e : site_energies) {
    if (!std::isfinite(e)) throw DomainError("network: site energies must be finite");
  }
  for (const auto& c : channels) {
    if (c.amplitudes.size() != n) throw DomainError("network: channel amplitude count != sites");
    for (const auto& w : c.amplitudes) {
      if (!numerics::is_finite(w)) throw DomainError("network: channel amplitudes must be finite");
    }
  }
  if (coupling_override) {
    const auto& t = *coupling_override;
    if (t.rows() != static_cast<Eigen::Index>(n) || t.cols() != static_cast<Eigen::Index>(n)) {
      throw DomainError("network: coupling override has the wrong shape");
    }
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      if (t(i, i) != 0.0) throw DomainError("network: coupling override needs a zero diagonal");
      for (Eigen::Index j = 0; j < i; ++j) {
        if (t(i, j) != t(j, i)) throw DomainError("network: coupling override must be symmetric");
        if (!numerics::is_finite(t(i, j))) throw DomainError("network: couplings must be finite");
      }
    }
    return;
  }
  if (positions.size() != n) throw DomainError("network: position count != sites");
  if (!(rule.T0 > 0.0)) throw DomainError("network: T0 must be > 0");
  if (!(rule.kappa.real() > 0.0) || !std::isfinite(rule.kappa.imag())) {
    throw DomainError("network: Re(kappa) must be > 0");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double r = distance(positions[i], positions[j]);
      if (!(r > 1.0)) {
        std::ostringstream msg;
        msg << "disks " << j + 1 << " and " << i + 1 << " overlap (center distance " << r << ")";
        throw GeometryError(msg.str());
      }
    }
  }
}

Eigen::MatrixXcd SiteNetwork::couplings() const {
  if (coupling_override) return *coupling_override;
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      const double edge = distance(positions[i], positions[j]) - 1.0;
      t(i, j) = t(j, i) = rule.T0 * std::exp(-rule.kappa * edge);
    }
  }
  return t;
}

Eigen::MatrixXcd SiteNetwork::decay_matrix() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXcd gamma = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& c : channels) {
    const Eigen::Map<const Eigen::VectorXcd> w(c.amplitudes.data(), n);
    gamma += w * w.adjoint();
  }
  return gamma;
}

Eigen::MatrixXcd build_heff(const SiteNetwork& network) {
  network.validate();
  const auto n = static_cast<Eigen::Index>(network.size());
  Eigen::MatrixXcd h = -network.couplings() - Complex(0.0, 0.5) * network.decay_matrix();
  for (Eigen::Index i = 0; i < n; ++i) h(i, i) += network.site_energies[static_cast<std::size_t>(i)];
  return h;
}

IrrepLabel classify_symmetry(const Eigen::VectorXcd& vector, SymmetryGroup group) {
  const double norm2 = vector.squaredNorm();
  if (!(norm2 > 0.0)) throw DomainError("classify_symmetry: zero vector");
  struct Part {
    const char* name;
    double weight;
  };
  std::vector<Part> parts;
  switch (group) {
    case SymmetryGroup::Z2: {
      if (vector.size() != 2) throw DomainError("classify_symmetry: Z2 needs 2 sites");
      const double even = std::norm(vector(0) + vector(1)) / 2.0 / norm2;
      const double odd = std::norm(vector(0) - vector(1)) / 2.0 / norm2;
      parts = {{"even", even}, {"odd", odd}};
      break;
    }
    case SymmetryGroup::C3v: {
      if (vector.size() != 3) throw DomainError("classify_symmetry: C3v needs 3 sites");
      const Complex mean = vector.sum() / 3.0;
      const double a1 = 3.0 * std::norm(mean) / norm2;
      const double e = (vector.array() - mean).matrix().squaredNorm() / norm2;
      parts = {{"A1", a1}, {"E", e}};
      break;
    }
    case SymmetryGroup::None:
      return {"mixed", 0.0};
  }
  const auto best = std::max_element(parts.begin(), parts.end(),
                                     [](const Part& a, const Part& b) { return a.weight < b.weight; });
  if (best->weight > 0.99) return {best->name, best->weight};
  return {"mixed", best->weight};
}

SymmetryGroup default_group(std::size_t sites) {
  if (sites == 2) return SymmetryGroup::Z2;
  if (sites == 3) return SymmetryGroup::C3v;
  return SymmetryGroup::None;
}

std::vector<ModeReport> spectrum(const SiteNetwork& network) {
  const auto decomposition = numerics::eig_complex_dense(build_heff(network));
  const SymmetryGroup group = default_group(network.size());
  std::vector<ModeReport> modes;
  for (const auto& pair : decomposition.pairs) {
    ModeReport m;
    m.eigenvalue = pair.value;
    m.width = -2.0 * pair.value.imag();
    m.vector = pair.vector;
    m.irrep = classify_symmetry(pair.vector, group);
    modes.push_back(std::move(m));
  }
  return modes;
}

std::size_t sharpest_mode(const std::vector<ModeReport>& modes) {
  if (modes.empty()) throw DomainError("sharpest_mode: no modes");
  double scale = 0.0;
  for (const auto& m : modes) scale = std::max(scale, std::abs(m.width));
  const double tie = 1e-12 * std::max(scale, std::numeric_limits<double>::min());
  std::size_t best = 0;
  for (std::size_t i = 1; i < modes.size(); ++i) {
    const double dw = modes[i].width - modes[best].width;
    if (dw < -tie || (std::abs(dw) <= tie &&
                      modes[i].eigenvalue.real() < modes[best].eigenvalue.real())) {
      best = i;
    }
  }
  return best;
}

SiteNetwork two_site_network(double site_energy, double T, double gamma_common,
                             double gamma_individual) {
  SiteNetwork net;
  net.site_energies = {site_energy, site_energy};
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(2, 2);
  t(0, 1) = t(1, 0) = T;
  net.coupling_override = t;
  net.channels.push_back(common_channel(2, gamma_common));
  for (auto& c : individual_channels(2, gamma_individual)) net.channels.push_back(std::move(c));
  net.validate();
  return net;
}

void TriangleParams::validate() const {
  if (!(side_s > 1.0)) throw GeometryError("triangle: side must exceed the disk diameter 1");
  if (!(T0 > 0.0)) throw DomainError("triangle: T0 must be > 0");
  if (!(kappa.real() > 0.0)) throw DomainError("triangle: Re(kappa) must be > 0");
  if (!(gamma_common >= 0.0) || !(gamma_individual >= 0.0)) {
    throw DomainError("triangle: decay rates must be >= 0");
  }
  if (!(freq_scale_GHz > 0.0)) throw DomainError("triangle: frequency scale must be > 0");
  if (!std::isfinite(site_energy) || !std::isfinite(channel_shift_coeff)) {
    throw DomainError("triangle: parameters must be finite");
  }
}

SiteNetwork triangle_network(const TriangleParams& params, double shift_b) {
  params.validate();
  const double s = params.side_s;
  const double h = s * std::numbers::sqrt3 / 2.0;
  SiteNetwork net;
  net.site_energies.assign(3, params.site_energy);
  // the bisector through site 3 is vertical; outward is +y
  net.positions = {{0.0, 0.0}, {s, 0.0}, {s / 2.0, h + shift_b}};
  net.rule = {params.T0, params.kappa};
  DecayChannel common = common_channel(3, params.gamma_common);
  common.amplitudes[2] *= 1.0 + params.channel_shift_coeff * shift_b;
  net.channels.push_back(std::move(common));
  for (auto& c : individual_channels(3, params.gamma_individual)) net.channels.push_back(std::move(c));
  try {
    net.validate();
  } catch (const GeometryError& e) {
    std::ostringstream msg;
    msg << e.what() << " at b = " << shift_b;
    throw GeometryError(msg.str());
  }
  return net;
}

namespace {

// Round-off can leave a dark mode with a tiny positive imaginary part.
double model_q(Complex eigenvalue, double scale) {
  return doublewell::qm_to_em({eigenvalue.real(), std::min(eigenvalue.imag(), 0.0)}, scale).q_factor;
}

}  // namespace

std::vector<BreakPoint> symmetry_break_sweep(const TriangleParams& params,
                                             const std::vector<double>& b_values) {
  params.validate();
  for (std::size_t i = 0; i < b_values.size(); ++i) {
    if (!(b_values[i] >= 0.0)) throw DomainError("symmetry sweep: b values must be >= 0");
    if (i > 0 && !(b_values[i] > b_values[i - 1])) {
      throw DomainError("symmetry sweep: b values must be strictly increasing");
    }
  }
  std::vector<BreakPoint> out;
  for (double b : b_values) {
    BreakPoint point;
    point.b = b;
    try {
      BreakRow row;
      row.modes = spectrum(triangle_network(params, b));
      const std::size_t sharp = sharpest_mode(row.modes);
      std::size_t bright = 0;
      for (std::size_t i = 1; i < row.modes.size(); ++i) {
        if (row.modes[i].width > row.modes[bright].width) bright = i;
      }
      std::size_t mid = 0;
      while (mid == sharp || mid == bright) ++mid;
      const auto& sm = row.modes[sharp];
      row.sharp_width = sm.width;
      row.sharp_Q = model_q(sm.eigenvalue, params.freq_scale_GHz);
      row.sharp_irrep = sm.irrep;
      row.bright_width = row.modes[bright].width;
      row.mid_width = row.modes[mid].width;
      row.mid_Q = model_q(row.modes[mid].eigenvalue, params.freq_scale_GHz);
      point.row = std::move(row);
    } catch (const GeometryError& e) {
      point.error = e.what();
    }
    out.push_back(std::move(point));
  }
  return out;
}

}  // namespace proxres::effmodel
