// Finite-difference eigenvalues of the double well, used as an oracle for the
// transcendental solver. Three-point scheme on a piecewise-uniform grid whose
// nodes include every potential jump, symmetrized with the lumped node
// weights so the operator is complex symmetric tridiagonal.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "proxres/doublewell/doublewell.hpp"
#include "proxres/error.hpp"

namespace proxres::doublewell {

namespace {

using CVec = std::vector<Complex>;

struct Tridiagonal {
  CVec diag;
  std::vector<double> off;  // off[i] couples i and i+1
  std::vector<double> weight;

  std::size_t size() const { return diag.size(); }
};

// Nodes on [-X, X], mirror symmetric by construction.
std::vector<double> coarse_nodes(const DoubleWellSpec& spec, double h, double X) {
  std::vector<double> breaks{0.0};
  if (spec.d > 0.0) breaks.push_back(0.5 * spec.d);
  breaks.push_back(0.5 * spec.d + 1.0);
  breaks.push_back(X);
  std::vector<double> half{0.0};
  for (std::size_t s = 1; s < breaks.size(); ++s) {
    const double a = breaks[s - 1];
    const double b = breaks[s];
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / h - 1e-9)));
    for (int i = 1; i <= n; ++i) half.push_back(i == n ? b : a + (b - a) * i / n);
  }
  std::vector<double> nodes;
  for (std::size_t i = half.size(); i-- > 1;) nodes.push_back(-half[i]);
  nodes.insert(nodes.end(), half.begin(), half.end());
  return nodes;
}

std::vector<double> refined(const std::vector<double>& nodes) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    out.push_back(nodes[i]);
    out.push_back(0.5 * (nodes[i] + nodes[i + 1]));
  }
  out.push_back(nodes.back());
  return out;
}

Tridiagonal assemble(const DoubleWellSpec& spec, const std::vector<double>& x) {
  Tridiagonal t;
  const std::size_t m = x.size() - 2;  // interior nodes
  t.diag.resize(m);
  t.weight.resize(m);
  t.off.resize(m > 0 ? m - 1 : 0);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t i = j + 1;
    const double hl = x[i] - x[i - 1];
    const double hr = x[i + 1] - x[i];
    const Complex vl = spec.potential(0.5 * (x[i - 1] + x[i]));
    const Complex vr = spec.potential(0.5 * (x[i] + x[i + 1]));
    const double w = 0.5 * (hl + hr);
    t.weight[j] = w;
    t.diag[j] = (1.0 / hl + 1.0 / hr) / w + (hl * vl + hr * vr) / (hl + hr);
  }
  for (std::size_t j = 0; j + 1 < m; ++j) {
    const double h = x[j + 2] - x[j + 1];
    t.off[j] = -1.0 / (h * std::sqrt(t.weight[j] * t.weight[j + 1]));
  }
  return t;
}

// Number of eigenvalues of the real part below `x` (Sturm sequence).
std::size_t count_below(const Tridiagonal& t, double x) {
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double b2 = i == 0 ? 0.0 : t.off[i - 1] * t.off[i - 1];
    q = t.diag[i].real() - x - (i == 0 ? 0.0 : b2 / q);
    if (q == 0.0) q = -1e-300;
    if (q < 0.0) ++count;
  }
  return count;
}

double kth_real_eigenvalue(const Tridiagonal& t, std::size_t k) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < t.size(); ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.off[i - 1]);
    if (i + 1 < t.size()) r += std::abs(t.off[i]);
    lo = std::min(lo, t.diag[i].real() - r);
    hi = std::max(hi, t.diag[i].real() + r);
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(t, mid) > k) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Solves (A - shift) y = rhs by Gaussian elimination with partial pivoting on
// the band (one extra superdiagonal from row swaps).
CVec solve_shifted(const Tridiagonal& t, Complex shift, const CVec& rhs) {
  const std::size_t n = t.size();
  CVec lower(n, 0.0), d(n), u1(n, 0.0), u2(n, 0.0), y = rhs;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = t.diag[i] - shift;
    if (i + 1 < n) {
      u1[i] = t.off[i];
      lower[i + 1] = t.off[i];
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(lower[i + 1]) > std::abs(d[i])) {
      std::swap(d[i], lower[i + 1]);
      std::swap(u1[i], d[i + 1]);
      std::swap(u2[i], u1[i + 1]);
      std::swap(y[i], y[i + 1]);
    }
    if (d[i] == 0.0) d[i] = 1e-300;
    const Complex f = lower[i + 1] / d[i];
    d[i + 1] -= f * u1[i];
    u1[i + 1] -= f * u2[i];
    y[i + 1] -= f * y[i];
  }
  if (d[n - 1] == 0.0) d[n - 1] = 1e-300;
  CVec x(n);
  for (std::size_t i = n; i-- > 0;) {
    Complex s = y[i];
    if (i + 1 < n) s -= u1[i] * x[i + 1];
    if (i + 2 < n) s -= u2[i] * x[i + 2];
    x[i] = s / d[i];
  }
  return x;
}

CVec tridiag_times(const Tridiagonal& t, const CVec& v) {
  const std::size_t n = t.size();
  CVec out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex s = t.diag[i] * v[i];
    if (i > 0) s += t.off[i - 1] * v[i - 1];
    if (i + 1 < n) s += t.off[i] * v[i + 1];
    out[i] = s;
  }
  return out;
}

double norm(const CVec& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

Complex bilinear(const CVec& a, const CVec& b) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct EigenEstimate {
  Complex value;
  CVec vector;
};

// Inverse iteration on the real part from its k-th eigenvalue, followed by
// Rayleigh quotient iteration with the complex-symmetric bilinear form.
EigenEstimate complex_eigenpair(const Tridiagonal& t, std::size_t k) {
  Tridiagonal herm = t;
  for (auto& z : herm.diag) z = z.real();
  const double lambda0 = kth_real_eigenvalue(herm, k);
  const double nudge = 1e-10 * std::max(1.0, std::abs(lambda0));

  // asymmetric start so both parities are present
  CVec v(t.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i));
  for (int it = 0; it < 3; ++it) {
    v = solve_shifted(herm, lambda0 + nudge, v);
    const double nv = norm(v);
    for (auto& z : v) z /= nv;
  }
  Complex sigma = bilinear(v, tridiag_times(t, v)) / bilinear(v, v);
  const double scale = std::max(1.0, std::abs(sigma));
  double op_norm = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    op_norm = std::max(op_norm, std::abs(t.diag[i]) + 2.0 * std::abs(i < t.off.size() ? t.off[i] : 0.0));
  }
  for (int it = 0; it < 60; ++it) {
    v = solve_shifted(t, sigma, v);
    const double nv = norm(v);
    for (auto& z : v) z /= nv;
    const CVec av = tridiag_times(t, v);
    const Complex next = bilinear(v, av) / bilinear(v, v);
    const bool settled = std::abs(next - sigma) <= 1e-14 * scale;
    sigma = next;
    double res = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) res += std::norm(av[i] - sigma * v[i]);
    if (settled || std::sqrt(res) <= 1e-13 * op_norm) return {sigma, v};
  }
  throw ConvergenceError("fd_oracle: Rayleigh quotient iteration did not settle", sigma, 0.0);
}

struct GridSolution {
  std::vector<Complex> values;
  std::vector<double> parity;
  double max_tail = 0.0;
};

GridSolution solve_grid(const DoubleWellSpec& spec, const std::vector<double>& nodes, int count) {
  const Tridiagonal t = assemble(spec, nodes);
  if (t.size() < static_cast<std::size_t>(count) + 2) {
    throw DomainError("fd_oracle: grid too coarse for the requested level count");
  }
  GridSolution out;
  for (int k = 0; k < count; ++k) {
    const auto pair = complex_eigenpair(t, static_cast<std::size_t>(k));
    const auto& v = pair.vector;
    double peak = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      peak = std::max(peak, std::abs(v[i]) / std::sqrt(t.weight[i]));
    }
    const double tail = std::max(std::abs(v.front()) / std::sqrt(t.weight.front()),
                                 std::abs(v.back()) / std::sqrt(t.weight.back()));
    out.max_tail = std::max(out.max_tail, tail / peak);
    Complex overlap = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) overlap += v[i] * std::conj(v[v.size() - 1 - i]);
    out.parity.push_back(overlap.real() / std::pow(norm(v), 2));
    out.values.push_back(pair.value);
  }
  std::vector<std::size_t> order(out.values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out.values[a].real() < out.values[b].real();
  });
  GridSolution sorted = out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted.values[i] = out.values[order[i]];
    sorted.parity[i] = out.parity[order[i]];
  }
  return sorted;
}

double min_exterior_kappa(const DoubleWellSpec& spec, const std::vector<Complex>& values) {
  double kappa = std::numeric_limits<double>::infinity();
  for (const auto& E : values) {
    kappa = std::min(kappa, numerics::sqrt_decaying(Complex(spec.V0, spec.V1) - E).real());
  }
  return kappa;
}

}  // namespace

FdOracleResult fd_oracle(const DoubleWellSpec& spec, int level_count,
                         const FdOracleOptions& options) {
  spec.validate();
  if (level_count < 1) throw DomainError("fd_oracle: level_count must be >= 1");
  const double h = options.grid_step;
  if (!(h > 0.0 && h <= 0.01)) throw DomainError("fd_oracle: grid step must lie in (0, 0.01]");
  const double edge = 0.5 * spec.d + 1.0;

  double X = options.box_halfwidth.value_or(edge + 24.0 / std::sqrt(spec.V0));
  if (!(X > edge)) throw DomainError("fd_oracle: box must extend beyond the wells");
  GridSolution coarse;
  for (int attempt = 0;; ++attempt) {
    coarse = solve_grid(spec, coarse_nodes(spec, h, X), level_count);
    const double kappa = min_exterior_kappa(spec, coarse.values);
    if (options.box_halfwidth) {
      if (X < edge + 8.0 / kappa) {
        std::ostringstream msg;
        msg << "fd_oracle: box half-width " << X << " below d/2 + 1 + 8/Re(kappa_out) = "
            << edge + 8.0 / kappa;
        throw DomainError(msg.str());
      }
      break;
    }
    const double wanted = edge + 24.0 / kappa;
    if (wanted <= X || attempt >= 5) break;
    X = 1.02 * wanted;
  }
  if (coarse.max_tail > 1e-8) {
    std::ostringstream msg;
    msg << "fd_oracle: eigenvector tail " << coarse.max_tail << " at the box edge X = " << X;
    throw BoxError(msg.str());
  }
  const GridSolution fine = solve_grid(spec, refined(coarse_nodes(spec, h, X)), level_count);
  if (fine.max_tail > 1e-8) throw BoxError("fd_oracle: eigenvector not decayed at the box edge");

  FdOracleResult out;
  out.box_halfwidth = X;
  out.coarse = coarse.values;
  out.fine = fine.values;
  out.parity_score = fine.parity;
  for (int k = 0; k < level_count; ++k) {
    const Complex a = coarse.values[k];
    const Complex b = fine.values[k];
    if (std::abs(a - b) > options.richardson_tolerance * std::abs(b)) {
      std::ostringstream msg;
      msg << "fd_oracle: level " << k + 1 << " changes by " << std::abs(a - b)
          << " between h and h/2";
      throw ConvergenceError(msg.str(), b, std::abs(a - b));
    }
    out.eigenvalues.push_back((4.0 * b - a) / 3.0);
  }
  return out;
}

}  // namespace proxres::doublewell
