#include "proxres/numerics/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "proxres/error.hpp"

namespace proxres::numerics {

void RootFindConfig::validate() const {
  if (!(tolerance > 0.0)) throw DomainError("RootFindConfig: tolerance must be > 0");
  if (max_iterations < 1) throw DomainError("RootFindConfig: max_iterations must be >= 1");
  if (!(step_for_numeric_derivative > 0.0)) {
    throw DomainError("RootFindConfig: derivative step must be > 0");
  }
}

Complex find_root_complex(const ComplexFunction& residual, Complex seed,
                          const RootFindConfig& config) {
  config.validate();
  if (!is_finite(seed)) throw DomainError("find_root_complex: non-finite seed");

  Complex z = seed;
  Complex fz = residual(z);
  if (!is_finite(fz)) {
    throw ConvergenceError("find_root_complex: residual not finite at seed", z,
                           std::numeric_limits<double>::infinity());
  }
  int polish = 0;
  for (int iter = 0; iter < config.max_iterations; ++iter) {
    const double scale = std::max(1.0, std::abs(z));
    const bool converged = std::abs(fz) <= config.tolerance;
    if (converged && (fz == 0.0 || polish >= 2)) return z;

    const double h = config.step_for_numeric_derivative * scale;
    const Complex slope = (residual(z + h) - fz) / h;
    if (slope == 0.0 || !is_finite(slope)) {
      if (converged) return z;
      throw ConvergenceError("find_root_complex: vanishing derivative", z, std::abs(fz));
    }
    Complex step = fz / slope;

    // Halve the step until the residual does not grow.
    Complex trial = z - step;
    Complex ftrial = residual(trial);
    for (int k = 0; k < 30 && (!is_finite(ftrial) || std::abs(ftrial) > std::abs(fz)); ++k) {
      step *= 0.5;
      trial = z - step;
      ftrial = residual(trial);
    }
    if (!is_finite(ftrial)) {
      throw ConvergenceError("find_root_complex: residual not finite", z, std::abs(fz));
    }
    if (converged) {
      // Polishing: stop once Newton no longer improves the residual.
      if (std::abs(ftrial) >= std::abs(fz)) return z;
      ++polish;
    }
    const bool stalled = std::abs(step) <= 1e-15 * scale;
    z = trial;
    fz = ftrial;
    if (stalled) {
      if (std::abs(fz) <= config.tolerance) return z;
      throw ConvergenceError("find_root_complex: iteration stalled", z, std::abs(fz));
    }
  }
  if (std::abs(fz) <= config.tolerance) return z;
  throw ConvergenceError("find_root_complex: no convergence in " +
                             std::to_string(config.max_iterations) + " iterations",
                         z, std::abs(fz));
}

std::vector<Complex> scan_seeds(const ComplexFunction& residual, const ComplexBox& box,
                                int nx, int ny) {
  if (nx < 2 || ny < 2) throw DomainError("scan_seeds: grid needs nx, ny >= 2");
  if (!(box.re_max > box.re_min) || !(box.im_max > box.im_min)) {
    throw DomainError("scan_seeds: empty box");
  }
  const double dx = (box.re_max - box.re_min) / (nx - 1);
  const double dy = (box.im_max - box.im_min) / (ny - 1);
  auto point = [&](int ix, int iy) { return Complex(box.re_min + ix * dx, box.im_min + iy * dy); };

  std::vector<double> mag(static_cast<size_t>(nx) * ny);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const double v = std::abs(residual(point(ix, iy)));
      mag[static_cast<size_t>(iy) * nx + ix] =
          std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    }
  }
  // Row-major order (index) breaks ties so that the result is deterministic.
  auto before = [&](size_t a, size_t b) { return mag[a] < mag[b] || (mag[a] == mag[b] && a < b); };

  std::vector<size_t> minima;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const size_t idx = static_cast<size_t>(iy) * nx + ix;
      if (!std::isfinite(mag[idx])) continue;
      bool is_min = true;
      for (int jy = std::max(0, iy - 1); jy <= std::min(ny - 1, iy + 1) && is_min; ++jy) {
        for (int jx = std::max(0, ix - 1); jx <= std::min(nx - 1, ix + 1); ++jx) {
          const size_t other = static_cast<size_t>(jy) * nx + jx;
          if (other != idx && !before(idx, other)) {
            is_min = false;
            break;
          }
        }
      }
      if (is_min) minima.push_back(idx);
    }
  }
  std::sort(minima.begin(), minima.end(), before);
  std::vector<Complex> seeds;
  seeds.reserve(minima.size());
  for (size_t idx : minima) {
    seeds.push_back(point(static_cast<int>(idx % nx), static_cast<int>(idx / nx)));
  }
  return seeds;
}

double bracket_root(const std::function<double(double)>& f, double lo, double hi,
                    double x_tolerance, int max_iterations) {
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    throw DomainError("bracket_root: no sign change on [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  }
  auto tol = [x_tolerance](double a, double b) {
    return std::abs(b - a) <= x_tolerance * std::max(1.0, std::abs(a));
  };
  boost::uintmax_t iterations = static_cast<boost::uintmax_t>(max_iterations);
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iterations);
  return std::abs(f(a)) <= std::abs(f(b)) ? a : b;
}

}  // namespace proxres::numerics
