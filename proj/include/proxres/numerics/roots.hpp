#pragma once

#include <functional>
#include <vector>

#include "proxres/numerics/complex.hpp"

namespace proxres::numerics {

using ComplexFunction = std::function<Complex(Complex)>;

struct RootFindConfig {
  double tolerance = 1e-10;           // on |residual|
  int max_iterations = 100;
  double step_for_numeric_derivative = 1e-7;  // relative to max(1, |z|)

  /// Throws DomainError when tolerance <= 0 or max_iterations < 1.
  void validate() const;
};

/// Damped Newton iteration with a forward-difference derivative.
/// Returns z with |residual(z)| <= config.tolerance or throws
/// ConvergenceError carrying the last iterate.
Complex find_root_complex(const ComplexFunction& residual, Complex seed,
                          const RootFindConfig& config = {});

/// Axis-aligned rectangle in the complex plane.
struct ComplexBox {
  double re_min = 0.0;
  double re_max = 0.0;
  double im_min = 0.0;
  double im_max = 0.0;
};

/// Grid points that are local minima of |residual| over their 8-neighbourhood,
/// sorted by ascending |residual|; equal values keep row-major order (rows
/// run along Im, columns along Re).
std::vector<Complex> scan_seeds(const ComplexFunction& residual, const ComplexBox& box,
                                int nx, int ny);

/// Root of a real function on a bracket [lo, hi] with a sign change
/// (TOMS 748). Throws DomainError when the bracket has no sign change.
double bracket_root(const std::function<double(double)>& f, double lo, double hi,
                    double x_tolerance = 1e-14, int max_iterations = 200);

}  // namespace proxres::numerics
