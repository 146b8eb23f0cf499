#pragma once

#include <cmath>
#include <complex>

namespace proxres {

using Complex = std::complex<double>;

namespace numerics {

/// Square root on the decaying branch: Re(w) >= 0, and Im(w) >= 0 when
/// Re(w) == 0. Every evanescent or barrier wavevector goes through this.
Complex sqrt_decaying(Complex z) noexcept;

/// True when both components are finite.
inline bool is_finite(Complex z) noexcept {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace numerics
}  // namespace proxres
