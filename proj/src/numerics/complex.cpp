#include "proxres/numerics/complex.hpp"

namespace proxres::numerics {

Complex sqrt_decaying(Complex z) noexcept {
  Complex w = std::sqrt(z);
  // std::sqrt already returns Re >= 0; fix the sign of the imaginary part on
  // the cut, where a signed zero in Im(z) decides the result.
  if (w.real() < 0.0 || (w.real() == 0.0 && w.imag() < 0.0)) w = -w;
  return w;
}

}  // namespace proxres::numerics
