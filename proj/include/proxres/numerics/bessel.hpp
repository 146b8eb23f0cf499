#pragma once

// Cylinder functions of integer order and real argument.
//
// Validated range: order 0..12, 0 <= x <= 100 for J and I, 1e-6 <= x <= 100
// for K. Derivatives use the standard recurrences
//   J'_m = (J_{m-1} - J_{m+1}) / 2
//   I'_m = (I_{m-1} + I_{m+1}) / 2
//   K'_m = -(K_{m-1} + K_{m+1}) / 2
//
// J: power series for x <= 2, normalized Miller backward recurrence above.
// K: K0 from its logarithmic series and K1 from the I/K Wronskian for
//    x <= 2, Steed's continued fraction above; forward recurrence in order.
// I: power series (all terms positive, no cancellation on the range).

namespace proxres::numerics {

inline constexpr int kMaxBesselOrder = 12;
inline constexpr double kMaxBesselArgument = 100.0;
inline constexpr double kMinBesselKArgument = 1e-6;

double bessel_j(int order, double x);
double bessel_j_prime(int order, double x);

double bessel_i(int order, double x);
double bessel_i_prime(int order, double x);

double bessel_k(int order, double x);
double bessel_k_prime(int order, double x);

}  // namespace proxres::numerics
