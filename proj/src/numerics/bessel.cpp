#include "proxres/numerics/bessel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "proxres/error.hpp"

namespace proxres::numerics {
namespace {

constexpr double kSeriesCrossover = 2.0;
constexpr double kEulerGamma = 0.57721566490153286061;

void check_order(int order, const char* name) {
  if (order < 0 || order > kMaxBesselOrder) {
    throw DomainError(std::string(name) + ": order " + std::to_string(order) +
                      " outside [0, " + std::to_string(kMaxBesselOrder) + "]");
  }
}

void check_argument(double x, double lo, const char* name) {
  if (!(x >= lo) || x > kMaxBesselArgument) {
    throw DomainError(std::string(name) + ": argument " + std::to_string(x) +
                      " outside the validated range");
  }
}

// sum_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!)  (sign = -1)  or all-positive (sign = +1)
double power_series(int n, double x, double sign) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int i = 1; i <= n; ++i) term *= half / i;
  double sum = term;
  const double q = half * half;
  for (int k = 1; k < 1000; ++k) {
    term *= sign * q / (static_cast<double>(k) * (k + n));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// J_0..J_nmax by normalized backward recurrence, x > 0.
std::vector<double> miller_j(int nmax, double x) {
  const double top = std::max<double>(nmax, x);
  int start = static_cast<int>(top + 20.0 + std::sqrt(40.0 * top));
  start += start % 2;  // even start keeps the normalization sum aligned
  std::vector<double> j(static_cast<size_t>(start) + 2, 0.0);
  double next = 0.0;  // J_{k+1}
  double cur = 1e-30;  // J_k
  double norm = 0.0;
  const double two_over_x = 2.0 / x;
  for (int k = start; k >= 0; --k) {
    j[static_cast<size_t>(k)] = cur;
    if (k % 2 == 0) norm += (k == 0 ? 1.0 : 2.0) * cur;
    if (k == 0) break;
    const double prev = k * two_over_x * cur - next;
    next = cur;
    cur = prev;
    if (std::abs(cur) > 1e250) {
      for (int i = k; i <= start; ++i) j[static_cast<size_t>(i)] *= 1e-250;
      next *= 1e-250;
      cur *= 1e-250;
      norm *= 1e-250;
    }
  }
  std::vector<double> out(static_cast<size_t>(nmax) + 1);
  for (int k = 0; k <= nmax; ++k) out[static_cast<size_t>(k)] = j[static_cast<size_t>(k)] / norm;
  return out;
}

double bessel_j_unchecked(int n, double x) {
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  if (x <= kSeriesCrossover) return power_series(n, x, -1.0);
  return miller_j(n, x)[static_cast<size_t>(n)];
}

double bessel_i_unchecked(int n, double x) {
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  return power_series(n, x, +1.0);
}

// K0 and K1 for x > 0.
std::array<double, 2> bessel_k01(double x) {
  if (x <= kSeriesCrossover) {
    const double q = 0.25 * x * x;
    double term = 1.0;
    double harmonic = 0.0;
    double tail = 0.0;
    for (int k = 1; k < 200; ++k) {
      term *= q / (static_cast<double>(k) * k);
      harmonic += 1.0 / k;
      const double add = term * harmonic;
      tail += add;
      if (add <= 1e-17 * std::abs(tail)) break;
    }
    const double i0 = bessel_i_unchecked(0, x);
    const double i1 = bessel_i_unchecked(1, x);
    const double k0 = -(std::log(0.5 * x) + kEulerGamma) * i0 + tail;
    const double k1 = (1.0 / x - i1 * k0) / i0;
    return {k0, k1};
  }
  // Steed's continued fraction (CF2) for order zero.
  constexpr double a1 = 0.25;
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i < 10000; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < 1e-17) break;
  }
  const double k0 = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
  const double k1 = k0 * (x + 0.5 - a1 * h) / x;
  return {k0, k1};
}

double bessel_k_unchecked(int n, double x) {
  auto [km1, k] = bessel_k01(x);
  if (n == 0) return km1;
  for (int m = 1; m < n; ++m) {
    const double next = km1 + (2.0 * m / x) * k;
    km1 = k;
    k = next;
  }
  return k;
}

}  // namespace

double bessel_j(int order, double x) {
  check_order(order, "bessel_j");
  check_argument(x, 0.0, "bessel_j");
  return bessel_j_unchecked(order, x);
}

double bessel_j_prime(int order, double x) {
  check_order(order, "bessel_j_prime");
  check_argument(x, 0.0, "bessel_j_prime");
  if (order == 0) return -bessel_j_unchecked(1, x);
  return 0.5 * (bessel_j_unchecked(order - 1, x) - bessel_j_unchecked(order + 1, x));
}

double bessel_i(int order, double x) {
  check_order(order, "bessel_i");
  check_argument(x, 0.0, "bessel_i");
  return bessel_i_unchecked(order, x);
}

double bessel_i_prime(int order, double x) {
  check_order(order, "bessel_i_prime");
  check_argument(x, 0.0, "bessel_i_prime");
  if (order == 0) return bessel_i_unchecked(1, x);
  return 0.5 * (bessel_i_unchecked(order - 1, x) + bessel_i_unchecked(order + 1, x));
}

double bessel_k(int order, double x) {
  check_order(order, "bessel_k");
  check_argument(x, kMinBesselKArgument, "bessel_k");
  return bessel_k_unchecked(order, x);
}

double bessel_k_prime(int order, double x) {
  check_order(order, "bessel_k_prime");
  check_argument(x, kMinBesselKArgument, "bessel_k_prime");
  if (order == 0) return -bessel_k_unchecked(1, x);
  return -0.5 * (bessel_k_unchecked(order - 1, x) + bessel_k_unchecked(order + 1, x));
}

}  // namespace proxres::numerics
