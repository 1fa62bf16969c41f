#pragma once

// Extended-precision reference values for integer-order Bessel functions:
// quad-precision power series for J, Y, I and a long-double trapezoid
// integral for K.

#include <quadmath.h>

#include <cmath>

namespace oracle {

using quad = __float128;

inline quad factorial_q(int n) {
  quad f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

inline quad harmonic_q(int n) {
  quad h = 0;
  for (int k = 1; k <= n; ++k) h += quad(1) / k;
  return h;
}

// sum_k s^k (x/2)^{2k+n} / (k! (n+k)!) with s = -1 (J) or +1 (I).
inline quad ascending_series(int n, quad x, int s) {
  const quad h = x / 2, h2 = h * h;
  quad term = powq(h, n) / factorial_q(n), sum = term;
  for (int k = 1; k < 2000; ++k) {
    term *= s * h2 / (quad(k) * (n + k));
    sum += term;
    if (fabsq(term) < 1e-40Q * fabsq(sum) && k > 2 * h) break;
  }
  return sum;
}

inline double j(int n, double x) { return static_cast<double>(ascending_series(n, x, -1)); }
inline double i(int n, double x) { return static_cast<double>(ascending_series(n, x, 1)); }

inline double y(int n, double x) {
  const quad xq = x, h = xq / 2, h2 = h * h;
  const quad gamma = 0.577215664901532860606512090082402431Q;
  quad finite = 0;
  for (int k = 0; k < n; ++k) finite += factorial_q(n - k - 1) / factorial_q(k) * powq(h, 2 * k - n);
  quad term = powq(h, n) / factorial_q(n);
  quad tail = term * (2 * -gamma + harmonic_q(n));
  quad hk = 0, hnk = harmonic_q(n);
  for (int k = 1; k < 2000; ++k) {
    term *= -h2 / (quad(k) * (n + k));
    hk += quad(1) / k;
    hnk += quad(1) / (n + k);
    const quad add = term * (2 * -gamma + hk + hnk);
    tail += add;
    if (fabsq(add) < 1e-40Q * (fabsq(tail) + 1e-300Q) && k > 2 * h) break;
  }
  const quad val = (-finite + 2 * logq(h) * ascending_series(n, xq, -1) - tail) / M_PIq;
  return static_cast<double>(val);
}

// K_n(x) = int_0^inf e^{-x cosh t} cosh(n t) dt; the integrand is even and
// analytic, so the trapezoid rule converges geometrically.
inline double k(int n, double x) {
  using ld = long double;
  const ld hstep = 0.01L;
  // Peak of n t - x cosh t, used to keep the exponentials in range.
  const ld tpeak = n > 0 ? std::asinh(static_cast<ld>(n) / x) : 0.0L;
  const ld peak = n * tpeak - x * std::cosh(tpeak);
  ld sum = 0.0L;
  for (int m = 0; m < 1000000; ++m) {
    const ld t = m * hstep;
    const ld c = std::cosh(t);
    const ld v = 0.5L * (std::exp(n * t - x * c - peak) + std::exp(-n * t - x * c - peak));
    sum += (m == 0 ? 0.5L : 1.0L) * v;
    if (t > tpeak && v < 1e-30L * sum) break;
  }
  return static_cast<double>(std::exp(peak) * sum * hstep);
}

}  // namespace oracle
