#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "kcas/specfun.hpp"

namespace kcas::specfun {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};
constexpr double kSeriesMax = 3.0;
constexpr double kAsymptotic = 20.0;

void check_arg(int nu, cplx z) {
  if (nu != 0 && nu != 1) throw SpecfunError("complex Bessel routines support orders 0 and 1 only");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw SpecfunError("non-finite Bessel argument");
  if (z.imag() < 0.0) throw SpecfunError("complex Bessel routines require Im z >= 0");
  if (z == cplx(0.0)) throw SpecfunError("complex Bessel argument must be nonzero");
}

struct Pair {
  cplx j, y;
};

Pair series(int nu, cplx z) {
  const cplx half = 0.5 * z;
  const cplx q = half * half;
  const cplx log_half = std::log(half);
  cplx term = 1.0, jsum = 1.0, ysum = 0.0;
  double harmonic = 0.0;
  if (nu == 0) {
    for (int k = 1; k < 80; ++k) {
      term *= -q / (static_cast<double>(k) * k);
      harmonic += 1.0 / k;
      jsum += term;
      ysum += harmonic * term;
      if (std::abs(term) < 1e-18 * std::abs(jsum)) break;
    }
    return {jsum, (2.0 / kPi) * ((log_half + kEulerGamma) * jsum - ysum)};
  }
  ysum = -2.0 * kEulerGamma + 1.0;
  for (int k = 1; k < 80; ++k) {
    term *= -q / (static_cast<double>(k) * (k + 1));
    harmonic += 1.0 / k;
    jsum += term;
    ysum += (2.0 * harmonic + 1.0 / (k + 1) - 2.0 * kEulerGamma) * term;
    if (std::abs(term) < 1e-18 * std::abs(jsum)) break;
  }
  const cplx j1 = half * jsum;
  return {j1, -2.0 / (kPi * z) + (2.0 / kPi) * log_half * j1 - (half / kPi) * ysum};
}

// K_nu(w) for Re w >= 0 by the trapezoid rule on the Laplace-type integral.
cplx k_laplace(int nu, cplx w) {
  constexpr double h = 0.25;
  constexpr int count = 26;
  const cplx inv2w = 0.5 / w;
  cplx acc = 0.0;
  for (int k = 0; k < count; ++k) {
    const double s = k * h;
    const double s2 = s * s;
    const double wt = (k == 0 ? 1.0 : 2.0) * h * std::exp(-s2);
    const cplx root = std::sqrt(1.0 + s2 * inv2w);
    acc += nu == 0 ? wt / root : wt * s2 * root;
  }
  const cplx e = std::exp(-w);
  return nu == 0 ? e * acc / std::sqrt(2.0 * w) : e * acc * std::sqrt(2.0 / w);
}

cplx hankel_asymptotic(int nu, cplx z) {
  const double mu = 4.0 * nu * nu;
  cplx term = 1.0, sum = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const cplx next = term * kI * (mu - odd * odd) / (8.0 * k * z);
    if (std::abs(next) > last) break;
    last = std::abs(next);
    term = next;
    sum += term;
    if (last < 1e-17) break;
  }
  const cplx phase = std::exp(kI * (z - (0.5 * nu + 0.25) * kPi));
  return std::sqrt(2.0 / (kPi * z)) * phase * sum;
}

}  // namespace

cplx hankel1_complex(int nu, cplx z) {
  check_arg(nu, z);
  const double r = std::abs(z);
  if (r <= kSeriesMax) {
    const Pair p = series(nu, z);
    return p.j + kI * p.y;
  }
  if (r < kAsymptotic) {
    // H_nu(z) = (2/pi) i^{-nu-1} K_nu(-iz)
    const cplx k = k_laplace(nu, -kI * z);
    const cplx factor = nu == 0 ? -kI : cplx(-1.0, 0.0);
    return (2.0 / kPi) * factor * k;
  }
  return hankel_asymptotic(nu, z);
}

cplx bessel_j_complex(int nu, cplx z) {
  check_arg(nu, z);
  if (std::abs(z) <= kSeriesMax) return series(nu, z).j;
  // Miller recurrence normalized by e^{-iz} = J_0 + 2 sum_k (-i)^k J_k.
  const double m = std::abs(z);
  int start = static_cast<int>(std::ceil(m + 20.0 * std::cbrt(m) + 40.0));
  start += start & 1;
  cplx next = 0.0, cur = 1e-300;
  cplx norm = 0.0, j0 = 0.0, j1 = 0.0;
  cplx phase = 1.0;  // (-i)^k
  for (int k = 0; k < start % 4; ++k) phase *= -kI;
  cplx top_term = 2.0 * phase * cur;
  norm += top_term;
  for (int k = start; k > 0; --k) {
    const cplx prev = (2.0 * k / z) * cur - next;
    next = cur;
    cur = prev;
    phase *= kI;  // now (-i)^{k-1}
    if (k - 1 > 0) norm += 2.0 * phase * cur;
    if (k - 1 == 1) j1 = cur;
    if (std::abs(cur) > 1e250) {
      cur /= 1e250;
      next /= 1e250;
      norm /= 1e250;
      j1 /= 1e250;
    }
  }
  j0 = cur;
  norm += j0;
  const cplx scale = std::exp(-kI * z) / norm;
  return (nu == 0 ? j0 : j1) * scale;
}

}  // namespace kcas::specfun
