#include "kcas/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace kcas::specfun {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSeriesMaxJY = 5.0;   // ascending series for J, Y up to here
constexpr double kAsymptoticJY = 20.0; // Hankel expansion from here on
constexpr double kSeriesMaxK = 2.0;
constexpr double kAsymptoticK = 25.0;
constexpr double kRescale = 1e250;

void require_finite(double x) {
  if (!std::isfinite(x)) throw SpecfunError("non-finite Bessel argument");
}

int even_start(double m) {
  int start = static_cast<int>(std::ceil(m + 20.0 * std::cbrt(m) + 40.0));
  return start + (start & 1);
}

// (x/2)^n / n! by direct product; callers rule out underflow beforehand.
double power_over_factorial(double half, int n) {
  double p = 1.0;
  for (int k = 1; k <= n; ++k) p *= half / k;
  return p;
}

// Ascending series for J_n(x); the alternating terms are bounded by I_n(x), so
// this is only used for small x.
double series_j(int n, double x) {
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  const double half = 0.5 * x;
  if (n * std::log(half) - std::lgamma(n + 1.0) < -745.0) return 0.0;
  const double lead = power_over_factorial(half, n);
  const double q = -half * half;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * (n + k));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return lead * sum;
}

struct JY01 {
  double j0, j1, y0, y1;
};

JY01 jy01_series(double x) {
  const double half = 0.5 * x;
  const double q = half * half;
  const double log_term = std::log(half) + kEulerGamma;
  // J0, J1
  double t0 = 1.0, j0 = 1.0;
  double t1 = 1.0, s1 = 1.0;
  // Y0 harmonic sum and Y1 digamma sum
  double harmonic = 0.0;
  double y0_sum = 0.0;
  // (psi(k+1) + psi(k+2)) with psi(k+1) = -gamma + H_k
  double y1_sum = (-kEulerGamma) + (1.0 - kEulerGamma);
  for (int k = 1; k < 60; ++k) {
    t0 *= -q / (static_cast<double>(k) * k);
    j0 += t0;
    harmonic += 1.0 / k;
    y0_sum += harmonic * t0;
    t1 *= -q / (static_cast<double>(k) * (k + 1));
    s1 += t1;
    const double psi_sum = (harmonic - kEulerGamma) + (harmonic + 1.0 / (k + 1) - kEulerGamma);
    y1_sum += psi_sum * t1;
    if (std::abs(t0) < 1e-18 && std::abs(t1) < 1e-18) break;
  }
  JY01 r;
  r.j0 = j0;
  r.j1 = half * s1;
  r.y0 = (2.0 / kPi) * (log_term * j0 - y0_sum);
  r.y1 = -2.0 / (kPi * x) + (2.0 / kPi) * std::log(half) * r.j1 - (half / kPi) * y1_sum;
  return r;
}

// Miller backward recurrence normalized by J_0 + 2 sum J_{2k} = 1.
// Fills j[0..count), count <= start.
void miller_j(double x, int start, int count, double* j) {
  std::vector<double> vals(start + 2, 0.0);
  double next = 0.0, cur = 1e-300;
  double norm = 0.0;
  vals[start] = cur;
  for (int k = start; k > 0; --k) {
    const double prev = (2.0 * k / x) * cur - next;
    next = cur;
    cur = prev;
    vals[k - 1] = cur;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
    if (std::abs(cur) > kRescale) {
      for (int m = k - 1; m <= start; ++m) vals[m] /= kRescale;
      norm /= kRescale;
      cur /= kRescale;
      next /= kRescale;
    }
  }
  norm += vals[0];
  for (int k = 0; k < count; ++k) j[k] = vals[k] / norm;
}

JY01 jy01_miller(double x) {
  const int start = even_start(x);
  std::vector<double> j(start + 1);
  miller_j(x, start, start + 1, j.data());
  const double log_term = std::log(0.5 * x) + kEulerGamma;
  double s0 = 0.0, s1 = 0.0;
  for (int k = 1; 2 * k + 1 <= start; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    s0 += sign * j[2 * k] / k;
    s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / k;
  }
  JY01 r;
  r.j0 = j[0];
  r.j1 = j[1];
  r.y0 = (2.0 / kPi) * (log_term * j[0] - 2.0 * s0);
  r.y1 = (2.0 / kPi) * (log_term * j[1] - j[0] / x) + (2.0 / kPi) * s1;
  return r;
}

// Hankel asymptotic expansion: P, Q for order nu.
void hankel_pq(int nu, double x, double& p, double& q) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  p = 1.0;
  q = 0.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * (mu - odd * odd) / (8.0 * k * x);
    if (std::abs(next) > last) break;  // asymptotic series started to diverge
    last = std::abs(next);
    term = next;
    // k odd contributes to Q, k even to P, with alternating signs i^k.
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      default: p += term; break;
    }
    if (last < 1e-17) break;
  }
}

JY01 jy01_asymptotic(double x) {
  const double amp = std::sqrt(2.0 / (kPi * x));
  const double c = std::cos(x), s = std::sin(x);
  const double r2 = std::numbers::sqrt2 / 2.0;
  // chi0 = x - pi/4, chi1 = x - 3pi/4
  const double c0 = r2 * (c + s), s0 = r2 * (s - c);
  const double c1 = r2 * (s - c), s1 = -r2 * (c + s);
  double p0, q0, p1, q1;
  hankel_pq(0, x, p0, q0);
  hankel_pq(1, x, p1, q1);
  JY01 r;
  r.j0 = amp * (p0 * c0 - q0 * s0);
  r.y0 = amp * (p0 * s0 + q0 * c0);
  r.j1 = amp * (p1 * c1 - q1 * s1);
  r.y1 = amp * (p1 * s1 + q1 * c1);
  return r;
}

JY01 jy01(double x) {
  if (x <= kSeriesMaxJY) return jy01_series(x);
  if (x < kAsymptoticJY) return jy01_miller(x);
  return jy01_asymptotic(x);
}

// ---- modified functions -------------------------------------------------

// Trapezoid nodes for the Laplace-type integral of K_nu, step 1/4.
struct LaplaceNodes {
  static constexpr int kCount = 26;
  static constexpr double kStep = 0.25;
  std::array<double, kCount> s2{};
  std::array<double, kCount> weight{};
  LaplaceNodes() {
    for (int k = 0; k < kCount; ++k) {
      const double s = k * kStep;
      s2[k] = s * s;
      weight[k] = (k == 0 ? 1.0 : 2.0) * kStep * std::exp(-s * s);
    }
  }
};
const LaplaceNodes& laplace_nodes() {
  static const LaplaceNodes nodes;
  return nodes;
}

// e^x K_0(x), e^x K_1(x) from
//   K_nu(x) = sqrt(pi/2x) e^{-x} / Gamma(nu+1/2) int_R e^{-s^2} s^{2nu} (1+s^2/2x)^{nu-1/2} ds
void k01_scaled_laplace(double x, double& k0, double& k1) {
  const auto& nd = laplace_nodes();
  const double inv2x = 0.5 / x;
  double a0 = 0.0, a1 = 0.0;
  for (int k = 0; k < LaplaceNodes::kCount; ++k) {
    const double root = std::sqrt(1.0 + nd.s2[k] * inv2x);
    a0 += nd.weight[k] / root;
    a1 += nd.weight[k] * nd.s2[k] * root;
  }
  k0 = a0 / std::sqrt(2.0 * x);
  k1 = a1 * std::sqrt(2.0 / x);
}

void k01_scaled_asymptotic(double x, double& k0, double& k1) {
  auto sum = [x](int nu) {
    const double mu = 4.0 * nu * nu;
    double term = 1.0, s = 1.0, last = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 200; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double next = term * (mu - odd * odd) / (8.0 * k * x);
      if (std::abs(next) > last) break;
      last = std::abs(next);
      term = next;
      s += term;
      if (last < 1e-17) break;
    }
    return s;
  };
  const double pref = std::sqrt(kPi / (2.0 * x));
  k0 = pref * sum(0);
  k1 = pref * sum(1);
}

// Series for I_0, I_1, K_0, K_1 (unscaled), small x.
void ik01_series(double x, double& i0, double& i1, double& k0, double& k1) {
  const double half = 0.5 * x;
  const double q = half * half;
  const double log_half = std::log(half);
  double t0 = 1.0, t1 = 1.0;
  i0 = 1.0;
  double s1 = 1.0;
  double harmonic = 0.0;
  double k0_sum = 0.0;
  double k1_sum = -2.0 * kEulerGamma + 1.0;
  for (int k = 1; k < 60; ++k) {
    t0 *= q / (static_cast<double>(k) * k);
    i0 += t0;
    harmonic += 1.0 / k;
    k0_sum += harmonic * t0;
    t1 *= q / (static_cast<double>(k) * (k + 1));
    s1 += t1;
    k1_sum += (2.0 * harmonic + 1.0 / (k + 1) - 2.0 * kEulerGamma) * t1;
    if (t0 < 1e-18 * i0 && t1 < 1e-18 * s1) break;
  }
  i1 = half * s1;
  k0 = -(log_half + kEulerGamma) * i0 + k0_sum;
  k1 = 1.0 / x + log_half * i1 - 0.5 * half * k1_sum;
}

void k01_scaled(double x, double& k0, double& k1) {
  if (x <= kSeriesMaxK) {
    double i0, i1;
    ik01_series(x, i0, i1, k0, k1);
    const double e = std::exp(x);
    k0 *= e;
    k1 *= e;
  } else if (x < kAsymptoticK) {
    k01_scaled_laplace(x, k0, k1);
  } else {
    k01_scaled_asymptotic(x, k0, k1);
  }
}

// I_n(x) by the ascending series (all terms positive), times e^{-x} if scaled.
double series_i(int n, double x, bool scaled) {
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  const double half = 0.5 * x;
  const double log_lead = n * std::log(half) - std::lgamma(n + 1.0) - (scaled ? x : 0.0);
  if (log_lead < -745.0) return 0.0;
  const double q = half * half;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 5000; ++k) {
    term *= q / (static_cast<double>(k) * (n + k));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  if (log_lead + std::log(sum) > 709.0) return std::numeric_limits<double>::infinity();
  if (log_lead < -700.0) return std::exp(log_lead + std::log(sum));
  const double lead = power_over_factorial(half, n) * (scaled ? std::exp(-x) : 1.0);
  return lead * sum;
}

// I_{n+1}/I_n by the continued fraction 1/(2(n+1)/x + 1/(2(n+2)/x + ...)),
// evaluated with the modified Lentz method.
double i_ratio(int n, double x) {
  constexpr double tiny = 1e-300;
  double f = tiny, c = tiny, d = 0.0;
  for (int j = 1; j < 100000; ++j) {
    const double b = 2.0 * (n + j) / x;
    d = b + d;
    if (d == 0.0) d = tiny;
    c = b + 1.0 / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return f;
}

void k_scaled_sequence(int count, double x, double* out) {
  double k0, k1;
  k01_scaled(x, k0, k1);
  out[0] = k0;
  if (count > 1) out[1] = k1;
  for (int k = 1; k + 1 < count; ++k) out[k + 1] = out[k - 1] + (2.0 * k / x) * out[k];
}

bool use_i_series(int n, double x) { return x <= kSeriesMaxK || 0.25 * x * x <= n + 1.0; }

double i_scaled_impl(int n, double x) {
  if (use_i_series(n, x)) return series_i(n, x, true);
  std::vector<double> k(n + 2);
  k_scaled_sequence(n + 2, x, k.data());
  const double r = i_ratio(n, x);
  return 1.0 / (x * (r * k[n] + k[n + 1]));
}

}  // namespace

// ---- public API ---------------------------------------------------------

void bessel_jy_sequence(int count, double x, double* j_out, double* y_out) {
  if (count <= 0) return;
  if (count - 1 > kMaxOrder) throw SpecfunError("Bessel order out of range [0, 200]");
  require_finite(x);
  if (x < 0.0) throw SpecfunError("negative Bessel argument");
  if (j_out) {
    if (x <= kSeriesMaxJY) {
      for (int k = 0; k < count; ++k) j_out[k] = series_j(k, x);
    } else {
      const JY01 b = jy01(x);
      const int forward_top = std::min(count - 1, static_cast<int>(std::floor(x)));
      j_out[0] = b.j0;
      if (count > 1) j_out[1] = b.j1;
      for (int k = 1; k < forward_top; ++k) j_out[k + 1] = (2.0 * k / x) * j_out[k] - j_out[k - 1];
      if (forward_top < count - 1) {
        const int start = even_start(std::max<double>(count, x));
        std::vector<double> tmp(count);
        miller_j(x, start, count, tmp.data());
        for (int k = std::max(2, forward_top + 1); k < count; ++k) j_out[k] = tmp[k];
      }
    }
  }
  if (y_out) {
    if (x == 0.0) throw SpecfunError("Bessel Y requires x > 0");
    const JY01 b = jy01(x);
    y_out[0] = b.y0;
    if (count > 1) y_out[1] = b.y1;
    for (int k = 1; k + 1 < count; ++k) {
      y_out[k + 1] = std::isinf(y_out[k]) ? y_out[k] : (2.0 * k / x) * y_out[k] - y_out[k - 1];
    }
  }
}

double bessel_j(BesselOrder n, double x) {
  require_finite(x);
  if (x < 0.0) throw SpecfunError("negative Bessel argument");
  if (x <= kSeriesMaxJY) return series_j(n, x);
  if (n <= 1) {
    const JY01 b = jy01(x);
    return n == 0 ? b.j0 : b.j1;
  }
  std::vector<double> j(n + 1);
  bessel_jy_sequence(n + 1, x, j.data(), nullptr);
  return j[n];
}

double bessel_y(BesselOrder n, double x) {
  require_finite(x);
  if (x <= 0.0) throw SpecfunError("Bessel Y requires x > 0");
  const JY01 b = jy01(x);
  if (n == 0) return b.y0;
  double prev = b.y0, cur = b.y1;
  for (int k = 1; k < n; ++k) {
    const double next = (2.0 * k / x) * cur - prev;
    if (std::isinf(next)) return -std::numeric_limits<double>::infinity();
    prev = cur;
    cur = next;
  }
  return cur;
}

void bessel_ik_sequence(int count, double x, double* i_out, double* k_out) {
  if (count <= 0) return;
  if (count - 1 > kMaxOrder) throw SpecfunError("Bessel order out of range [0, 200]");
  require_finite(x);
  if (k_out) {
    if (x <= 0.0) throw SpecfunError("Bessel K requires x > 0");
    k_scaled_sequence(count, x, k_out);
    const double e = std::exp(-x);
    for (int k = 0; k < count; ++k) k_out[k] *= e;
  }
  if (i_out) {
    if (x < 0.0) throw SpecfunError("Bessel I requires x >= 0");
    for (int k = 0; k < count; ++k) i_out[k] = bessel_i(k, x);
  }
}

double bessel_i_scaled(BesselOrder n, double x) {
  require_finite(x);
  if (x < 0.0) throw SpecfunError("Bessel I requires x >= 0");
  return i_scaled_impl(n, x);
}

double bessel_i(BesselOrder n, double x) {
  require_finite(x);
  if (x < 0.0) throw SpecfunError("Bessel I requires x >= 0");
  const double v = use_i_series(n, x) ? series_i(n, x, false) : i_scaled_impl(n, x) * std::exp(x);
  if (!std::isfinite(v)) throw SpecfunError("Bessel I overflows double range");
  return v;
}

double bessel_k_scaled(BesselOrder n, double x) {
  require_finite(x);
  if (x <= 0.0) throw SpecfunError("Bessel K requires x > 0");
  if (n <= 1) {
    double k0, k1;
    k01_scaled(x, k0, k1);
    return n == 0 ? k0 : k1;
  }
  std::vector<double> k(n + 1);
  k_scaled_sequence(n + 1, x, k.data());
  return k[n];
}

KValue bessel_k_checked(BesselOrder n, double x) {
  const double scaled = bessel_k_scaled(n, x);
  KValue r;
  if (!std::isfinite(scaled)) {
    r.value = scaled;
    return r;
  }
  const double v = x < 700.0 ? scaled * std::exp(-x) : std::exp(std::log(scaled) - x);
  if (v < std::numeric_limits<double>::min()) {
    r.value = 0.0;
    r.underflow = true;
    return r;
  }
  r.value = v;
  return r;
}

double bessel_k(BesselOrder n, double x) { return bessel_k_checked(n, x).value; }

cplx hankel1(BesselOrder n, double x) {
  require_finite(x);
  if (x <= 0.0) throw SpecfunError("Hankel function requires x > 0");
  return {bessel_j(n, x), bessel_y(n, x)};
}

cplx hankel1_deriv(int j, BesselOrder n, double x) {
  if (j < 1) throw SpecfunError("derivative order must be >= 1");
  if (n + j > kMaxOrder) throw SpecfunError("Bessel order out of range [0, 200]");
  const int top = n + j;
  std::vector<double> jv(top + 1), yv(top + 1);
  require_finite(x);
  if (x <= 0.0) throw SpecfunError("Hankel function requires x > 0");
  bessel_jy_sequence(top + 1, x, jv.data(), yv.data());
  cplx sum = 0.0;
  double binom = 1.0;
  for (int l = 0; l <= j; ++l) {
    int m = n - j + 2 * l;
    double sign = (l % 2 == 0) ? 1.0 : -1.0;
    if (m < 0) {
      m = -m;
      if (m % 2 == 1) sign = -sign;
    }
    sum += sign * binom * cplx(jv[m], yv[m]);
    binom = binom * (j - l) / (l + 1);
  }
  return std::ldexp(1.0, -j) * sum;
}

}  // namespace kcas::specfun
