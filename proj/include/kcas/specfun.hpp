#pragma once

// Bessel and Hankel functions of integer order.
//
// Real-argument functions cover J_n, Y_n, I_n, K_n and H^(1)_n for n <= 200.
// Each routine picks its algorithm by regime: ascending series for small
// arguments, the Hankel asymptotic expansion for large arguments, Miller-type
// backward recurrence (or its continued-fraction form) for J_n and I_n in
// between, and forward recurrence for Y_n and K_n.
//
// The complex-argument routines at the bottom only provide orders 0 and 1 in
// the closed upper half plane; they exist because Green's function
// evaluations at complex wavenumber need them.

#include <complex>
#include <stdexcept>

namespace kcas::specfun {

using cplx = std::complex<double>;

inline constexpr int kMaxOrder = 200;
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

class SpecfunError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Non-negative integer order, capped at kMaxOrder.
class BesselOrder {
 public:
  constexpr BesselOrder(int n) : n_(n) {  // NOLINT(implicit)
    if (n < 0 || n > kMaxOrder) throw SpecfunError("Bessel order out of range [0, 200]");
  }
  constexpr int value() const { return n_; }
  constexpr operator int() const { return n_; }  // NOLINT

 private:
  int n_;
};

double bessel_j(BesselOrder n, double x);
double bessel_y(BesselOrder n, double x);
double bessel_i(BesselOrder n, double x);
double bessel_k(BesselOrder n, double x);

// Exponentially scaled variants: e^{-x} I_n(x) and e^{x} K_n(x).
double bessel_i_scaled(BesselOrder n, double x);
double bessel_k_scaled(BesselOrder n, double x);

struct KValue {
  double value = 0.0;
  bool underflow = false;  // true when K_n(x) is below the double range and 0 was returned
};
KValue bessel_k_checked(BesselOrder n, double x);

cplx hankel1(BesselOrder n, double x);

/// d^j/dx^j H^(1)_n(x), j >= 1, via 2^{-j} sum_l (-1)^l C(j,l) H_{n-j+2l}.
cplx hankel1_deriv(int j, BesselOrder n, double x);

/// Fills out[0..count) with J_0..J_{count-1}(x) / Y_0..Y_{count-1}(x), etc.
/// Cheaper than count separate calls.
void bessel_jy_sequence(int count, double x, double* j_out, double* y_out);
void bessel_ik_sequence(int count, double x, double* i_out, double* k_out);

// Orders 0 and 1 for Im z >= 0, z != 0.
cplx hankel1_complex(int nu, cplx z);
cplx bessel_j_complex(int nu, cplx z);

}  // namespace kcas::specfun
