#pragma once

// Free Helmholtz Green's function, its wavenumber derivative, and the
// logarithmic splitting used by the diagonal-block product quadrature.

#include <complex>
#include <stdexcept>

#include "kcas/geometry.hpp"

namespace kcas {

using cplx = std::complex<double>;

class KernelError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class Axis { real, imaginary, ray };

const char* to_string(Axis axis);

// lambda = value (real), i*value (imaginary) or value*e^{i theta} (ray).
// Ray angles are accepted in (0, pi); the second quadrant is evaluated via
// the reflection G(-conj lambda) = conj G(lambda).
struct SpectralPoint {
  Axis axis = Axis::imaginary;
  double value = 1.0;
  double theta = 0.0;

  static SpectralPoint imaginary(double kappa);
  static SpectralPoint real(double lambda);
  static SpectralPoint ray(double magnitude, double theta);
  // Any point of the closed upper half plane except 0.
  static SpectralPoint from_complex(cplx lambda);

  cplx lambda() const;
  bool is_imaginary() const { return axis == Axis::imaginary; }
};

// G and dG/dlambda as functions of r = |x - y|, d in {2, 3}.
cplx green_free(int d, const SpectralPoint& sp, double r);
cplx green_free_dlambda(int d, const SpectralPoint& sp, double r);

// Real-valued forms on the imaginary axis (d = 2):
//   G(i kappa, r) = K_0(kappa r)/2pi,  dG/dlambda(i kappa, r) = i * r K_1(kappa r)/2pi.
double green_imag(double kappa, double r);
double green_imag_dlambda_over_i(double kappa, double r);

// F(t, s) |x'(s)| = A(t, s) log(4 sin^2((t - s)/2)) + B(t, s) with A, B smooth.
struct KressSplit {
  cplx a;
  cplx b;
};

// Splitting of the d = 2 single-layer kernel G |x'(s)|.
KressSplit kress_split(const SpectralPoint& sp, const Curve& curve, double t, double s);
// Same splitting for the derivative kernel dG/dlambda |x'(s)|.
KressSplit kress_split_dlambda(const SpectralPoint& sp, const Curve& curve, double t, double s);

namespace detail {
// Splitting from precomputed geometry: r = |x(t) - x(s)|, speed = |x'(s)|,
// log_term = log(4 sin^2((t-s)/2)); r and log_term are ignored on the diagonal.
KressSplit split_single(const SpectralPoint& sp, double r, double speed, double log_term, bool diagonal);
KressSplit split_dlambda(const SpectralPoint& sp, double r, double speed, double log_term, bool diagonal);

// Imaginary-axis versions. split_single_imag is exact; split_dlambda_imag
// returns the splitting of (dG/dlambda)/i, which is real there.
struct RealSplit {
  double a;
  double b;
};
RealSplit split_single_imag(double kappa, double r, double speed, double log_term, bool diagonal);
RealSplit split_dlambda_imag(double kappa, double r, double speed, double log_term, bool diagonal);
}  // namespace detail

}  // namespace kcas
