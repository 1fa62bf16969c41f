#include "kcas/kernel.hpp"

#include <cmath>
#include <numbers>

#include "kcas/specfun.hpp"

namespace kcas {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

void require_r(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw KernelError("Green's function needs r > 0");
}

void require_dim(int d) {
  if (d != 2 && d != 3) throw KernelError("dimension must be 2 or 3");
}

bool second_quadrant(const SpectralPoint& sp) { return sp.axis == Axis::ray && sp.theta > 0.5 * kPi; }

// First-quadrant representative of lambda (reflection for the second quadrant).
cplx first_quadrant(const SpectralPoint& sp) {
  const cplx l = sp.lambda();
  return second_quadrant(sp) ? cplx(-l.real(), l.imag()) : l;
}

// H_0 and H_1 at z = lambda r, Im z >= 0.
void hankel01(const SpectralPoint& sp, cplx z, cplx& h0, cplx& h1) {
  if (sp.axis == Axis::real) {
    double j[2], y[2];
    specfun::bessel_jy_sequence(2, z.real(), j, y);
    h0 = {j[0], y[0]};
    h1 = {j[1], y[1]};
  } else {
    h0 = specfun::hankel1_complex(0, z);
    h1 = specfun::hankel1_complex(1, z);
  }
}

cplx bessel_j_at(const SpectralPoint& sp, int nu, cplx z) {
  if (sp.axis == Axis::real) return specfun::bessel_j(nu, z.real());
  return specfun::bessel_j_complex(nu, z);
}

}  // namespace

const char* to_string(Axis axis) {
  switch (axis) {
    case Axis::real: return "real";
    case Axis::imaginary: return "imaginary";
    case Axis::ray: return "ray";
  }
  return "unknown";
}

SpectralPoint SpectralPoint::imaginary(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw KernelError("spectral magnitude must be positive");
  return {Axis::imaginary, kappa, 0.5 * kPi};
}

SpectralPoint SpectralPoint::real(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw KernelError("spectral magnitude must be positive");
  return {Axis::real, lambda, 0.0};
}

SpectralPoint SpectralPoint::ray(double magnitude, double theta) {
  if (!(magnitude > 0.0) || !std::isfinite(magnitude)) throw KernelError("spectral magnitude must be positive");
  if (!(theta > 0.0 && theta < kPi)) throw KernelError("ray angle must lie in (0, pi)");
  if (theta == 0.5 * kPi) return imaginary(magnitude);
  return {Axis::ray, magnitude, theta};
}

SpectralPoint SpectralPoint::from_complex(cplx lambda) {
  if (lambda.imag() < 0.0) throw KernelError("spectral point must lie in the closed upper half plane");
  if (lambda.imag() == 0.0) {
    if (lambda.real() > 0.0) return real(lambda.real());
    throw KernelError("spectral point on the negative real axis or at 0");
  }
  if (lambda.real() == 0.0) return imaginary(lambda.imag());
  return ray(std::abs(lambda), std::arg(lambda));
}

cplx SpectralPoint::lambda() const {
  switch (axis) {
    case Axis::real: return {value, 0.0};
    case Axis::imaginary: return {0.0, value};
    case Axis::ray: return std::polar(value, theta);
  }
  return {};
}

double green_imag(double kappa, double r) {
  require_r(r);
  return specfun::bessel_k(0, kappa * r) / (2.0 * kPi);
}

double green_imag_dlambda_over_i(double kappa, double r) {
  require_r(r);
  return r * specfun::bessel_k(1, kappa * r) / (2.0 * kPi);
}

cplx green_free(int d, const SpectralPoint& sp, double r) {
  require_dim(d);
  require_r(r);
  if (d == 3) {
    if (sp.is_imaginary()) return {std::exp(-sp.value * r) / (4.0 * kPi * r), 0.0};
    return std::exp(kI * sp.lambda() * r) / (4.0 * kPi * r);
  }
  if (sp.is_imaginary()) return {green_imag(sp.value, r), 0.0};
  cplx h0, h1;
  hankel01(sp, first_quadrant(sp) * r, h0, h1);
  const cplx g = 0.25 * kI * h0;
  return second_quadrant(sp) ? std::conj(g) : g;
}

cplx green_free_dlambda(int d, const SpectralPoint& sp, double r) {
  require_dim(d);
  require_r(r);
  if (d == 3) {
    if (sp.is_imaginary()) return {0.0, std::exp(-sp.value * r) / (4.0 * kPi)};
    return kI * std::exp(kI * sp.lambda() * r) / (4.0 * kPi);
  }
  if (sp.is_imaginary()) return {0.0, green_imag_dlambda_over_i(sp.value, r)};
  cplx h0, h1;
  hankel01(sp, first_quadrant(sp) * r, h0, h1);
  const cplx dg = -0.25 * kI * r * h1;
  return second_quadrant(sp) ? -std::conj(dg) : dg;
}

namespace detail {

RealSplit split_single_imag(double kappa, double r, double speed, double log_term, bool diagonal) {
  if (diagonal) {
    const double b = -(std::log(0.5 * kappa * speed) + specfun::kEulerGamma) * speed / (2.0 * kPi);
    return {-speed / (4.0 * kPi), b};
  }
  const double x = kappa * r;
  const double a = -specfun::bessel_i(0, x) * speed / (4.0 * kPi);
  const double g = specfun::bessel_k(0, x) / (2.0 * kPi);
  return {a, g * speed - a * log_term};
}

RealSplit split_dlambda_imag(double kappa, double r, double speed, double log_term, bool diagonal) {
  if (diagonal) return {0.0, speed / (2.0 * kPi * kappa)};
  const double x = kappa * r;
  const double a = r * specfun::bessel_i(1, x) * speed / (4.0 * kPi);
  const double g = r * specfun::bessel_k(1, x) / (2.0 * kPi);
  return {a, g * speed - a * log_term};
}

KressSplit split_single(const SpectralPoint& sp, double r, double speed, double log_term, bool diagonal) {
  if (sp.is_imaginary()) {
    const RealSplit s = split_single_imag(sp.value, r, speed, log_term, diagonal);
    return {{s.a, 0.0}, {s.b, 0.0}};
  }
  const cplx lambda = first_quadrant(sp);
  KressSplit out;
  if (diagonal) {
    out.a = -speed / (4.0 * kPi);
    out.b = (0.25 * kI - (std::log(0.5 * lambda * speed) + specfun::kEulerGamma) / (2.0 * kPi)) * speed;
  } else {
    const cplx z = lambda * r;
    cplx h0, h1;
    hankel01(sp, z, h0, h1);
    out.a = -bessel_j_at(sp, 0, z) * speed / (4.0 * kPi);
    out.b = 0.25 * kI * h0 * speed - out.a * log_term;
  }
  if (second_quadrant(sp)) {
    out.a = std::conj(out.a);
    out.b = std::conj(out.b);
  }
  return out;
}

KressSplit split_dlambda(const SpectralPoint& sp, double r, double speed, double log_term, bool diagonal) {
  if (sp.is_imaginary()) {
    const RealSplit s = split_dlambda_imag(sp.value, r, speed, log_term, diagonal);
    return {{0.0, s.a}, {0.0, s.b}};
  }
  const cplx lambda = first_quadrant(sp);
  KressSplit out;
  if (diagonal) {
    out.a = 0.0;
    out.b = -speed / (2.0 * kPi * lambda);
  } else {
    const cplx z = lambda * r;
    cplx h0, h1;
    hankel01(sp, z, h0, h1);
    out.a = r * bessel_j_at(sp, 1, z) * speed / (4.0 * kPi);
    out.b = -0.25 * kI * r * h1 * speed - out.a * log_term;
  }
  if (second_quadrant(sp)) {
    out.a = -std::conj(out.a);
    out.b = -std::conj(out.b);
  }
  return out;
}

}  // namespace detail

namespace {

struct PairGeometry {
  double r, speed, log_term;
  bool diagonal;
};

PairGeometry pair_geometry(const Curve& curve, double t, double s) {
  const double diff = std::remainder(t - s, 2.0 * kPi);
  PairGeometry g;
  g.speed = curve.speed(s);
  g.diagonal = diff == 0.0;
  if (g.diagonal) {
    g.r = 0.0;
    g.log_term = 0.0;
  } else {
    g.r = (curve.point(t) - curve.point(s)).norm();
    const double sn = std::sin(0.5 * diff);
    g.log_term = std::log(4.0 * sn * sn);
  }
  return g;
}

}  // namespace

KressSplit kress_split(const SpectralPoint& sp, const Curve& curve, double t, double s) {
  const PairGeometry g = pair_geometry(curve, t, s);
  return detail::split_single(sp, g.r, g.speed, g.log_term, g.diagonal);
}

KressSplit kress_split_dlambda(const SpectralPoint& sp, const Curve& curve, double t, double s) {
  const PairGeometry g = pair_geometry(curve, t, s);
  return detail::split_dlambda(sp, g.r, g.speed, g.log_term, g.diagonal);
}

}  // namespace kcas
