#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kcas/fields.hpp"
#include "kcas/specfun.hpp"

using namespace kcas;

namespace {

constexpr double kPi = std::numbers::pi;

// Dirichlet unit disk at the origin, imaginary axis:
// k(x, y) = -(1/2pi) sum_n (2 - delta_n0) I_n(kappa)/K_n(kappa) K_n(kappa r) K_n(kappa r') cos(n dtheta).
double disk_series(double kappa, const Vec2& x, const Vec2& y) {
  const double r = x.norm(), rp = y.norm();
  const double dt = std::atan2(x.y(), x.x()) - std::atan2(y.y(), y.x());
  double s = 0.0;
  for (int n = 0; n < 80; ++n) {
    const double lr = std::log(specfun::bessel_i_scaled(n, kappa)) - std::log(specfun::bessel_k_scaled(n, kappa)) +
                      std::log(specfun::bessel_k_scaled(n, kappa * r)) + std::log(specfun::bessel_k_scaled(n, kappa * rp)) +
                      2 * kappa - kappa * (r + rp);
    const double t = (n == 0 ? 1.0 : 2.0) * std::exp(lr) * std::cos(n * dt);
    s += t;
    if (n > 10 && std::abs(t) < 1e-20 * std::abs(s)) break;
  }
  return -s / (2 * kPi);
}

Scene two_disks() { return Scene({make_circle({0, 0}, 1), make_circle({4, 0}, 1)}); }

}  // namespace

TEST_CASE("disk against the separated series") {
  const Scene s({make_circle({0, 0}, 1)});
  const BoundaryGrid g = discretize(s, 128);
  for (double k : {0.5, 1.0, 2.0}) {
    const FieldSolver f(s, g, SpectralPoint::imaginary(k));
    for (double r : {1.5, 2.0, 3.0}) {
      const Vec2 x(r * std::cos(0.4), r * std::sin(0.4));
      const FieldPoint p = make_field_point(s, x);
      const double want = disk_series(k, x, x);
      const cplx got = f.resolvent_diff(p, p);
      CHECK(got.real() < 0.0);
      CHECK(std::abs(got.imag()) <= 1e-15 * std::abs(got.real()));
      CHECK(std::abs(got.real() - want) <= 1e-8 * std::abs(want));
      const Vec2 y(-1.7, 0.9);
      CHECK(std::abs(f.resolvent_diff(p, make_field_point(s, y)).real() - disk_series(k, x, y)) <= 1e-8 * std::abs(want));
    }
    CHECK(f.rel_resolvent(make_field_point(s, {2, 0}), make_field_point(s, {0, 2})) == cplx(0.0));
  }
}

TEST_CASE("reciprocity") {
  const Scene s({make_kite({0, 0}, 1, 0.3), make_circle({4, 0.5}, 1)});
  const BoundaryGrid g = discretize(s, 64);
  const SpectralPoint points[] = {SpectralPoint::imaginary(0.8), SpectralPoint::ray(1.2, 0.4), SpectralPoint::real(1.5)};
  for (const SpectralPoint& sp : points) {
    const FieldSolver f(s, g, sp);
    const FieldPoint x = make_field_point(s, {2.0, 2.5}), y = make_field_point(s, {-2.0, -2.0});
    const cplx a = f.resolvent_diff(x, y), b = f.resolvent_diff(y, x);
    CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
    const cplx ra = f.rel_resolvent(x, y), rb = f.rel_resolvent(y, x);
    CHECK(std::abs(ra - rb) <= 1e-12 * std::abs(ra));
    CHECK(std::abs(resolvent_diff_kernel(s, g, sp, x, y) - a) <= 1e-13 * std::abs(a));
    CHECK(std::abs(rel_resolvent_kernel(s, g, sp, x, y) - ra) <= 1e-13 * std::abs(ra));
  }
}

TEST_CASE("field points and standoff") {
  const Scene s = two_disks();
  CHECK(field_standoff(s) == doctest::Approx(0.2));
  CHECK(field_standoff(Scene({make_circle({0, 0}, 1)})) == doctest::Approx(0.1));
  const FieldPoint in = make_field_point(s, {0.3, 0.1});
  CHECK(!in.valid);
  const FieldPoint out = make_field_point(s, {2.0, 0.0});
  CHECK(out.valid);
  CHECK(out.dist == doctest::Approx(1.0));
  const BoundaryGrid g = discretize(s, 48);
  const FieldSolver f(s, g, SpectralPoint::imaginary(1.0));
  CHECK_THROWS_AS(f.resolvent_diff(in, out), FieldError);
  const FieldPoint near = make_field_point(s, {1.1, 0.0});
  CHECK(near.valid);
  CHECK_THROWS_AS(f.resolvent_diff(near, out), FieldError);
  CHECK_THROWS_AS(f.rel_resolvent(out, near), FieldError);
  CHECK_NOTHROW(f.resolvent_diff(make_field_point(s, {1.25, 0.0}), out));
}

TEST_CASE("relative kernel is the multiple-scattering part") {
  const Scene s = two_disks();
  const BoundaryGrid g = discretize(s, 64);
  const FieldSolver f(s, g, SpectralPoint::imaginary(1.0));
  for (const Vec2& x : {Vec2(-1.5, 0.0), Vec2(2.0, 0.0), Vec2(0.0, 1.6), Vec2(2.0, 2.5)}) {
    const FieldPoint p = make_field_point(s, x);
    const cplx k = f.resolvent_diff(p, p), r = f.rel_resolvent(p, p);
    CHECK(std::abs(r) < std::abs(k));
    CHECK(r.real() > 0.0);
  }
}

TEST_CASE("monotone decay away from the boundary") {
  const Scene s = two_disks();
  const BoundaryGrid g = discretize(s, 64);
  for (double k : {0.5, 1.0, 2.0}) {
    const FieldSolver f(s, g, SpectralPoint::imaginary(k));
    double prev = 1e300, prev_rel = 1e300;
    for (double d = 0.3; d < 8.0; d *= 1.25) {
      const FieldPoint p = make_field_point(s, {-1.0 - d, 0.3 * d});
      const double v = std::abs(f.resolvent_diff(p, p)), vr = std::abs(f.rel_resolvent(p, p));
      CHECK(v < prev);
      CHECK(vr < prev_rel);
      prev = v;
      prev_rel = vr;
    }
  }
}
