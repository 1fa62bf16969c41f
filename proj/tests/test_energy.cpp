#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kcas/energy.hpp"

using namespace kcas;

namespace {

constexpr double kPi = std::numbers::pi;

Scene two_disks(double d = 4.0) { return Scene({make_circle({0, 0}, 1), make_circle({d, 0}, 1)}); }

QuadConfig fast() {
  QuadConfig c;
  c.tol = 1e-9;
  c.probe = false;
  return c;
}

}  // namespace

TEST_CASE("energy of two disks") {
  const Scene s = two_disks();
  const BoundaryGrid g = discretize(s, 48);
  const EnergyResult e = casimir_energy(s, g, fast());
  CHECK(e.value < 0.0);
  CHECK(e.value == doctest::Approx(-0.034185937589752656).epsilon(1e-8));
  CHECK(e.quad_err < 1e-6);
  CHECK(e.tail_bound < 1e-12);
  CHECK(e.evaluations > 0);
  CHECK(!e.panels.empty());
  CHECK(!e.samples.empty());
  for (const EnergySample& p : e.samples) CHECK(p.xi.real() < 0.0);
  CHECK(e.near_zero < 0.0);
  CHECK(std::abs(e.near_zero) <= e.quad_err);
}

TEST_CASE("power traces") {
  const Scene s = two_disks();
  const BoundaryGrid g = discretize(s, 48);
  const EnergyResult e = casimir_energy(s, g, fast());
  CHECK(std::abs(power_trace(s, g, 0.5, fast()).value - e.value) <= 1e-10 * std::abs(e.value));

  const EnergyResult one = power_trace(s, g, 1.0, fast());
  CHECK(one.value == 0.0);
  CHECK(one.quad_err == 0.0);

  CHECK_THROWS_AS(power_trace(s, g, 0.0, fast()), EnergyError);
  CHECK_THROWS_AS(power_trace(s, g, 1.5, fast()), EnergyError);
  CHECK_THROWS_AS(power_trace(s, g, -0.2, fast()), EnergyError);

  // The sin(pi s) prefactor takes the trace continuously to zero at s = 1.
  const double p9 = power_trace(s, g, 0.9, fast()).value, p99 = power_trace(s, g, 0.99, fast()).value;
  CHECK(p9 < 0.0);
  CHECK(p99 < 0.0);
  CHECK(std::abs(p99) < std::abs(p9));
  const double r = (p99 / (1.98 / kPi * std::sin(0.99 * kPi))) / (p9 / (1.8 / kPi * std::sin(0.9 * kPi)));
  CHECK(r > 0.5);
  CHECK(r < 2.0);

  // Strong small-kappa weight kappa^{-1/2}; the near-zero bound dominates quad_err.
  const EnergyResult q = power_trace(s, g, 0.25, fast());
  CHECK(std::isfinite(q.value));
  CHECK(q.value < 0.0);
  CHECK(q.quad_err < 1e-2 * std::abs(q.value));
}

TEST_CASE("energy scales inversely with size") {
  const Scene s = two_disks();
  const Scene b = s.scaled(2.0);
  const double e1 = casimir_energy(s, discretize(s, 48), fast()).value;
  const double e2 = casimir_energy(b, discretize(b, 48), fast()).value;
  CHECK(std::abs(e2 - 0.5 * e1) <= 1e-6 * std::abs(e1));
}

TEST_CASE("single obstacle has no interaction energy") {
  const Scene s({make_kite({0, 0}, 1)});
  const BoundaryGrid g = discretize(s, 48);
  CHECK(std::abs(casimir_energy(s, g, fast()).value) <= 1e-12);
  SmoothFunctionSpec f;
  f.t = 1.0;
  CHECK(std::abs(trace_df(s, g, f).value) <= 1e-12);
}

TEST_CASE("smooth function family") {
  for (double a : {0.5, 1.0, 2.5}) {
    const SmoothFunctionSpec f{a, 0.7};
    for (cplx l : {cplx(0.8, 0.0), cplx(1.1, 0.4), cplx(0.3, 1.2)}) {
      const cplx want = std::pow(l, 2 * a) * std::exp(-0.7 * l * l);
      CHECK(std::abs(f.f(l) - want) <= 1e-14 * std::abs(want));
      const cplx h = 1e-6;
      const cplx fd = (f.f(l + h) - f.f(l - h)) / (2.0 * h);
      CHECK(std::abs(f.fprime(l) - fd) <= 1e-7 * std::abs(fd));
    }
  }
}

TEST_CASE("contour trace under scaling") {
  const Scene s = two_disks();
  const double a = trace_df(s, discretize(s, 48), SmoothFunctionSpec{1.0, 4.0}).value;
  CHECK(std::isfinite(a));
  // Doubling the scene maps lambda to lambda / 2: f with t = 16 becomes f(t = 4) / 4.
  const Scene big = s.scaled(2.0);
  const double c = trace_df(big, discretize(big, 48), SmoothFunctionSpec{1.0, 16.0}).value;
  CHECK(std::abs(c - a / 4.0) <= 1e-6 * std::abs(a));
}

TEST_CASE("contour argument checks") {
  const Scene s = two_disks();
  const BoundaryGrid g = discretize(s, 32);
  CHECK_THROWS_AS(trace_df(s, g, SmoothFunctionSpec{1.0, 0.0}), EnergyError);
  CHECK_THROWS_AS(trace_df(s, g, SmoothFunctionSpec{0.0, 1.0}), EnergyError);
  ContourConfig bad;
  bad.theta = 1.0;
  CHECK_THROWS_AS(trace_df(s, g, SmoothFunctionSpec{1.0, 1.0}, bad), EnergyError);
  QuadConfig q;
  q.order = 17;
  CHECK_THROWS_AS(casimir_energy(s, g, q), EnergyError);
  q.order = 21;
  q.max_evaluations = 10;
  q.tol = 1e-15;
  CHECK_THROWS_AS(casimir_energy(s, g, q), EnergyError);
}

TEST_CASE("separation template") {
  SeparationTemplate t{two_disks(), -1, {0, 0}, {}};
  const Scene s = t.at(0.5);
  CHECK(s.obstacle(1).center().x() == doctest::Approx(4.5));
  CHECK(s.obstacle(1).center().y() == doctest::Approx(0.0));
  CHECK(s.obstacle(0).center().x() == 0.0);
  t.moving = 0;
  CHECK_THROWS_AS(t.at(0.1), EnergyError);
  t.direction = {0, 1};
  CHECK(t.at(2.0).obstacle(0).center().y() == doctest::Approx(2.0));
  t.moving = 5;
  CHECK_THROWS_AS(t.at(0.1), EnergyError);
}

TEST_CASE("force from fixed panels") {
  SeparationTemplate t{two_disks(), -1, {0, 0}, {}};
  t.counts = {48, 48};
  QuadConfig c = fast();
  const ForceResult f = casimir_force(t, 0.0, 0.1, c);
  CHECK(f.force < 0.0);
  CHECK(f.energy_minus < f.energy_plus);
  c.fixed_panels = f.panels;
  const ForceResult again = casimir_force(t, 0.0, 0.1, c);
  CHECK(again.force == f.force);
  const ForceResult half = casimir_force(t, 0.0, 0.05, c);
  CHECK(std::abs(half.force - f.force) <= 1e-2 * std::abs(f.force));
  // Central difference of the energy at the two separations.
  const Scene sm = t.at(-0.1);
  QuadConfig pinned = c;
  pinned.x_min = default_kappa_min(sm);
  pinned.x_max = 30.0 / (0.9 * 2.0);
  CHECK(std::abs(casimir_energy(sm, discretize(sm, 48), pinned).value - f.energy_minus) <= 1e-12);
  CHECK_THROWS_AS(casimir_force(t, 0.0, 0.0, c), EnergyError);
  CHECK_THROWS_AS(casimir_force(t, -1.95, 0.1, c), EnergyError);
  const SeparationTemplate lone{Scene({make_circle({0, 0}, 1)}), -1, {0, 0}, {}};
  CHECK_THROWS_AS(casimir_force(lone, 0.0, 0.1, c), EnergyError);
}
