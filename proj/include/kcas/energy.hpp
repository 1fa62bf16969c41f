#pragma once

// Imaginary-axis integrals of Xi: Casimir energy, power traces, contour
// traces Tr D_f for f(lambda) = lambda^{2a} e^{-t lambda^2}, the real-axis
// Birman-Krein cross-check and finite-difference forces.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kcas/geometry.hpp"
#include "kcas/kernel.hpp"
#include "kcas/xi.hpp"

namespace kcas {

class EnergyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  bool geometric = false;  // split at the geometric mean
};

struct QuadConfig {
  int order = 21;                     // Gauss-Kronrod points per panel: 15, 21, 31, 41, 51 or 61
  double tol = 1e-10;                 // relative target for the summed panel error
  double x_min = 0.0;                 // 0 selects kappa_min of the scene
  double x_max = 0.0;                 // 0 selects 30 / delta'
  double delta_prime_factor = 0.9;    // delta' = factor * gap
  int max_evaluations = 20000;        // Xi evaluations before giving up
  bool keep_samples = true;
  bool probe = true;                  // one grid-refinement probe at kappa = 1/gap
  XiOptions xi;
  // Evaluate on exactly these panels without refinement.
  std::vector<Panel> fixed_panels;
};

struct EnergySample {
  double x = 0.0;  // kappa, ray parameter u or real lambda
  cplx xi;         // Xi(i kappa), Xi(u e^{i theta}) or xi_rel(lambda) in the real part
};

struct EnergyResult {
  double value = 0.0;
  double quad_err = 0.0;
  double tail_bound = 0.0;
  double near_zero = 0.0;        // contribution assigned to [0, x_min]
  double probe_x = 0.0;          // grid-refinement probe location
  double probe_delta = 0.0;      // |Xi(2n) - Xi(n)| there
  int evaluations = 0;
  std::vector<Panel> panels;
  std::vector<EnergySample> samples;
};

// f(lambda) = lambda^{2a} e^{-t lambda^2}, i.e. g(z) = z^a e^{-t z}.
struct SmoothFunctionSpec {
  double a = 1.0;
  double t = 1.0;

  cplx f(cplx lambda) const;
  cplx fprime(cplx lambda) const;
};

EnergyResult casimir_energy(const Scene& scene, const BoundaryGrid& grid, const QuadConfig& cfg = {});
EnergyResult power_trace(const Scene& scene, const BoundaryGrid& grid, double s, const QuadConfig& cfg = {});

struct ContourConfig {
  double theta = 0.39269908169872414;  // pi / 8
  QuadConfig quad;
};
EnergyResult trace_df(const Scene& scene, const BoundaryGrid& grid, const SmoothFunctionSpec& f,
                      const ContourConfig& cfg = {});

// -int_0^infty f'(lambda) xi_rel(lambda) d lambda on the real axis.
struct BirmanKreinConfig {
  int order = 15;
  double tol = 1e-6;
  double lambda_max = 0.0;  // 0 selects the point where |f'| falls below 1e-14 of its peak
  int max_evaluations = 2000;
  ShiftOptions shift;
};
EnergyResult trace_df_birman_krein(const Scene& scene, const BoundaryGrid& grid, const SmoothFunctionSpec& f,
                                   const BirmanKreinConfig& cfg = {});

// Scene family with one separation parameter: obstacle `moving` is
// translated by s * direction from its position in `base`.
struct SeparationTemplate {
  Scene base;
  int moving = -1;         // -1 selects the last obstacle
  Vec2 direction{0, 0};    // zero selects the unit vector from obstacle 0 to `moving`
  std::vector<int> counts; // nodes per obstacle

  Scene at(double s) const;
};

struct ForceResult {
  double force = 0.0;  // -dE/ds; negative values pull the obstacle towards the others
  double energy_minus = 0.0;
  double energy_plus = 0.0;
  double h = 0.0;
  std::vector<Panel> panels;
};

ForceResult casimir_force(const SeparationTemplate& tmpl, double s, double h, const QuadConfig& cfg = {});

}  // namespace kcas
