#include "kcas/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "kcas/layer_ops.hpp"
#include "kcas/specfun.hpp"
#include "kcas/xi.hpp"

namespace kcas {
namespace {

void validate(const PartialWaveConfig& c) {
  if (!(c.a > 0.0 && c.b > 0.0 && c.kappa > 0.0)) throw OracleError("radii and kappa must be positive");
  if (!(c.d > c.a + c.b)) throw OracleError("disks must be disjoint: d > a + b");
}

// log sqrt(I_m(x)/K_m(x)); -inf when I_m underflows.
double log_sqrt_ratio(int m, double x) {
  const double i = specfun::bessel_i(m, x);
  const double k = specfun::bessel_k(m, x);
  if (i == 0.0) return -std::numeric_limits<double>::infinity();
  return 0.5 * (std::log(i) - std::log(k));
}

}  // namespace

int default_l_max(double kappa, double a, double b) {
  return static_cast<int>(std::ceil(8.0 + 3.0 * kappa * std::max(a, b)));
}

double xi_two_disks(const PartialWaveConfig& cfg) {
  validate(cfg);
  const int l = cfg.l_max > 0 ? cfg.l_max : default_l_max(cfg.kappa, cfg.a, cfg.b);
  if (l < 4) throw OracleError("l_max must be at least 4");
  if (2 * l > specfun::kMaxOrder) throw OracleError("l_max too large for the Bessel order cap");
  // Order the radii so that swapping them gives bitwise identical results.
  const double ra = std::min(cfg.a, cfg.b), rb = std::max(cfg.a, cfg.b);
  const int size = 2 * l + 1;
  std::vector<double> la(l + 1), lb(l + 1), lk(2 * l + 1);
  for (int m = 0; m <= l; ++m) {
    la[m] = log_sqrt_ratio(m, cfg.kappa * ra);
    lb[m] = log_sqrt_ratio(m, cfg.kappa * rb);
  }
  for (int n = 0; n <= 2 * l; ++n) lk[n] = std::log(specfun::bessel_k(n, cfg.kappa * cfg.d));
  Eigen::MatrixXd nmat(size, size);
  for (int m = -l; m <= l; ++m)
    for (int q = -l; q <= l; ++q) nmat(m + l, q + l) = std::exp(la[std::abs(m)] + lk[std::abs(m - q)] + lb[std::abs(q)]);
  const LogDet ld = log_det_identity_plus(Eigen::MatrixXd(-nmat * nmat.transpose()));
  if (ld.sign < 0.0) throw OracleError("partial-wave determinant is negative");
  return ld.log_abs;
}

CertifiedValue xi_two_disks_certified(const PartialWaveConfig& cfg, double tol) {
  PartialWaveConfig c = cfg;
  c.l_max = cfg.l_max > 0 ? cfg.l_max : default_l_max(cfg.kappa, cfg.a, cfg.b);
  PartialWaveConfig coarse = c;
  coarse.l_max = std::max(4, c.l_max - 10);
  CertifiedValue out;
  out.value = xi_two_disks(c);
  out.err = std::abs(out.value - xi_two_disks(coarse));
  out.l_max = c.l_max;
  if (out.err > tol) throw OracleError("partial-wave truncation not converged at l_max = " + std::to_string(c.l_max));
  return out;
}

ExtrapolatedValue xi_nystrom_extrapolated(const Scene& scene, double kappa, const std::vector<int>& n_sequence) {
  if (n_sequence.size() < 3) throw OracleError("extrapolation needs at least three grids");
  ExtrapolatedValue out;
  for (int n : n_sequence) out.sequence.push_back(xi_imag(scene, discretize(scene, n), kappa).xi.real());
  const std::size_t s = out.sequence.size();
  auto aitken = [&](std::size_t i, double& v) {
    const double x0 = out.sequence[i], x1 = out.sequence[i + 1], x2 = out.sequence[i + 2];
    const double d1 = x1 - x0, d2 = x2 - x1;
    // Monotone geometric convergence: same sign and shrinking.
    if (d1 == 0.0 || d2 == 0.0) {
      v = x2;
      return true;
    }
    if (!(std::abs(d2) < std::abs(d1)) || (d1 > 0) != (d2 > 0)) {
      // Errors already at rounding level count as converged.
      if (std::abs(d2) <= 1e-14 * (1.0 + std::abs(x2)) && std::abs(d1) <= 1e-13 * (1.0 + std::abs(x2))) {
        v = x2;
        return true;
      }
      return false;
    }
    v = x2 - d2 * d2 / (d2 - d1);
    return true;
  };
  double last = 0.0, prev = 0.0;
  if (!aitken(s - 3, last)) {
    out.value = out.sequence.back();
    out.err = std::abs(out.sequence[s - 1] - out.sequence[s - 2]);
    return out;
  }
  out.extrapolated = true;
  out.value = last;
  if (s >= 4 && aitken(s - 4, prev)) out.err = std::abs(last - prev);
  else out.err = std::abs(last - out.sequence.back());
  return out;
}

}  // namespace kcas
