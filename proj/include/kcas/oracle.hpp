#pragma once

// Independent evaluations of Xi(i kappa): the two-disk partial-wave
// determinant and a Richardson-extrapolated Nystrom sequence.

#include <stdexcept>
#include <vector>

#include "kcas/geometry.hpp"

namespace kcas {

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PartialWaveConfig {
  int l_max = 0;  // 0 selects ceil(8 + 3 kappa max(a, b))
  double a = 1.0;
  double b = 1.0;
  double d = 4.0;  // center distance
  double kappa = 1.0;
};

int default_l_max(double kappa, double a, double b);

// log det(1 - N N^T) with N_{mq} = A_m K_{m-q}(kappa d) B_q over modes
// -l_max..l_max, A_m = sqrt(I_m(kappa a)/K_m(kappa a)), B_q likewise for b.
double xi_two_disks(const PartialWaveConfig& cfg);

struct CertifiedValue {
  double value = 0.0;
  double err = 0.0;  // |Xi(l_max) - Xi(l_max - 10)|
  int l_max = 0;
};
// Throws OracleError when the truncation check exceeds tol.
CertifiedValue xi_two_disks_certified(const PartialWaveConfig& cfg, double tol = 1e-12);

struct ExtrapolatedValue {
  double value = 0.0;
  double err = 0.0;
  bool extrapolated = false;     // false when convergence was not monotone
  std::vector<double> sequence;  // raw Xi(n) values
};
// Aitken-type extrapolation assuming geometric error decay along a geometric
// n_sequence (at least three terms).
ExtrapolatedValue xi_nystrom_extrapolated(const Scene& scene, double kappa, const std::vector<int>& n_sequence);

}  // namespace kcas
