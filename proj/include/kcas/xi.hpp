#pragma once

// Xi(lambda) = log det(Q Qdiag^{-1}), its derivative, the relative
// resolvent trace and the relative spectral shift function.

#include <stdexcept>
#include <string>

#include "kcas/geometry.hpp"
#include "kcas/kernel.hpp"

namespace kcas {

class XiError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class XiMethod {
  structured,    // log det(1 + Qdiag^{-1} T) from block solves
  lu_difference  // logdet(Q) - logdet(Qdiag)
};

struct XiOptions {
  XiMethod method = XiMethod::structured;
  double kappa_min = 0.0;  // 0 selects 1e-6 / gap
  bool warn_on_negative_pivots = true;
};

struct XiSample {
  SpectralPoint sp;
  cplx xi;
  int branch_offset = 0;  // multiples of 2 pi removed from Im xi by unwrapping
  double err_est = 0.0;
  double pivot_ratio = 1.0;  // smallest min/max pivot ratio among the factorizations used
  int negative_pivots = 0;   // imaginary axis: negative LU pivots of the Qdiag blocks
};

double default_kappa_min(const Scene& scene);

XiSample xi_imag(const Scene& scene, const BoundaryGrid& grid, double kappa, const XiOptions& opt = {});

// Xi at any point of the upper half plane with Im Xi reduced to (-pi, pi].
XiSample xi_principal(const Scene& scene, const BoundaryGrid& grid, const SpectralPoint& sp,
                      const XiOptions& opt = {});

cplx xi_prime(const Scene& scene, const BoundaryGrid& grid, const SpectralPoint& sp);

struct TraceRrel {
  cplx value;   // -Xi'(lambda) / 2 lambda from the difference-structured trace
  cplx direct;  // (1/2 lambda) Tr(dQ Q^{-1} T Qdiag^{-1}), from the resolvent difference
};
TraceRrel trace_rrel(const Scene& scene, const BoundaryGrid& grid, const SpectralPoint& sp);

struct BranchOptions {
  double max_jump = 1.5707963267948966;  // max |delta Im Xi| per accepted path step
  double initial_step = 0.2;             // arc step in radians
  double min_step = 1e-9;
  double min_pivot_ratio = 1e-13;  // below this a path point counts as singular
  int max_eta_doublings = 4;
};

// Real-axis Xi at lambda + i eta, branch fixed by continuity from the
// imaginary axis along the arc |mu| = |lambda + i eta|.
XiSample xi_real(const Scene& scene, const BoundaryGrid& grid, double lambda, double eta,
                 const BranchOptions& opt = {});

struct ShiftSample {
  double lambda = 0.0;
  double xi_rel = 0.0;
  double eta_used = 0.0;
  double err_est = 0.0;
  // Raw values -Im Xi(lambda + i k eta)/pi at k = 1, 2, 4.
  double raw[3] = {0.0, 0.0, 0.0};
};

struct ShiftOptions {
  double eta0 = 0.0;  // 0 selects 1e-3 lambda
  BranchOptions branch;
};

ShiftSample xi_rel(const Scene& scene, const BoundaryGrid& grid, double lambda, const ShiftOptions& opt = {});

}  // namespace kcas
