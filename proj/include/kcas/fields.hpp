#pragma once

// Pointwise kernels of the resolvent difference and of the relative
// resolvent at points away from the obstacles.

#include <memory>
#include <stdexcept>

#include "kcas/geometry.hpp"
#include "kcas/kernel.hpp"
#include "kcas/layer_ops.hpp"

namespace kcas {

class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FieldPoint {
  Vec2 x{0, 0};
  double dist = 0.0;  // distance to the union of the boundaries
  bool valid = false; // outside every obstacle and dist > 0
};

FieldPoint make_field_point(const Scene& scene, const Vec2& x);

// Smallest admissible distance to the boundary: 0.1 gap, or 0.1 times the
// perimeter over 2 pi for a single obstacle.
double field_standoff(const Scene& scene);

// Factorizations of Q and of the diagonal blocks at one spectral point,
// shared by any number of kernel evaluations.
class FieldSolver {
 public:
  FieldSolver(const Scene& scene, const BoundaryGrid& grid, const SpectralPoint& sp);

  // k(x, y) = -<G(y, .), Q^{-1} G(x, .)> over the boundary.
  cplx resolvent_diff(const FieldPoint& x, const FieldPoint& y) const;
  // Same with Q^{-1} replaced by Q^{-1} - Qdiag^{-1}.
  cplx rel_resolvent(const FieldPoint& x, const FieldPoint& y) const;

  const SpectralPoint& spectral_point() const { return sp_; }

 private:
  Eigen::VectorXcd boundary_values(const FieldPoint& p) const;
  void check(const FieldPoint& p) const;

  const Scene* scene_;
  const BoundaryGrid* grid_;
  SpectralPoint sp_;
  double standoff_;
  LayerMatrix q_;
  std::shared_ptr<const Factorization> fq_;
  std::vector<Factorization> blocks_;
};

cplx resolvent_diff_kernel(const Scene& scene, const BoundaryGrid& grid, const SpectralPoint& sp,
                           const FieldPoint& x, const FieldPoint& y);
cplx rel_resolvent_kernel(const Scene& scene, const BoundaryGrid& grid, const SpectralPoint& sp,
                          const FieldPoint& x, const FieldPoint& y);

}  // namespace kcas
