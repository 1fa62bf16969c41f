#include "kcas/fields.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace kcas {

FieldPoint make_field_point(const Scene& scene, const Vec2& x) {
  FieldPoint p;
  p.x = x;
  p.dist = INFINITY;
  bool inside = false;
  for (const Curve& c : scene.obstacles()) {
    p.dist = std::min(p.dist, point_distance(c, x));
    inside = inside || encloses(c, x);
  }
  p.valid = !inside && p.dist > 0.0;
  return p;
}

double field_standoff(const Scene& scene) {
  if (scene.size() >= 2) return 0.1 * scene.gap();
  const BoundaryGrid g = discretize(scene, 256);
  return 0.1 * g.perimeter(0) / (2.0 * std::numbers::pi);
}

FieldSolver::FieldSolver(const Scene& scene, const BoundaryGrid& grid, const SpectralPoint& sp)
    : scene_(&scene), grid_(&grid), sp_(sp), standoff_(field_standoff(scene)), q_(assemble_q(grid, sp)) {
  fq_ = std::make_shared<const Factorization>(q_);
  for (const BlockRange& b : grid.blocks) {
    if (q_.real_storage) blocks_.emplace_back(Eigen::MatrixXd(q_.re.block(b.begin, b.begin, b.size(), b.size())));
    else blocks_.emplace_back(Eigen::MatrixXcd(q_.cx.block(b.begin, b.begin, b.size(), b.size())));
  }
}

void FieldSolver::check(const FieldPoint& p) const {
  if (!p.valid) throw FieldError("field point lies inside an obstacle or on a boundary");
  if (p.dist <= standoff_)
    throw FieldError("field point at distance " + std::to_string(p.dist) + " is within the standoff " +
                     std::to_string(standoff_) + " of the boundary");
}

Eigen::VectorXcd FieldSolver::boundary_values(const FieldPoint& p) const {
  const int n = grid_->size();
  Eigen::VectorXcd g(n);
  for (int i = 0; i < n; ++i) g[i] = green_free(2, sp_, (grid_->points[i] - p.x).norm());
  return g;
}

cplx FieldSolver::resolvent_diff(const FieldPoint& x, const FieldPoint& y) const {
  check(x);
  check(y);
  const Eigen::VectorXcd gx = boundary_values(x), gy = boundary_values(y);
  const Eigen::VectorXcd u = fq_->solve(gx);
  cplx s = 0.0;
  for (int i = 0; i < grid_->size(); ++i) s += gy[i] * grid_->weights[i] * u[i];
  return -s;
}

cplx FieldSolver::rel_resolvent(const FieldPoint& x, const FieldPoint& y) const {
  check(x);
  check(y);
  if (scene_->size() == 1) return 0.0;
  const Eigen::VectorXcd gx = boundary_values(x), gy = boundary_values(y);
  // Q^{-1} - Qdiag^{-1} = -Q^{-1} T Qdiag^{-1}.
  Eigen::VectorXcd v(gx.size());
  for (std::size_t j = 0; j < grid_->blocks.size(); ++j) {
    const BlockRange& b = grid_->blocks[j];
    v.segment(b.begin, b.size()) = blocks_[j].solve(Eigen::VectorXcd(gx.segment(b.begin, b.size())));
  }
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(gx.size());
  for (const BlockRange& r : grid_->blocks)
    for (const BlockRange& c : grid_->blocks) {
      if (r.begin == c.begin) continue;
      if (q_.real_storage)
        w.segment(r.begin, r.size()) += q_.re.block(r.begin, c.begin, r.size(), c.size()) * v.segment(c.begin, c.size());
      else
        w.segment(r.begin, r.size()) += q_.cx.block(r.begin, c.begin, r.size(), c.size()) * v.segment(c.begin, c.size());
    }
  const Eigen::VectorXcd u = fq_->solve(w);
  cplx s = 0.0;
  for (int i = 0; i < grid_->size(); ++i) s += gy[i] * grid_->weights[i] * u[i];
  return s;
}

cplx resolvent_diff_kernel(const Scene& scene, const BoundaryGrid& grid, const SpectralPoint& sp,
                           const FieldPoint& x, const FieldPoint& y) {
  return FieldSolver(scene, grid, sp).resolvent_diff(x, y);
}

cplx rel_resolvent_kernel(const Scene& scene, const BoundaryGrid& grid, const SpectralPoint& sp,
                          const FieldPoint& x, const FieldPoint& y) {
  return FieldSolver(scene, grid, sp).rel_resolvent(x, y);
}

}  // namespace kcas
