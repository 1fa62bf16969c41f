#pragma once

// Obstacle boundaries, scenes and Nystrom boundary grids.

#include <Eigen/Core>
#include <limits>
#include <stdexcept>
#include <vector>

namespace kcas {

using Vec2 = Eigen::Vector2d;

class SceneError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class CurveKind { circle, ellipse, kite, polar_fourier };

const char* to_string(CurveKind kind);

// A smooth closed curve t -> center + R(rotation) * shape(t), t in [0, 2pi),
// traversed counterclockwise.
class Curve {
 public:
  CurveKind kind() const { return kind_; }
  const Vec2& center() const { return center_; }
  double rotation() const { return rotation_; }
  // circle: {radius}; ellipse: {a, b}; kite: {scale};
  // polar_fourier: {c0, a1, b1, a2, b2, ...} for r(t) = c0 + sum a_k cos kt + b_k sin kt.
  const std::vector<double>& params() const { return params_; }

  Vec2 point(double t) const;
  Vec2 d1(double t) const;
  Vec2 d2(double t) const;
  double speed(double t) const { return d1(t).norm(); }

  Curve translated(const Vec2& shift) const;
  Curve rotated(double angle) const;  // about the origin
  Curve scaled(double sigma) const;   // about the origin

 private:
  friend Curve make_circle(const Vec2&, double);
  friend Curve make_ellipse(const Vec2&, double, double, double);
  friend Curve make_kite(const Vec2&, double, double);
  friend Curve make_polar_fourier(const Vec2&, std::vector<double>, double);

  Curve(CurveKind kind, Vec2 center, double rotation, std::vector<double> params)
      : kind_(kind), center_(std::move(center)), rotation_(rotation), params_(std::move(params)) {}

  // Local shape and its derivatives before rotation and translation.
  Vec2 local(double t, int derivative) const;
  Vec2 to_world(const Vec2& v) const;

  CurveKind kind_;
  Vec2 center_;
  double rotation_;
  std::vector<double> params_;
};

Curve make_circle(const Vec2& center, double radius);
Curve make_ellipse(const Vec2& center, double a, double b, double rotation = 0.0);
Curve make_kite(const Vec2& center, double scale, double rotation = 0.0);
Curve make_polar_fourier(const Vec2& center, std::vector<double> coefficients, double rotation = 0.0);

class Scene {
 public:
  // Validates pairwise disjointness; throws SceneError on overlap or nesting.
  explicit Scene(std::vector<Curve> obstacles);

  const std::vector<Curve>& obstacles() const { return obstacles_; }
  const Curve& obstacle(int j) const { return obstacles_.at(j); }
  int size() const { return static_cast<int>(obstacles_.size()); }
  // Minimal boundary-to-boundary distance; +infinity when N = 1.
  double gap() const { return gap_; }

  Scene translated(const Vec2& shift) const;
  Scene rotated(double angle) const;
  Scene scaled(double sigma) const;
  Scene subscene(int j) const;
  Scene permuted(const std::vector<int>& order) const;

 private:
  std::vector<Curve> obstacles_;
  double gap_;
};

struct MinGapOptions {
  int samples = 4096;
  int candidates = 8;  // distinct coarse minima refined by Newton
};

// Distance between two disjoint closed curves; throws SceneError on overlap or nesting.
double curve_distance(const Curve& a, const Curve& b, const MinGapOptions& opt = {});
double min_gap(const Scene& scene, const MinGapOptions& opt = {});
// Distance from p to the curve, and whether p lies in the enclosed region.
double point_distance(const Curve& c, const Vec2& p, int samples = 4096);
bool encloses(const Curve& c, const Vec2& p, int samples = 4096);
double min_gap(const std::vector<Curve>& curves, const MinGapOptions& opt = {});

struct BlockRange {
  int begin = 0;
  int end = 0;
  int size() const { return end - begin; }
};

struct BoundaryGrid {
  std::vector<int> counts;  // n_j per obstacle
  std::vector<BlockRange> blocks;
  std::vector<int> obstacle;  // owning obstacle of each node
  std::vector<double> t;
  std::vector<Vec2> points;
  std::vector<Vec2> tangents;  // x'(t), not normalized
  std::vector<Vec2> normals;   // outward unit normals
  std::vector<double> speeds;
  std::vector<double> weights;  // 2pi/n_j * |x'(t)|

  int size() const { return static_cast<int>(points.size()); }
  int num_blocks() const { return static_cast<int>(blocks.size()); }
  double perimeter(int j) const;
};

inline constexpr int kMinNodesPerObstacle = 16;

BoundaryGrid discretize(const Scene& scene, const std::vector<int>& n_per_obstacle);
BoundaryGrid discretize(const Scene& scene, int n);

}  // namespace kcas
