#include "kcas/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace kcas {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kKiteBend = 0.65;
constexpr double kKiteHeight = 1.5;

Vec2 rotate(const Vec2& v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw SceneError(std::string(what) + " must be positive and finite");
}

void require_placement(const Vec2& center, double rotation) {
  if (!center.allFinite() || !std::isfinite(rotation)) throw SceneError("curve center and rotation must be finite");
}

std::vector<Vec2> sample(const Curve& c, int count) {
  std::vector<Vec2> pts(count);
  for (int i = 0; i < count; ++i) pts[i] = c.point(kTwoPi * i / count);
  return pts;
}

bool inside_polygon(const Vec2& p, const std::vector<Vec2>& poly) {
  bool in = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x_cross = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x_cross) in = !in;
    }
  }
  return in;
}

double sq_dist(const Curve& a, const Curve& b, double t, double s) {
  return (a.point(t) - b.point(s)).squaredNorm();
}

// Golden-section minimization of f on [lo, hi].
template <class F>
double golden_min(F f, double lo, double hi) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-15 * std::max(1.0, std::abs(lo))) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

double refine_pair(const Curve& a, const Curve& b, double t, double s, double h) {
  double best = sq_dist(a, b, t, s);
  bool newton_ok = true;
  for (int it = 0; it < 50 && newton_ok; ++it) {
    const Vec2 d = a.point(t) - b.point(s);
    const Vec2 a1 = a.d1(t), b1 = b.d1(s), a2 = a.d2(t), b2 = b.d2(s);
    const double gt = a1.dot(d), gs = -b1.dot(d);
    const double htt = a2.dot(d) + a1.dot(a1);
    const double hss = -b2.dot(d) + b1.dot(b1);
    const double hts = -a1.dot(b1);
    const double det = htt * hss - hts * hts;
    if (!(htt > 0.0 && det > 0.0)) {
      newton_ok = false;
      break;
    }
    const double dt = -(hss * gt - hts * gs) / det;
    const double ds = -(htt * gs - hts * gt) / det;
    const double val = sq_dist(a, b, t + dt, s + ds);
    if (val > best * (1.0 + 1e-12) + 1e-300) {
      newton_ok = false;
      break;
    }
    t += dt;
    s += ds;
    best = std::min(best, val);
    if (std::abs(dt) + std::abs(ds) < 1e-15) break;
  }
  if (!newton_ok) {
    for (int round = 0; round < 60; ++round) {
      const double t_new = golden_min([&](double u) { return sq_dist(a, b, u, s); }, t - h, t + h);
      const double s_new = golden_min([&](double u) { return sq_dist(a, b, t_new, u); }, s - h, s + h);
      const double moved = std::abs(t_new - t) + std::abs(s_new - s);
      t = t_new;
      s = s_new;
      if (moved < 1e-14) break;
    }
    best = std::min(best, sq_dist(a, b, t, s));
  }
  return std::sqrt(best);
}

}  // namespace

const char* to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::circle: return "circle";
    case CurveKind::ellipse: return "ellipse";
    case CurveKind::kite: return "kite";
    case CurveKind::polar_fourier: return "polar_fourier";
  }
  return "unknown";
}

Vec2 Curve::local(double t, int derivative) const {
  const double c = std::cos(t), s = std::sin(t);
  switch (kind_) {
    case CurveKind::circle: {
      const double r = params_[0];
      if (derivative == 0) return {r * c, r * s};
      if (derivative == 1) return {-r * s, r * c};
      return {-r * c, -r * s};
    }
    case CurveKind::ellipse: {
      const double a = params_[0], b = params_[1];
      if (derivative == 0) return {a * c, b * s};
      if (derivative == 1) return {-a * s, b * c};
      return {-a * c, -b * s};
    }
    case CurveKind::kite: {
      const double k = params_[0];
      const double c2 = std::cos(2.0 * t), s2 = std::sin(2.0 * t);
      if (derivative == 0) return {k * (c + kKiteBend * c2 - kKiteBend), k * kKiteHeight * s};
      if (derivative == 1) return {k * (-s - 2.0 * kKiteBend * s2), k * kKiteHeight * c};
      return {k * (-c - 4.0 * kKiteBend * c2), -k * kKiteHeight * s};
    }
    case CurveKind::polar_fourier: {
      double r = params_[0], r1 = 0.0, r2 = 0.0;
      for (std::size_t k = 1; 2 * k < params_.size() + 1; ++k) {
        const double a = params_[2 * k - 1], b = params_[2 * k];
        const double kk = static_cast<double>(k);
        const double ck = std::cos(kk * t), sk = std::sin(kk * t);
        r += a * ck + b * sk;
        r1 += kk * (-a * sk + b * ck);
        r2 += -kk * kk * (a * ck + b * sk);
      }
      const Vec2 e{c, s}, e_perp{-s, c};
      if (derivative == 0) return r * e;
      if (derivative == 1) return r1 * e + r * e_perp;
      return (r2 - r) * e + 2.0 * r1 * e_perp;
    }
  }
  return Vec2::Zero();
}

Vec2 Curve::to_world(const Vec2& v) const { return rotate(v, rotation_); }

Vec2 Curve::point(double t) const { return center_ + to_world(local(t, 0)); }
Vec2 Curve::d1(double t) const { return to_world(local(t, 1)); }
Vec2 Curve::d2(double t) const { return to_world(local(t, 2)); }

Curve Curve::translated(const Vec2& shift) const {
  Curve c = *this;
  c.center_ += shift;
  return c;
}

Curve Curve::rotated(double angle) const {
  Curve c = *this;
  c.center_ = rotate(center_, angle);
  c.rotation_ += angle;
  return c;
}

Curve Curve::scaled(double sigma) const {
  require_positive(sigma, "scale factor");
  Curve c = *this;
  c.center_ *= sigma;
  for (double& p : c.params_) p *= sigma;
  return c;
}

Curve make_circle(const Vec2& center, double radius) {
  require_placement(center, 0.0);
  require_positive(radius, "circle radius");
  return Curve(CurveKind::circle, center, 0.0, {radius});
}

Curve make_ellipse(const Vec2& center, double a, double b, double rotation) {
  require_placement(center, rotation);
  require_positive(a, "ellipse semi-axis a");
  require_positive(b, "ellipse semi-axis b");
  return Curve(CurveKind::ellipse, center, rotation, {a, b});
}

Curve make_kite(const Vec2& center, double scale, double rotation) {
  require_placement(center, rotation);
  require_positive(scale, "kite scale");
  return Curve(CurveKind::kite, center, rotation, {scale});
}

Curve make_polar_fourier(const Vec2& center, std::vector<double> coefficients, double rotation) {
  require_placement(center, rotation);
  if (coefficients.empty() || coefficients.size() % 2 == 0)
    throw SceneError("polar_fourier needs coefficients [c0, a1, b1, ..., aK, bK]");
  for (double v : coefficients)
    if (!std::isfinite(v)) throw SceneError("polar_fourier coefficients must be finite");
  require_positive(coefficients[0], "polar_fourier constant coefficient");
  Curve c(CurveKind::polar_fourier, center, rotation, std::move(coefficients));
  constexpr int kChecks = 4096;
  for (int i = 0; i < kChecks; ++i) {
    const double t = kTwoPi * i / kChecks;
    const Vec2 loc = c.point(t) - center;
    const Vec2 dir = rotate(Vec2(std::cos(t), std::sin(t)), rotation);
    if (loc.dot(dir) <= 0.0) throw SceneError("polar_fourier radius must stay positive");
  }
  return c;
}

double curve_distance(const Curve& a, const Curve& b, const MinGapOptions& opt) {
  const int n = opt.samples;
  const std::vector<Vec2> pa = sample(a, n), pb = sample(b, n);
  for (const Vec2& p : pa)
    if (inside_polygon(p, pb)) throw SceneError("obstacles overlap or are nested");
  for (const Vec2& p : pb)
    if (inside_polygon(p, pa)) throw SceneError("obstacles overlap or are nested");

  std::vector<double> best(n);
  std::vector<int> partner(n);
  for (int i = 0; i < n; ++i) {
    double m = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (int j = 0; j < n; ++j) {
      const double d = (pa[i] - pb[j]).squaredNorm();
      if (d < m) {
        m = d;
        arg = j;
      }
    }
    best[i] = m;
    partner[i] = arg;
  }
  std::vector<int> minima;
  for (int i = 0; i < n; ++i) {
    const double l = best[(i + n - 1) % n], r = best[(i + 1) % n];
    if (best[i] <= l && best[i] <= r) minima.push_back(i);
  }
  std::sort(minima.begin(), minima.end(), [&](int x, int y) { return best[x] < best[y]; });
  if (static_cast<int>(minima.size()) > opt.candidates) minima.resize(opt.candidates);

  const double h = 2.0 * kTwoPi / n;
  double gap = std::numeric_limits<double>::infinity();
  for (int i : minima) {
    const double d = refine_pair(a, b, kTwoPi * i / n, kTwoPi * partner[i] / n, h);
    gap = std::min(gap, d);
  }
  if (!(gap > 0.0)) throw SceneError("obstacles touch or overlap");
  return gap;
}

double min_gap(const std::vector<Curve>& curves, const MinGapOptions& opt) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < curves.size(); ++j)
    for (std::size_t k = j + 1; k < curves.size(); ++k) gap = std::min(gap, curve_distance(curves[j], curves[k], opt));
  return gap;
}

double point_distance(const Curve& c, const Vec2& p, int samples) {
  const std::vector<Vec2> pts = sample(c, samples);
  auto f = [&](double t) { return (c.point(t) - p).squaredNorm(); };
  int arg = 0;
  for (int i = 1; i < samples; ++i)
    if ((pts[i] - p).squaredNorm() < (pts[arg] - p).squaredNorm()) arg = i;
  const double h = kTwoPi / samples;
  double t = kTwoPi * arg / samples, best = f(t);
  for (int it = 0; it < 50; ++it) {
    const Vec2 d = c.point(t) - p, x1 = c.d1(t);
    const double g = x1.dot(d), hh = c.d2(t).dot(d) + x1.dot(x1);
    if (!(hh > 0.0)) break;
    const double step = -g / hh;
    if (std::abs(step) > h || !(f(t + step) <= best)) break;
    t += step;
    best = f(t);
    if (std::abs(step) < 1e-15) break;
  }
  const double tg = golden_min(f, t - h, t + h);
  return std::sqrt(std::min(best, f(tg)));
}

bool encloses(const Curve& c, const Vec2& p, int samples) { return inside_polygon(p, sample(c, samples)); }

double min_gap(const Scene& scene, const MinGapOptions& opt) { return min_gap(scene.obstacles(), opt); }

Scene::Scene(std::vector<Curve> obstacles) : obstacles_(std::move(obstacles)) {
  if (obstacles_.empty()) throw SceneError("scene needs at least one obstacle");
  gap_ = min_gap(obstacles_);
}

Scene Scene::translated(const Vec2& shift) const {
  std::vector<Curve> c;
  for (const Curve& o : obstacles_) c.push_back(o.translated(shift));
  return Scene(std::move(c));
}

Scene Scene::rotated(double angle) const {
  std::vector<Curve> c;
  for (const Curve& o : obstacles_) c.push_back(o.rotated(angle));
  return Scene(std::move(c));
}

Scene Scene::scaled(double sigma) const {
  std::vector<Curve> c;
  for (const Curve& o : obstacles_) c.push_back(o.scaled(sigma));
  return Scene(std::move(c));
}

Scene Scene::subscene(int j) const { return Scene({obstacles_.at(j)}); }

Scene Scene::permuted(const std::vector<int>& order) const {
  if (order.size() != obstacles_.size()) throw SceneError("permutation size mismatch");
  std::vector<Curve> c;
  for (int j : order) c.push_back(obstacles_.at(j));
  return Scene(std::move(c));
}

double BoundaryGrid::perimeter(int j) const {
  const BlockRange& b = blocks.at(j);
  double sum = 0.0;
  for (int i = b.begin; i < b.end; ++i) sum += weights[i];
  return sum;
}

BoundaryGrid discretize(const Scene& scene, const std::vector<int>& n_per_obstacle) {
  if (static_cast<int>(n_per_obstacle.size()) != scene.size())
    throw SceneError("one node count per obstacle is required");
  BoundaryGrid g;
  g.counts = n_per_obstacle;
  const int total = std::accumulate(n_per_obstacle.begin(), n_per_obstacle.end(), 0);
  g.obstacle.reserve(total);
  g.t.reserve(total);
  g.points.reserve(total);
  g.tangents.reserve(total);
  g.normals.reserve(total);
  g.speeds.reserve(total);
  g.weights.reserve(total);
  int offset = 0;
  for (int j = 0; j < scene.size(); ++j) {
    const int n = n_per_obstacle[j];
    if (n % 2 != 0) throw SceneError("node counts must be even");
    if (n < kMinNodesPerObstacle) throw SceneError("node counts must be at least 16");
    const Curve& c = scene.obstacle(j);
    for (int i = 0; i < n; ++i) {
      const double t = kTwoPi * i / n;
      const Vec2 d = c.d1(t);
      const double sp = d.norm();
      if (!(sp > 0.0)) throw SceneError("curve is not regular");
      g.obstacle.push_back(j);
      g.t.push_back(t);
      g.points.push_back(c.point(t));
      g.tangents.push_back(d);
      g.normals.push_back(Vec2(d.y(), -d.x()) / sp);
      g.speeds.push_back(sp);
      g.weights.push_back(kTwoPi / n * sp);
    }
    g.blocks.push_back({offset, offset + n});
    offset += n;
  }
  return g;
}

BoundaryGrid discretize(const Scene& scene, int n) {
  return discretize(scene, std::vector<int>(scene.size(), n));
}

}  // namespace kcas
