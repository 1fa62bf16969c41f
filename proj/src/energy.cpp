#include "kcas/energy.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>
#include <numbers>

#include "kcas/parallel.hpp"

namespace kcas {
namespace {

constexpr double kPi = std::numbers::pi;

// Kronrod rule on [-1, 1] with the embedded Gauss weights (zero at
// Kronrod-only nodes).
struct Rule {
  std::vector<double> x, wk, wg;
};

template <int K, int G>
Rule make_rule() {
  using KR = boost::math::quadrature::gauss_kronrod<double, K>;
  using GR = boost::math::quadrature::gauss<double, G>;
  const auto ka = KR::abscissa();
  const auto kw = KR::weights();
  const auto ga = GR::abscissa();
  const auto gw = GR::weights();
  auto gauss_weight = [&](double x) {
    for (std::size_t i = 0; i < ga.size(); ++i)
      if (std::abs(ga[i] - x) < 1e-14) return gw[i];
    return 0.0;
  };
  Rule r;
  for (std::size_t i = ka.size(); i-- > 0;) {
    if (ka[i] == 0.0) continue;
    r.x.push_back(-ka[i]);
    r.wk.push_back(kw[i]);
    r.wg.push_back(gauss_weight(ka[i]));
  }
  for (std::size_t i = 0; i < ka.size(); ++i) {
    r.x.push_back(ka[i]);
    r.wk.push_back(kw[i]);
    r.wg.push_back(gauss_weight(ka[i]));
  }
  return r;
}

const Rule& rule(int order) {
  static const Rule r15 = make_rule<15, 7>(), r21 = make_rule<21, 10>(), r31 = make_rule<31, 15>(),
                    r41 = make_rule<41, 20>(), r51 = make_rule<51, 25>(), r61 = make_rule<61, 30>();
  switch (order) {
    case 15: return r15;
    case 21: return r21;
    case 31: return r31;
    case 41: return r41;
    case 51: return r51;
    case 61: return r61;
    default: throw EnergyError("quadrature order must be one of 15, 21, 31, 41, 51, 61");
  }
}

std::vector<double> panel_nodes(const Panel& p, const Rule& r) {
  std::vector<double> x(r.x.size());
  const double mid = 0.5 * (p.a + p.b), half = 0.5 * (p.b - p.a);
  for (std::size_t i = 0; i < r.x.size(); ++i) x[i] = mid + half * r.x[i];
  return x;
}

std::pair<Panel, Panel> split(const Panel& p) {
  const double m = p.geometric ? std::sqrt(p.a * p.b) : 0.5 * (p.a + p.b);
  return {{p.a, m, p.geometric}, {m, p.b, p.geometric}};
}

// Geometric panels from lo to knee (one per decade), then uniform panels of
// width `width` up to hi.
std::vector<Panel> initial_panels(double lo, double knee, double hi, double width) {
  std::vector<Panel> out;
  if (knee > hi) knee = hi;
  if (lo < knee) {
    const int decades = std::max(1, static_cast<int>(std::ceil(std::log10(knee / lo) - 1e-9)));
    const double ratio = std::pow(knee / lo, 1.0 / decades);
    double a = lo;
    for (int i = 0; i < decades; ++i) {
      const double b = i + 1 == decades ? knee : a * ratio;
      out.push_back({a, b, true});
      a = b;
    }
  }
  const double start = std::max(lo, knee);
  if (hi > start) {
    const int count = std::max(1, static_cast<int>(std::ceil((hi - start) / width - 1e-9)));
    const double w = (hi - start) / count;
    for (int i = 0; i < count; ++i) out.push_back({start + i * w, i + 1 == count ? hi : start + (i + 1) * w, false});
  }
  return out;
}

// Adaptive panel integration of sum_k integrand(x_k, value(x_k)) where
// `value` comes from a batched, possibly expensive evaluator. `finalize`
// may post-process the whole cache (branch unwrapping) before integration.
class Integrator {
 public:
  using Batch = std::function<std::vector<cplx>(const std::vector<double>&)>;
  using Finalize = std::function<void(std::map<double, cplx>&)>;
  using Integrand = std::function<double(double, cplx)>;

  Integrator(Batch batch, Integrand integrand, Finalize finalize, int order, int budget)
      : batch_(std::move(batch)), integrand_(std::move(integrand)), finalize_(std::move(finalize)),
        rule_(rule(order)), budget_(budget) {}

  struct Outcome {
    double value = 0.0;
    double err = 0.0;
    std::vector<Panel> panels;
  };

  Outcome run(std::vector<Panel> panels, double tol, bool adapt) {
    for (;;) {
      evaluate(panels);
      Outcome o;
      std::vector<double> errs(panels.size());
      for (std::size_t i = 0; i < panels.size(); ++i) {
        const auto [k, g] = integrate(panels[i]);
        o.value += k;
        errs[i] = std::abs(k - g);
        o.err += errs[i];
      }
      o.panels = panels;
      if (!adapt || o.err <= tol * std::abs(o.value) || o.err == 0.0) return o;
      const double share = tol * std::abs(o.value) / static_cast<double>(panels.size());
      const double worst = *std::max_element(errs.begin(), errs.end());
      std::vector<Panel> next;
      for (std::size_t i = 0; i < panels.size(); ++i) {
        if (errs[i] > share || errs[i] == worst) {
          const auto [l, r] = split(panels[i]);
          next.push_back(l);
          next.push_back(r);
        } else {
          next.push_back(panels[i]);
        }
      }
      panels = std::move(next);
      if (static_cast<int>(raw_.size() + panels.size() * rule_.x.size()) > budget_)
        throw EnergyError("panel refinement exceeded the evaluation budget (" + std::to_string(budget_) +
                          ") with error " + std::to_string(o.err) + " on value " + std::to_string(o.value));
    }
  }

  void evaluate_points(const std::vector<double>& xs) {
    std::vector<double> missing;
    for (double x : xs)
      if (!raw_.count(x)) missing.push_back(x);
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    if (missing.empty()) return;
    const std::vector<cplx> v = batch_(missing);
    for (std::size_t i = 0; i < missing.size(); ++i) raw_[missing[i]] = v[i];
    values_ = raw_;
    if (finalize_) finalize_(values_);
  }

  cplx value(double x) const { return values_.at(x); }
  const std::map<double, cplx>& values() const { return values_; }
  int evaluations() const { return static_cast<int>(raw_.size()); }

 private:
  void evaluate(const std::vector<Panel>& panels) {
    std::vector<double> xs;
    for (const Panel& p : panels) {
      const auto n = panel_nodes(p, rule_);
      xs.insert(xs.end(), n.begin(), n.end());
    }
    evaluate_points(xs);
  }

  std::pair<double, double> integrate(const Panel& p) const {
    const auto xs = panel_nodes(p, rule_);
    const double half = 0.5 * (p.b - p.a);
    double k = 0.0, g = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double f = integrand_(xs[i], values_.at(xs[i]));
      k += rule_.wk[i] * f;
      g += rule_.wg[i] * f;
    }
    return {half * k, half * g};
  }

  Batch batch_;
  Integrand integrand_;
  Finalize finalize_;
  const Rule& rule_;
  int budget_;
  std::map<double, cplx> raw_, values_;
};

double delta_prime(const Scene& scene, const QuadConfig& cfg) {
  return cfg.delta_prime_factor * scene.gap();
}

std::vector<cplx> xi_imag_batch(const Scene& scene, const BoundaryGrid& grid, const XiOptions& opt,
                                const std::vector<double>& ks) {
  std::vector<cplx> out(ks.size());
  parallel_for(0, static_cast<int>(ks.size()), [&](int i) { out[i] = xi_imag(scene, grid, ks[i], opt).xi; });
  return out;
}

std::vector<int> doubled_counts(const BoundaryGrid& grid) {
  std::vector<int> c = grid.counts;
  for (int& n : c) n *= 2;
  return c;
}

// int_U^infty u^q e^{-c u^2} du for 2 c U^2 > max(q, 0).
double gauss_tail(double q, double c, double u) {
  const double denom = 2.0 * c * u - std::max(q, 0.0) / u;
  if (!(denom > 0.0)) return INFINITY;
  return std::pow(u, q) * std::exp(-c * u * u) / denom;
}

// Least-squares amplitude C of |xi| <= C e^{-rate x} over x in [x_max/10, x_max].
double fit_amplitude(const std::map<double, cplx>& values, double x_max, double rate) {
  double sum = 0.0;
  int count = 0;
  for (const auto& [x, v] : values) {
    if (x < 0.1 * x_max || x > x_max) continue;
    const double m = std::abs(v);
    if (m == 0.0) continue;
    sum += std::log(m) + rate * x;
    ++count;
  }
  return count ? std::exp(sum / count) : 0.0;
}

std::vector<EnergySample> collect(const std::map<double, cplx>& values) {
  std::vector<EnergySample> s;
  s.reserve(values.size());
  for (const auto& [x, v] : values) s.push_back({x, v});
  return s;
}

// (prefactor) * int_0^infty kappa^p Xi(i kappa) d kappa.
EnergyResult imaginary_axis_integral(const Scene& scene, const BoundaryGrid& grid, double p, double prefactor,
                                     const QuadConfig& cfg) {
  EnergyResult res;
  if (scene.size() == 1) return res;
  const double dp = delta_prime(scene, cfg);
  const double lo = cfg.x_min > 0.0 ? cfg.x_min : default_kappa_min(scene);
  const double hi = cfg.x_max > 0.0 ? cfg.x_max : 30.0 / dp;
  if (!(hi > lo)) throw EnergyError("empty integration range");
  XiOptions xo = cfg.xi;
  xo.kappa_min = std::min(xo.kappa_min > 0.0 ? xo.kappa_min : lo, lo);
  Integrator in([&](const std::vector<double>& ks) { return xi_imag_batch(scene, grid, xo, ks); },
                [&](double k, cplx xi) { return std::pow(k, p) * xi.real(); }, nullptr, cfg.order,
                cfg.max_evaluations);
  const bool adapt = cfg.fixed_panels.empty();
  const std::vector<Panel> start =
      adapt ? initial_panels(lo, 1.0 / scene.gap(), hi, 2.0 / scene.gap()) : cfg.fixed_panels;
  const auto o = in.run(start, cfg.tol, adapt);
  in.evaluate_points({lo});

  // [0, lo]: Xi varies only logarithmically there.
  const double seg = std::pow(lo, p + 1.0) / (p + 1.0);
  double first_max = 0.0;
  for (const auto& [k, v] : in.values())
    if (k <= o.panels.front().b) first_max = std::max(first_max, std::abs(v));
  res.near_zero = prefactor * seg * in.value(lo).real();

  const double c = fit_amplitude(in.values(), hi, dp);
  const double tail_integral = std::pow(hi, p) * std::exp(-dp * hi) / (dp - std::max(p, 0.0) / hi);
  res.tail_bound = std::abs(prefactor) * c * tail_integral;
  res.value = prefactor * o.value + res.near_zero;
  res.quad_err = std::abs(prefactor) * (o.err + seg * first_max);
  res.panels = o.panels;
  res.evaluations = in.evaluations();
  if (cfg.keep_samples) res.samples = collect(in.values());
  if (cfg.probe) {
    res.probe_x = 1.0 / scene.gap();
    const BoundaryGrid fine = discretize(scene, doubled_counts(grid));
    res.probe_delta = std::abs(xi_imag(scene, fine, res.probe_x, xo).xi.real() -
                               xi_imag(scene, grid, res.probe_x, xo).xi.real());
  }
  return res;
}

}  // namespace

EnergyResult casimir_energy(const Scene& scene, const BoundaryGrid& grid, const QuadConfig& cfg) {
  return imaginary_axis_integral(scene, grid, 0.0, 1.0 / kPi, cfg);
}

EnergyResult power_trace(const Scene& scene, const BoundaryGrid& grid, double s, const QuadConfig& cfg) {
  if (s == 1.0) return {};
  if (!(s > 0.0 && s < 1.0)) throw EnergyError("power_trace needs 0 < s <= 1");
  const double prefactor = 2.0 * s / kPi * std::sin(kPi * s);
  return imaginary_axis_integral(scene, grid, 2.0 * s - 1.0, prefactor, cfg);
}

// ---- contour traces ----------------------------------------------------

cplx SmoothFunctionSpec::f(cplx lambda) const {
  return std::pow(lambda, 2.0 * a) * std::exp(-t * lambda * lambda);
}

cplx SmoothFunctionSpec::fprime(cplx lambda) const {
  const cplx l2 = lambda * lambda;
  return (2.0 * a * std::pow(lambda, 2.0 * a - 1.0) - 2.0 * t * std::pow(lambda, 2.0 * a + 1.0)) * std::exp(-t * l2);
}

namespace {

void check_spec(const SmoothFunctionSpec& f) {
  if (!(f.a > 0.0)) throw EnergyError("function family needs a > 0");
  if (!(f.t >= 0.0)) throw EnergyError("function family needs t >= 0");
}

// Smallest U (doubling search, then bisection) with envelope(U) below
// rel * max envelope.
template <class Env>
double decay_cutoff(Env env, double start, double rel) {
  double peak = 0.0, u = start;
  for (int i = 0; i < 200 && env(u) >= peak; ++i, u *= 1.25) peak = std::max(peak, env(u));
  while (env(u) > rel * peak) u *= 1.25;
  double lo = u / 1.25, hi = u;
  for (int i = 0; i < 60; ++i) {
    const double m = 0.5 * (lo + hi);
    (env(m) > rel * peak ? lo : hi) = m;
  }
  return hi;
}

}  // namespace

EnergyResult trace_df(const Scene& scene, const BoundaryGrid& grid, const SmoothFunctionSpec& f,
                      const ContourConfig& cfg) {
  check_spec(f);
  const double theta = cfg.theta;
  if (!(f.t > 0.0)) throw EnergyError("trace_df needs t > 0; use power_trace for pure powers");
  if (!(theta > 0.0 && theta < 0.25 * kPi))
    throw EnergyError("contour angle must satisfy 0 < theta < pi/4 so that e^{-t lambda^2} decays on the rays");
  EnergyResult res;
  if (scene.size() == 1) return res;
  const QuadConfig& q = cfg.quad;
  const double dp = delta_prime(scene, q);
  const double rate = dp * std::sin(theta);
  const double c2 = f.t * std::cos(2.0 * theta);
  const cplx dir = std::polar(1.0, theta);
  auto envelope = [&](double u) {
    return (2.0 * f.a * std::pow(u, 2.0 * f.a - 1.0) + 2.0 * f.t * std::pow(u, 2.0 * f.a + 1.0)) *
           std::exp(-c2 * u * u - rate * u);
  };
  const double lo = q.x_min > 0.0 ? q.x_min : default_kappa_min(scene);
  const double hi = q.x_max > 0.0 ? q.x_max : std::min(30.0 / rate, decay_cutoff(envelope, 1.0 / scene.gap(), 1e-17));
  if (!(hi > lo)) throw EnergyError("empty integration range");
  const BranchOptions bopt;

  auto batch = [&](const std::vector<double>& us) {
    std::vector<cplx> out(us.size());
    parallel_for(0, static_cast<int>(us.size()), [&](int i) {
      out[i] = xi_principal(scene, grid, SpectralPoint::ray(us[i], theta), q.xi).xi;
    });
    return out;
  };
  // Continuity from the far end of the ray, where Xi is close to 0.
  auto unwrap = [&](std::map<double, cplx>& v) {
    double prev = 0.0;
    bool first = true;
    for (auto it = v.rbegin(); it != v.rend(); ++it) {
      const double im = it->second.imag();
      const double k = std::round((prev - im) / (2.0 * kPi));
      const double cur = im + 2.0 * kPi * k;
      if (!first && std::abs(cur - prev) > bopt.max_jump)
        throw EnergyError("phase jump above pi/2 between ray samples near u = " + std::to_string(it->first));
      it->second = {it->second.real(), cur};
      prev = cur;
      first = false;
    }
  };
  // Both rays combine to (1/pi) Im of the first-ray integral.
  Integrator in(batch, [&](double u, cplx xi) { return (f.fprime(u * dir) * xi * dir).imag() / kPi; }, unwrap,
                q.order, q.max_evaluations);
  const bool adapt = q.fixed_panels.empty();
  const std::vector<Panel> start = adapt ? initial_panels(lo, 1.0 / scene.gap(), hi, 2.0 / scene.gap()) : q.fixed_panels;
  const auto o = in.run(start, q.tol, adapt);
  in.evaluate_points({lo});

  double first_max = 0.0;
  for (const auto& [u, v] : in.values())
    if (u <= o.panels.front().b) first_max = std::max(first_max, std::abs(v));
  res.near_zero = (in.value(lo) * f.f(lo * dir)).imag() / kPi;
  const double seg_bound = (std::pow(lo, 2.0 * f.a) + f.t * std::pow(lo, 2.0 * f.a + 2.0) / (f.a + 1.0)) / kPi;

  const double c = fit_amplitude(in.values(), hi, rate);
  const double tail_integral = (2.0 * f.a * gauss_tail(2.0 * f.a - 1.0, c2, hi) + 2.0 * f.t * gauss_tail(2.0 * f.a + 1.0, c2, hi));
  res.tail_bound = c * std::exp(-rate * hi) * tail_integral / kPi;
  res.value = o.value + res.near_zero;
  res.quad_err = o.err + seg_bound * first_max;
  res.panels = o.panels;
  res.evaluations = in.evaluations();
  if (q.keep_samples) res.samples = collect(in.values());
  if (q.probe) {
    res.probe_x = 1.0 / scene.gap();
    const BoundaryGrid fine = discretize(scene, doubled_counts(grid));
    const SpectralPoint sp = SpectralPoint::ray(res.probe_x, theta);
    res.probe_delta = std::abs(xi_principal(scene, fine, sp, q.xi).xi - xi_principal(scene, grid, sp, q.xi).xi);
  }
  return res;
}

EnergyResult trace_df_birman_krein(const Scene& scene, const BoundaryGrid& grid, const SmoothFunctionSpec& f,
                                   const BirmanKreinConfig& cfg) {
  check_spec(f);
  EnergyResult res;
  if (scene.size() == 1) return res;
  auto envelope = [&](double l) { return std::abs(f.fprime(l)) + std::abs(f.fprime(1.01 * l)); };
  const double lo = 1e-4 / scene.gap();
  const double hi = cfg.lambda_max > 0.0 ? cfg.lambda_max : decay_cutoff(envelope, lo, 1e-14);
  auto batch = [&](const std::vector<double>& ls) {
    std::vector<cplx> out(ls.size());
    parallel_for(0, static_cast<int>(ls.size()), [&](int i) { out[i] = xi_rel(scene, grid, ls[i], cfg.shift).xi_rel; });
    return out;
  };
  Integrator in(batch, [&](double l, cplx xr) { return -f.fprime(l).real() * xr.real(); }, nullptr, cfg.order,
                cfg.max_evaluations);
  const auto o = in.run(initial_panels(lo, 1.0 / scene.gap(), hi, 0.5 / scene.gap()), cfg.tol, true);
  in.evaluate_points({lo});
  // xi_rel is bounded near 0 and f(0) = 0.
  res.near_zero = -f.f(lo).real() * in.value(lo).real();
  res.value = o.value + res.near_zero;
  res.quad_err = o.err + 2.0 * std::abs(res.near_zero);
  // Beyond hi, |f'| is below 1e-14 of its peak and |xi_rel| grows at most
  // like the Weyl term, bounded here by the largest sampled value.
  double xmax = 0.0;
  for (const auto& [l, v] : in.values()) xmax = std::max(xmax, std::abs(v));
  res.tail_bound = xmax * std::abs(f.f(hi));
  res.panels = o.panels;
  res.evaluations = in.evaluations();
  res.samples = collect(in.values());
  return res;
}

// ---- forces ------------------------------------------------------------

Scene SeparationTemplate::at(double s) const {
  const int n = static_cast<int>(base.size());
  const int j = moving < 0 ? n - 1 : moving;
  if (j < 0 || j >= n) throw EnergyError("moving obstacle index out of range");
  Vec2 dir = direction;
  if (dir.norm() == 0.0) {
    if (j == 0) throw EnergyError("default direction needs the moving obstacle to differ from obstacle 0");
    dir = base.obstacle(j).center() - base.obstacle(0).center();
  }
  if (dir.norm() == 0.0) throw EnergyError("separation direction is zero");
  dir.normalize();
  std::vector<Curve> curves;
  for (int i = 0; i < n; ++i) curves.push_back(i == j ? base.obstacle(i).translated(s * dir) : base.obstacle(i));
  return Scene(std::move(curves));
}

ForceResult casimir_force(const SeparationTemplate& tmpl, double s, double h, const QuadConfig& cfg) {
  if (!(h > 0.0)) throw EnergyError("force step must be positive");
  if (tmpl.base.size() < 2) throw EnergyError("force needs at least two obstacles");
  ForceResult out;
  out.h = h;
  const Scene mid = tmpl.at(s);
  Scene minus = mid;
  try {
    minus = tmpl.at(s - h);
  } catch (const SceneError& e) {
    throw EnergyError(std::string("scene at separation - h is invalid: ") + e.what());
  }
  const Scene plus = tmpl.at(s + h);
  const auto grid_of = [&](const Scene& sc) {
    return tmpl.counts.empty() ? discretize(sc, 64) : discretize(sc, tmpl.counts);
  };
  // Fix the panels and kappa range from the central scene so both sides
  // share the same quadrature nodes.
  QuadConfig c = cfg;
  c.keep_samples = false;
  c.probe = false;
  if (c.x_min <= 0.0) c.x_min = default_kappa_min(minus);
  if (c.x_max <= 0.0) c.x_max = 30.0 / delta_prime(mid, cfg);
  if (c.fixed_panels.empty()) c.fixed_panels = casimir_energy(mid, grid_of(mid), c).panels;
  out.panels = c.fixed_panels;
  out.energy_minus = casimir_energy(minus, grid_of(minus), c).value;
  out.energy_plus = casimir_energy(plus, grid_of(plus), c).value;
  out.force = -(out.energy_plus - out.energy_minus) / (2.0 * h);
  return out;
}

}  // namespace kcas
