#include "validate.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "kcas/oracle.hpp"
#include "kcas/specfun.hpp"
#include "kcas/xi.hpp"
#include "output.hpp"

namespace kcas::cli {
namespace {

using Results = std::vector<CheckResult>;

void add(Results& r, const std::string& suite, const std::string& name, bool pass, const std::string& detail) {
  r.push_back({suite, name, pass, detail});
}

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a * std::pow(b / a, n == 1 ? 0.0 : static_cast<double>(i) / (n - 1));
  return v;
}

SceneFile canonical() {
  SceneFile f{Scene({make_circle({0, 0}, 1), make_circle({4, 0}, 1)}), 128, {128, 128}, "canonical two disks"};
  return f;
}

void specfun_suite(Results& r) {
  double worst_jy = 0.0, worst_ik = 0.0;
  for (int n = 0; n <= 50; ++n)
    for (double x : {0.1, 1.0, 10.0, 100.0}) {
      const double w = specfun::bessel_j(n + 1, x) * specfun::bessel_y(n, x) - specfun::bessel_j(n, x) * specfun::bessel_y(n + 1, x);
      const double ref = 2.0 / (std::numbers::pi * x);
      if (std::isfinite(w)) worst_jy = std::max(worst_jy, std::abs(w - ref) / ref);
      const double v = specfun::bessel_i(n, x) * specfun::bessel_k(n + 1, x) + specfun::bessel_i(n + 1, x) * specfun::bessel_k(n, x);
      worst_ik = std::max(worst_ik, std::abs(v - 1.0 / x) * x);
    }
  add(r, "specfun", "J/Y Wronskian n<=50", worst_jy <= 1e-13, "max rel residual " + fmt(worst_jy));
  add(r, "specfun", "I/K Wronskian n<=50", worst_ik <= 1e-13, "max rel residual " + fmt(worst_ik));
}

void nullity_suite(Results& r) {
  const std::vector<std::pair<std::string, Curve>> shapes = {
      {"circle", make_circle({0.3, -0.2}, 1.0)}, {"ellipse", make_ellipse({0, 0}, 1.4, 0.6, 0.4)}, {"kite", make_kite({0, 0}, 1.0)}};
  for (const auto& [name, c] : shapes) {
    const Scene s({c});
    const BoundaryGrid g = discretize(s, 64);
    double worst = 0.0;
    for (double k : logspace(0.1, 10.0, 16)) worst = std::max(worst, std::abs(xi_imag(s, g, k).xi));
    add(r, "nullity", name, worst <= 1e-12, "max |Xi| " + fmt(worst));
  }
}

void scene_suites(Results& r, const std::string& which, const SceneFile& sf) {
  const Scene& s = sf.scene;
  const BoundaryGrid g = discretize(s, sf.counts);
  if (s.size() == 1) {
    add(r, which, "single obstacle", true, "Xi vanishes identically");
    return;
  }
  const double gap = s.gap();
  if (which == "realness") {
    double worst = 0.0;
    for (double k : logspace(0.1 / gap, 10.0 / gap, 8)) {
      const cplx x = xi_imag(s, g, k).xi;
      worst = std::max(worst, std::abs(x.imag()) / (1.0 + std::abs(x.real())));
    }
    add(r, which, "Im Xi(i kappa)", worst <= 1e-10, "max " + fmt(worst));
  } else if (which == "scaling") {
    const Scene s2 = s.scaled(2.0);
    const BoundaryGrid g2 = discretize(s2, sf.counts);
    double worst = 0.0;
    for (double k : {0.25 / gap, 0.5 / gap, 1.0 / gap}) {
      const double a = xi_imag(s2, g2, k).xi.real(), b = xi_imag(s, g, 2.0 * k).xi.real();
      worst = std::max(worst, std::abs(a - b) / std::abs(b));
    }
    add(r, which, "Xi_{2 scene}(i kappa) = Xi(2 i kappa)", worst <= 1e-10, "max rel " + fmt(worst));
  } else if (which == "decay") {
    const double dp = 0.9 * gap;
    const std::vector<double> ks = logspace(8.0 / gap, 16.0 / gap, 9);
    std::vector<double> v;
    for (double k : ks) v.push_back(std::abs(xi_imag(s, g, k).xi.real()));
    double worst = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i)
      for (std::size_t j = i + 1; j < ks.size(); ++j) worst = std::max(worst, v[j] - v[i] * std::exp(-dp * (ks[j] - ks[i])));
    add(r, which, "|Xi| envelope e^{-0.9 gap kappa}", worst <= 1e-14, "max excess " + fmt(worst));
  } else if (which == "permutation") {
    std::vector<int> order;
    for (int j = s.size() - 1; j >= 0; --j) order.push_back(j);
    const Scene p = s.permuted(order);
    std::vector<int> counts;
    for (int j : order) counts.push_back(sf.counts[j]);
    const BoundaryGrid gp = discretize(p, counts);
    double worst = 0.0;
    for (double k : {0.5 / gap, 1.0 / gap}) worst = std::max(worst, std::abs(xi_imag(s, g, k).xi - xi_imag(p, gp, k).xi));
    add(r, which, "relabeling obstacles", worst <= 1e-12, "max diff " + fmt(worst));
  }
}

void oracle_suite(Results& r) {
  const Scene s({make_circle({0, 0}, 1), make_circle({4, 0}, 1)});
  const BoundaryGrid g = discretize(s, 256);
  double worst = 0.0;
  for (double k : logspace(0.05, 5.0, 16)) {
    PartialWaveConfig c{40, 1.0, 1.0, 4.0, k};
    const double o = xi_two_disks_certified(c, 1e-12).value;
    worst = std::max(worst, std::abs(xi_imag(s, g, k).xi.real() - o) / (1.0 + std::abs(o)));
  }
  add(r, "oracle", "partial waves vs Nystrom n=256", worst <= 1e-8, "max scaled diff " + fmt(worst));
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"specfun", "nullity", "realness", "scaling", "decay", "permutation", "oracle", "all"};
  return names;
}

std::vector<CheckResult> run_suite(const std::string& suite, const std::optional<SceneFile>& scene) {
  Results r;
  const SceneFile sf = scene ? *scene : canonical();
  auto one = [&](const std::string& name) {
    try {
      if (name == "specfun") specfun_suite(r);
      else if (name == "nullity") nullity_suite(r);
      else if (name == "oracle") oracle_suite(r);
      else scene_suites(r, name, sf);
    } catch (const std::exception& e) {
      add(r, name, "exception", false, e.what());
    }
  };
  if (suite == "all") {
    for (const std::string& n : suite_names())
      if (n != "all") one(n);
  } else {
    bool known = false;
    for (const std::string& n : suite_names()) known = known || n == suite;
    if (!known) throw std::invalid_argument("unknown validation suite '" + suite + "'");
    one(suite);
  }
  return r;
}

std::string format_report(const std::vector<CheckResult>& results) {
  std::ostringstream os;
  int failed = 0;
  for (const CheckResult& c : results) {
    os << (c.pass ? "PASS" : "FAIL") << "  " << c.suite << ": " << c.name << "  (" << c.detail << ")\n";
    failed += c.pass ? 0 : 1;
  }
  os << results.size() - failed << "/" << results.size() << " checks passed\n";
  return os.str();
}

}  // namespace kcas::cli
