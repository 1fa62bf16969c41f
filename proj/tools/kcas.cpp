// kcas: command-line front end for determinants, spectral shifts, traces,
// energies and forces of planar Dirichlet obstacle scenes.

#include <cmath>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kcas/energy.hpp"
#include "kcas/fields.hpp"
#include "kcas/layer_ops.hpp"
#include "kcas/oracle.hpp"
#include "kcas/parallel.hpp"
#include "kcas/scene_io.hpp"
#include "kcas/specfun.hpp"
#include "kcas/xi.hpp"
#include "output.hpp"
#include "validate.hpp"

namespace {

using namespace kcas;
using namespace kcas::cli;
using ojson = nlohmann::ordered_json;

constexpr int kExitParse = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitValidation = 4;

struct Common {
  std::string scene;
  int n = 0;
  int threads = 1;
  std::string output;
  bool emit_plot = false;
};

struct Loaded {
  SceneFile file;
  BoundaryGrid grid;
};

Loaded load(const Common& c) {
  SceneFile f = load_scene(c.scene);
  if (c.n > 0) {
    if (c.n % 2 != 0 || c.n < kMinNodesPerObstacle)
      throw SceneParseError("--n must be even and at least " + std::to_string(kMinNodesPerObstacle), 0);
    f.n = c.n;
    for (int& k : f.counts) k = c.n;
  }
  BoundaryGrid g = discretize(f.scene, f.counts);
  return {std::move(f), std::move(g)};
}

std::vector<int> doubled(const std::vector<int>& counts) {
  std::vector<int> d = counts;
  for (int& k : d) k *= 2;
  return d;
}

std::vector<double> logspace(double a, double b, int n) {
  if (!(a > 0.0 && b >= a) || n < 1) throw std::invalid_argument("log grid needs 0 < min <= max and count >= 1");
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a * std::pow(b / a, static_cast<double>(i) / (n - 1));
  return v;
}

std::vector<double> linspace(double a, double b, int n) {
  if (!(a > 0.0 && b >= a) || n < 1) throw std::invalid_argument("grid needs 0 < min <= max and count >= 1");
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

ojson scene_echo(const Loaded& l, const Common& c) {
  ojson j;
  j["scene"] = c.scene;
  j["obstacles"] = l.file.scene.size();
  j["counts"] = l.file.counts;
  j["gap"] = l.file.scene.gap();
  return j;
}

ojson quad_echo(const QuadConfig& q) {
  ojson j;
  j["order"] = q.order;
  j["tol"] = q.tol;
  j["x_min"] = q.x_min;
  j["x_max"] = q.x_max;
  j["delta_prime_factor"] = q.delta_prime_factor;
  return j;
}

ojson result_json(const EnergyResult& r, ojson config, bool samples) {
  ojson j;
  j["value"] = r.value;
  j["quad_err"] = r.quad_err;
  j["tail_bound"] = r.tail_bound;
  j["config"] = std::move(config);
  ojson d;
  d["near_zero"] = r.near_zero;
  d["evaluations"] = r.evaluations;
  d["panels"] = r.panels.size();
  d["probe_x"] = r.probe_x;
  d["probe_delta"] = r.probe_delta;
  j["diagnostics"] = d;
  if (samples) {
    ojson s = ojson::array();
    for (const EnergySample& e : r.samples) s.push_back({e.x, e.xi.real(), e.xi.imag()});
    j["samples"] = s;
  }
  return j;
}

void add_common(CLI::App* app, Common& c, bool scene_required = true) {
  auto* opt = app->add_option("--scene", c.scene, "scene file (JSON)");
  if (scene_required) opt->required()->check(CLI::ExistingFile);
  app->add_option("--n", c.n, "nodes per obstacle (overrides the scene file)");
  app->add_option("--threads", c.threads, "worker threads (0: all cores)");
  app->add_option("--output", c.output, "output file (default stdout)");
  app->add_flag("--emit-plot", c.emit_plot, "also write a matplotlib script next to the output");
}

void add_quad(CLI::App* app, QuadConfig& q) {
  app->add_option("--tol", q.tol, "relative quadrature tolerance");
  app->add_option("--kappa-min", q.x_min, "lower integration limit (default 1e-6/gap)");
  app->add_option("--kappa-max", q.x_max, "upper integration limit (default 30/(0.9 gap))");
  app->add_option("--order", q.order, "Gauss-Kronrod points per panel (15, 21, 31, 41, 51, 61)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary-layer determinants, spectral shifts and Casimir energies of planar obstacles"};
  app.require_subcommand(1);

  Common c;
  QuadConfig quad;
  bool samples = false;

  // xi
  std::string axis = "imag";
  double kmin = 0.05, kmax = 5.0, eta = 0.0;
  int kcount = 32;
  bool refine = true;
  auto* xi_cmd = app.add_subcommand("xi", "Xi on the imaginary or real axis, CSV");
  add_common(xi_cmd, c);
  xi_cmd->add_option("--axis", axis, "imag or real")->check(CLI::IsMember({"imag", "real"}));
  xi_cmd->add_option("--kappa-min", kmin, "first grid point (kappa, or lambda on the real axis)");
  xi_cmd->add_option("--kappa-max", kmax, "last grid point");
  xi_cmd->add_option("--kappa-count", kcount, "number of log-spaced points");
  xi_cmd->add_option("--eta", eta, "real axis: imaginary offset (default 1e-3 lambda)");
  xi_cmd->add_flag("!--no-refine", refine, "skip the doubled-grid error estimate");

  // shift
  double lmin = 0.1, lmax = 3.0;
  int lcount = 30;
  double eta0 = 0.0;
  auto* shift_cmd = app.add_subcommand("shift", "relative spectral shift function xi_rel, CSV");
  add_common(shift_cmd, c);
  shift_cmd->add_option("--lambda-min", lmin, "first lambda");
  shift_cmd->add_option("--lambda-max", lmax, "last lambda");
  shift_cmd->add_option("--lambda-count", lcount, "number of equispaced points");
  shift_cmd->add_option("--eta", eta0, "base offset eta0 (default 1e-3 lambda)");

  // energy / power
  auto* energy_cmd = app.add_subcommand("energy", "Casimir energy, JSON");
  add_common(energy_cmd, c);
  add_quad(energy_cmd, quad);
  energy_cmd->add_flag("--samples", samples, "include the (kappa, Xi) samples");

  double s = 0.5;
  auto* power_cmd = app.add_subcommand("power", "power trace for exponent s in (0, 1], JSON");
  add_common(power_cmd, c);
  add_quad(power_cmd, quad);
  power_cmd->add_option("--s", s, "exponent")->required();
  power_cmd->add_flag("--samples", samples, "include the samples");

  // tracedf
  SmoothFunctionSpec f;
  double theta = std::numbers::pi / 8.0;
  bool bk = false;
  bool t_given = false;
  auto* tracedf_cmd = app.add_subcommand("tracedf", "Tr D_f for f = lambda^{2a} e^{-t lambda^2} by the contour formula, JSON");
  add_common(tracedf_cmd, c);
  add_quad(tracedf_cmd, quad);
  tracedf_cmd->add_option("--a", f.a, "power a > 0");
  auto* t_opt = tracedf_cmd->add_option("--t", f.t, "Gaussian decay t > 0 (default gap^2)");
  tracedf_cmd->add_option("--theta", theta, "contour angle in (0, pi/4)");
  tracedf_cmd->add_flag("--birman-krein", bk, "also evaluate -int f' xi_rel on the real axis");
  tracedf_cmd->add_flag("--samples", samples, "include the ray samples");

  // force
  double h = 0.0;
  int moving = -1;
  auto* force_cmd = app.add_subcommand("force", "Casimir force on one obstacle by central differences, JSON");
  add_common(force_cmd, c);
  add_quad(force_cmd, quad);
  force_cmd->add_option("--step", h, "central-difference step (default 0.05 gap)");
  force_cmd->add_option("--moving", moving, "index of the displaced obstacle (default last)");

  // validate
  std::string suite = "all";
  auto* validate_cmd = app.add_subcommand("validate", "run invariant suites, exit 0 iff all pass");
  add_common(validate_cmd, c, false);
  validate_cmd->add_option("suite", suite, "suite name (default all)")->check(CLI::IsMember(suite_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }
  t_given = t_opt->count() > 0;

  try {
    set_num_threads(c.threads);

    if (*xi_cmd) {
      const Loaded l = load(c);
      const std::vector<double> grid = logspace(kmin, kmax, kcount);
      std::optional<BoundaryGrid> fine;
      if (refine) fine = discretize(l.file.scene, doubled(l.file.counts));
      std::vector<XiSample> out(grid.size());
      std::vector<double> err(grid.size(), 0.0);
      const bool imag = axis == "imag";
      parallel_for(0, static_cast<int>(grid.size()), [&](int i) {
        try {
          if (imag) {
            out[i] = xi_imag(l.file.scene, l.grid, grid[i]);
            if (fine) err[i] = std::abs(xi_imag(l.file.scene, *fine, grid[i]).xi - out[i].xi);
          } else {
            out[i] = xi_real(l.file.scene, l.grid, grid[i], eta);
            if (fine) err[i] = std::abs(xi_real(l.file.scene, *fine, grid[i], eta).xi - out[i].xi);
          }
        } catch (const std::exception& e) {
          throw XiError(std::string(e.what()) + " (at " + (imag ? "kappa = " : "lambda = ") + fmt(grid[i]) + ")");
        }
      });
      Csv csv({"kappa_or_lambda", "xi_re", "xi_im", "branch_offset", "err_est"});
      for (std::size_t i = 0; i < grid.size(); ++i)
        csv.row({grid[i], out[i].xi.real(), out[i].xi.imag(), static_cast<double>(out[i].branch_offset), err[i]});
      write_text(c.output, csv.str());
      if (c.emit_plot) emit_csv_plot(c.output, "kappa_or_lambda", {"xi_re", "xi_im"}, true, "Xi on the " + axis + " axis");
    } else if (*shift_cmd) {
      const Loaded l = load(c);
      const std::vector<double> grid = linspace(lmin, lmax, lcount);
      ShiftOptions so;
      so.eta0 = eta0;
      std::vector<ShiftSample> out(grid.size());
      parallel_for(0, static_cast<int>(grid.size()), [&](int i) {
        try {
          out[i] = xi_rel(l.file.scene, l.grid, grid[i], so);
        } catch (const std::exception& e) {
          throw XiError(std::string(e.what()) + " (at lambda = " + fmt(grid[i]) + ")");
        }
      });
      Csv csv({"lambda", "xi_rel", "eta_used", "err_est"});
      for (const ShiftSample& p : out) csv.row({p.lambda, p.xi_rel, p.eta_used, p.err_est});
      write_text(c.output, csv.str());
      if (c.emit_plot) emit_csv_plot(c.output, "lambda", {"xi_rel"}, false, "relative spectral shift");
    } else if (*energy_cmd || *power_cmd) {
      const Loaded l = load(c);
      const EnergyResult r = *energy_cmd ? casimir_energy(l.file.scene, l.grid, quad) : power_trace(l.file.scene, l.grid, s, quad);
      ojson cfg;
      cfg["command"] = *energy_cmd ? "energy" : "power";
      if (*power_cmd) cfg["s"] = s;
      cfg["scene"] = scene_echo(l, c);
      cfg["quad"] = quad_echo(quad);
      write_text(c.output, dump_json(result_json(r, cfg, samples)));
      if (c.emit_plot) emit_samples_plot(c.output, *energy_cmd ? "Xi(i kappa)" : "power trace integrand samples");
    } else if (*tracedf_cmd) {
      const Loaded l = load(c);
      if (!t_given) f.t = l.file.scene.gap() * l.file.scene.gap();
      ContourConfig cc;
      cc.theta = theta;
      cc.quad = quad;
      const EnergyResult r = trace_df(l.file.scene, l.grid, f, cc);
      ojson cfg;
      cfg["command"] = "tracedf";
      cfg["a"] = f.a;
      cfg["t"] = f.t;
      cfg["theta"] = theta;
      cfg["scene"] = scene_echo(l, c);
      cfg["quad"] = quad_echo(quad);
      ojson j = result_json(r, cfg, samples);
      if (bk) {
        const EnergyResult b = trace_df_birman_krein(l.file.scene, l.grid, f);
        ojson bj;
        bj["value"] = b.value;
        bj["quad_err"] = b.quad_err;
        bj["tail_bound"] = b.tail_bound;
        bj["relative_difference"] = std::abs(b.value - r.value) / std::abs(r.value);
        j["birman_krein"] = bj;
      }
      write_text(c.output, dump_json(j));
      if (c.emit_plot) emit_samples_plot(c.output, "Xi on the contour ray");
    } else if (*force_cmd) {
      const Loaded l = load(c);
      if (l.file.scene.size() < 2) throw EnergyError("force needs at least two obstacles");
      SeparationTemplate tmpl{l.file.scene, moving, {0, 0}, l.file.counts};
      const double step = h > 0.0 ? h : 0.05 * l.file.scene.gap();
      const ForceResult full = casimir_force(tmpl, 0.0, step, quad);
      QuadConfig fixed = quad;
      fixed.fixed_panels = full.panels;
      const ForceResult half = casimir_force(tmpl, 0.0, 0.5 * step, fixed);
      ojson cfg;
      cfg["command"] = "force";
      cfg["h"] = step;
      cfg["moving"] = moving < 0 ? l.file.scene.size() - 1 : moving;
      cfg["sign_convention"] = "value = -dE/ds for a displacement s of the moving obstacle away from obstacle 0; negative is attractive";
      cfg["scene"] = scene_echo(l, c);
      cfg["quad"] = quad_echo(quad);
      ojson j;
      j["value"] = full.force;
      j["quad_err"] = std::abs(full.force - half.force);
      j["tail_bound"] = 0.0;
      j["config"] = cfg;
      ojson d;
      d["force_half_step"] = half.force;
      d["energy_minus"] = full.energy_minus;
      d["energy_plus"] = full.energy_plus;
      d["panels"] = full.panels.size();
      j["diagnostics"] = d;
      write_text(c.output, dump_json(j));
    } else if (*validate_cmd) {
      std::optional<SceneFile> sf;
      if (!c.scene.empty()) sf = load(c).file;
      const auto results = run_suite(suite, sf);
      write_text(c.output, format_report(results));
      for (const CheckResult& r : results)
        if (!r.pass) return kExitValidation;
    }
  } catch (const SceneParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const SceneError& e) {
    std::cerr << "error: invalid scene: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    // XiError, EnergyError, OracleError, SingularMatrixError, KernelError, ...
    std::cerr << "error: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
