#include "kcas/xi.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <numbers>
#include <vector>

#include "kcas/layer_ops.hpp"

namespace kcas {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

double reduce_phase(double p) {
  double r = std::remainder(p, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

template <class Mat>
Mat block(const Mat& m, const BlockRange& r, const BlockRange& c) {
  return m.block(r.begin, c.begin, r.size(), c.size());
}

// Per-obstacle factorizations of the diagonal blocks of Q.
template <class Mat>
std::vector<Factorization> factor_blocks(const Mat& q, const std::vector<BlockRange>& blocks) {
  std::vector<Factorization> f;
  f.reserve(blocks.size());
  for (const BlockRange& b : blocks) f.emplace_back(Mat(block(q, b, b)));
  return f;
}

// Applies Qdiag^{-1} to every column of rhs.
template <class Mat>
Mat solve_blocks(const std::vector<Factorization>& f, const std::vector<BlockRange>& blocks, const Mat& rhs) {
  Mat out(rhs.rows(), rhs.cols());
  for (std::size_t j = 0; j < blocks.size(); ++j)
    out.middleRows(blocks[j].begin, blocks[j].size()) = f[j].solve(Mat(rhs.middleRows(blocks[j].begin, blocks[j].size())));
  return out;
}

template <class Mat>
Mat coupling_part(const Mat& q, const std::vector<BlockRange>& blocks) {
  Mat t = q;
  for (const BlockRange& b : blocks) t.block(b.begin, b.begin, b.size(), b.size()).setZero();
  return t;
}

template <class Mat>
Mat diagonal_part(const Mat& q, const std::vector<BlockRange>& blocks) {
  Mat d = Mat::Zero(q.rows(), q.cols());
  for (const BlockRange& b : blocks) d.block(b.begin, b.begin, b.size(), b.size()) = block(q, b, b);
  return d;
}

template <class A, class B>
auto trace_of_product(const A& a, const B& b) {
  return a.cwiseProduct(b.transpose()).sum();
}

struct RawXi {
  double log_abs = 0.0;
  double phase = 0.0;  // unreduced
  double pivot_ratio = 1.0;
  int negative_pivots = 0;
  double sign = 1.0;
};

template <class Mat>
RawXi raw_xi(const Mat& q, const std::vector<BlockRange>& blocks, XiMethod method) {
  RawXi out;
  const auto fb = factor_blocks(q, blocks);
  for (const Factorization& f : fb) {
    out.pivot_ratio = std::min(out.pivot_ratio, f.pivot_ratio());
    out.negative_pivots += f.negative_pivots();
  }
  if (blocks.size() == 1) return out;
  if (method == XiMethod::structured) {
    const Mat t = coupling_part(q, blocks);
    const LogDet ld = log_det_identity_plus(Mat(solve_blocks(fb, blocks, t)));
    out.log_abs = ld.log_abs;
    out.phase = ld.phase;
    out.sign = ld.sign;
    out.pivot_ratio = std::min(out.pivot_ratio, ld.pivot_ratio);
  } else {
    const Factorization fq(q);
    out.log_abs = fq.log_abs_det();
    out.phase = fq.phase();
    out.sign = fq.sign();
    for (const Factorization& f : fb) {
      out.log_abs -= f.log_abs_det();
      out.phase -= f.phase();
      out.sign *= f.sign();
    }
    out.pivot_ratio = std::min(out.pivot_ratio, fq.pivot_ratio());
  }
  return out;
}

void check_kappa(const Scene& scene, double kappa, double kappa_min_opt) {
  const double kmin = kappa_min_opt > 0.0 ? kappa_min_opt : default_kappa_min(scene);
  if (!(kappa >= kmin)) throw XiError("kappa = " + std::to_string(kappa) + " is below kappa_min = " + std::to_string(kmin));
}

}  // namespace

double default_kappa_min(const Scene& scene) {
  // Single obstacles have no gap; use the obstacle size scale instead.
  const double g = std::isfinite(scene.gap()) ? scene.gap() : 1.0;
  return 1e-6 / g;
}

XiSample xi_imag(const Scene& scene, const BoundaryGrid& grid, double kappa, const XiOptions& opt) {
  check_kappa(scene, kappa, opt.kappa_min);
  XiSample s;
  s.sp = SpectralPoint::imaginary(kappa);
  const LayerMatrix q = assemble_q(grid, s.sp);
  RawXi r;
  try {
    r = raw_xi(q.re, grid.blocks, opt.method);
  } catch (const SingularMatrixError& e) {
    throw XiError(std::string("singular layer matrix at kappa = ") + std::to_string(kappa) + ": " + e.what());
  }
  if (r.sign < 0.0)
    throw XiError("negative determinant ratio on the imaginary axis at kappa = " + std::to_string(kappa));
  // Negative pivots appear for kappa times obstacle size well above 1 (spurious
  // near-Nyquist eigenvalues of the product rule); report once per process.
  static std::atomic<bool> warned{false};
  if (r.negative_pivots > 0 && opt.warn_on_negative_pivots && !warned.exchange(true))
    std::cerr << "warning: " << r.negative_pivots << " negative LU pivots of Qdiag at kappa = " << kappa
              << " (further warnings suppressed)\n";
  s.xi = {r.log_abs, 0.0};
  s.pivot_ratio = r.pivot_ratio;
  s.negative_pivots = r.negative_pivots;
  return s;
}

XiSample xi_principal(const Scene& scene, const BoundaryGrid& grid, const SpectralPoint& sp, const XiOptions& opt) {
  if (sp.is_imaginary()) return xi_imag(scene, grid, sp.value, opt);
  XiSample s;
  s.sp = sp;
  const LayerMatrix q = assemble_q(grid, sp);
  RawXi r;
  try {
    r = raw_xi(q.cx, grid.blocks, opt.method);
  } catch (const SingularMatrixError& e) {
    const cplx l = sp.lambda();
    throw XiError("singular layer matrix at lambda = (" + std::to_string(l.real()) + ", " +
                  std::to_string(l.imag()) + "): " + e.what());
  }
  s.xi = {r.log_abs, reduce_phase(r.phase)};
  s.pivot_ratio = r.pivot_ratio;
  return s;
}

namespace {

struct PrimeParts {
  cplx structured;
  cplx direct;
};

template <class Mat>
PrimeParts prime_parts(const Mat& q, const Mat& dq, const std::vector<BlockRange>& blocks) {
  using Scalar = typename Mat::Scalar;
  const int n = static_cast<int>(q.rows());
  const Factorization fq(q);
  const auto fb = factor_blocks(q, blocks);
  const Mat x = fq.solve(Mat(Mat::Identity(n, n)));
  const Mat t = coupling_part(q, blocks);
  const Mat dt = coupling_part(dq, blocks);
  const Mat dd = diagonal_part(dq, blocks);
  const Mat y = solve_blocks(fb, blocks, Mat(t * x));
  const Scalar structured = trace_of_product(dt, x) - trace_of_product(dd, y);
  // Resolvent-difference form: Q^{-1} - Qdiag^{-1} = -Q^{-1} T Qdiag^{-1}.
  Mat qd_inv = Mat::Zero(n, n);
  for (std::size_t j = 0; j < blocks.size(); ++j)
    qd_inv.block(blocks[j].begin, blocks[j].begin, blocks[j].size(), blocks[j].size()) =
        fb[j].solve(Mat(Mat::Identity(blocks[j].size(), blocks[j].size())));
  const Mat z = fq.solve(Mat(t * qd_inv));
  const Scalar direct = -trace_of_product(dq, z);
  return {cplx(structured), cplx(direct)};
}

PrimeParts prime(const BoundaryGrid& grid, const SpectralPoint& sp) {
  const LayerMatrix q = assemble_q(grid, sp);
  const LayerMatrix dq = assemble_dq(grid, sp);
  try {
    if (sp.is_imaginary()) {
      // dq stores dQ/i; restore the factor i.
      PrimeParts p = prime_parts(q.re, dq.re, grid.blocks);
      const cplx i(0.0, 1.0);
      return {i * p.structured, i * p.direct};
    }
    return prime_parts(q.cx, dq.cx, grid.blocks);
  } catch (const SingularMatrixError& e) {
    const cplx l = sp.lambda();
    throw XiError("singular layer matrix in Xi' at lambda = (" + std::to_string(l.real()) + ", " +
                  std::to_string(l.imag()) + "): " + e.what());
  }
}

}  // namespace

cplx xi_prime(const Scene& scene, const BoundaryGrid& grid, const SpectralPoint& sp) {
  if (scene.size() == 1) return 0.0;
  return prime(grid, sp).structured;
}

TraceRrel trace_rrel(const Scene& scene, const BoundaryGrid& grid, const SpectralPoint& sp) {
  if (scene.size() == 1) return {0.0, 0.0};
  const PrimeParts p = prime(grid, sp);
  const cplx f = -1.0 / (2.0 * sp.lambda());
  return {f * p.structured, f * p.direct};
}

// ---- branch tracking ----------------------------------------------------

namespace {

struct Tracker {
  const Scene& scene;
  const BoundaryGrid& grid;
  const BranchOptions& opt;

  // Follows mu(u), u in [0, 1], starting from the continuous value `start`
  // at mu(0). Returns the continued value at mu(1).
  template <class Path>
  XiSample follow(Path mu, cplx start, double step) const {
    double u = 0.0;
    cplx cur = start;
    XiSample last;
    last.xi = start;
    while (u < 1.0) {
      const double next_u = std::min(1.0, u + step);
      XiSample s;
      bool ok = true;
      try {
        s = xi_principal(scene, grid, SpectralPoint::from_complex(mu(next_u)));
        if (s.pivot_ratio < opt.min_pivot_ratio) ok = false;
      } catch (const XiError&) {
        ok = false;
      }
      double jump = 0.0;
      long long wind = 0;
      if (ok) {
        wind = std::llround((cur.imag() - s.xi.imag()) / kTwoPi);
        jump = std::abs(s.xi.imag() + kTwoPi * wind - cur.imag());
        ok = jump <= opt.max_jump;
      }
      if (!ok) {
        step *= 0.5;
        if (step < opt.min_step) {
          const cplx m = mu(next_u);
          throw XiError("branch tracking failed near lambda = (" + std::to_string(m.real()) + ", " +
                        std::to_string(m.imag()) + ")");
        }
        continue;
      }
      cur = {s.xi.real(), s.xi.imag() + kTwoPi * wind};
      last = s;
      last.xi = cur;
      last.branch_offset = static_cast<int>(wind);
      u = next_u;
      if (jump < 0.25 * opt.max_jump) step *= 1.5;
    }
    return last;
  }

  XiSample along_arc(cplx target) const {
    const double radius = std::abs(target);
    const double phi_end = std::arg(target);
    const double span = 0.5 * kPi - phi_end;
    const XiSample top = xi_imag(scene, grid, radius, {XiMethod::structured, 0.0, false});
    if (span <= 0.0) return top;
    return follow([&](double u) { return std::polar(radius, 0.5 * kPi - u * span); }, top.xi,
                  opt.initial_step / span);
  }

  XiSample along_segment(cplx from, cplx to, cplx start_value) const {
    return follow([&](double u) { return from + u * (to - from); }, start_value, 1.0);
  }
};

}  // namespace

XiSample xi_real(const Scene& scene, const BoundaryGrid& grid, double lambda, double eta, const BranchOptions& opt) {
  if (!(lambda > 0.0)) throw XiError("xi_real needs lambda > 0");
  if (!(eta > 0.0)) eta = 1e-3 * lambda;
  if (scene.size() == 1) {
    XiSample s;
    s.sp = SpectralPoint::from_complex({lambda, eta});
    s.xi = 0.0;
    return s;
  }
  const Tracker tr{scene, grid, opt};
  for (int attempt = 0;; ++attempt) {
    try {
      XiSample s = tr.along_arc({lambda, eta});
      return s;
    } catch (const XiError&) {
      if (attempt >= opt.max_eta_doublings) throw;
      eta *= 2.0;
    }
  }
}

ShiftSample xi_rel(const Scene& scene, const BoundaryGrid& grid, double lambda, const ShiftOptions& opt) {
  if (!(lambda > 0.0)) throw XiError("xi_rel needs lambda > 0");
  ShiftSample out;
  out.lambda = lambda;
  double eta = opt.eta0 > 0.0 ? opt.eta0 : 1e-3 * lambda;
  if (scene.size() == 1) {
    out.eta_used = eta;
    return out;
  }
  const Tracker tr{scene, grid, opt.branch};
  for (int attempt = 0;; ++attempt) {
    try {
      const cplx m4{lambda, 4.0 * eta}, m2{lambda, 2.0 * eta}, m1{lambda, eta};
      const XiSample s4 = tr.along_arc(m4);
      const XiSample s2 = tr.along_segment(m4, m2, s4.xi);
      const XiSample s1 = tr.along_segment(m2, m1, s2.xi);
      const double v4 = -s4.xi.imag() / kPi, v2 = -s2.xi.imag() / kPi, v1 = -s1.xi.imag() / kPi;
      out.raw[0] = v1;
      out.raw[1] = v2;
      out.raw[2] = v4;
      out.xi_rel = (8.0 * v1 - 6.0 * v2 + v4) / 3.0;
      out.err_est = std::abs(out.xi_rel - (2.0 * v1 - v2));
      out.eta_used = eta;
      return out;
    } catch (const XiError&) {
      if (attempt >= opt.branch.max_eta_doublings) throw;
      eta *= 2.0;
    }
  }
}

}  // namespace kcas
