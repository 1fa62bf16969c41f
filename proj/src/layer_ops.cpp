#include "kcas/layer_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kcas/parallel.hpp"

namespace kcas {
namespace {

constexpr double kPi = std::numbers::pi;

enum class Part { full, diag_only };

struct BlockCorrections {
  std::vector<std::vector<double>> per_block;
};

BlockCorrections corrections_for(const BoundaryGrid& grid) {
  BlockCorrections c;
  for (const BlockRange& b : grid.blocks) c.per_block.push_back(kress_corrections(b.size()));
  return c;
}

// Fills one row of the matrix. Entry functions receive (row, col, block of
// row, same_block, local index difference d).
template <class Scalar, class Entry>
void fill(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& m, const BoundaryGrid& grid, Part part, Entry entry) {
  const int n = grid.size();
  m.setZero(n, n);
  parallel_for(0, n, [&](int i) {
    const int bi = grid.obstacle[i];
    const BlockRange& blk = grid.blocks[bi];
    const int li = i - blk.begin;
    for (int k = 0; k < n; ++k) {
      const bool same = grid.obstacle[k] == bi;
      if (!same && part == Part::diag_only) continue;
      int d = 0;
      if (same) {
        d = li - (k - blk.begin);
        if (d < 0) d += blk.size();
      }
      m(i, k) = entry(i, k, bi, same, d);
    }
  });
}

double dist(const BoundaryGrid& g, int i, int k) { return (g.points[i] - g.points[k]).norm(); }

LayerMatrix assemble_single(const BoundaryGrid& grid, const SpectralPoint& sp, Part part) {
  LayerMatrix out;
  out.kind = part == Part::full ? LayerKind::q : LayerKind::q_diag;
  out.sp = sp;
  out.blocks = grid.blocks;
  const BlockCorrections corr = corrections_for(grid);
  if (sp.is_imaginary()) {
    const double kappa = sp.value;
    out.real_storage = true;
    fill(out.re, grid, part, [&](int i, int k, int b, bool same, int d) -> double {
      const double speed = grid.speeds[k];
      if (!same) return grid.weights[k] * green_imag(kappa, dist(grid, i, k));
      const double h = 2.0 * kPi / grid.blocks[b].size();
      const double c = corr.per_block[b][d];
      const detail::RealSplit s = detail::split_single_imag(kappa, d == 0 ? 0.0 : dist(grid, i, k), speed, 0.0, d == 0);
      return c * s.a + h * s.b;
    });
  } else {
    out.real_storage = false;
    fill(out.cx, grid, part, [&](int i, int k, int b, bool same, int d) -> cplx {
      const double speed = grid.speeds[k];
      if (!same) return grid.weights[k] * green_free(2, sp, dist(grid, i, k));
      const double h = 2.0 * kPi / grid.blocks[b].size();
      const double c = corr.per_block[b][d];
      const KressSplit s = detail::split_single(sp, d == 0 ? 0.0 : dist(grid, i, k), speed, 0.0, d == 0);
      return c * s.a + h * s.b;
    });
  }
  return out;
}

}  // namespace

const char* to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::q: return "Q";
    case LayerKind::q_diag: return "Qdiag";
    case LayerKind::dq: return "dQ";
  }
  return "unknown";
}

Eigen::MatrixXcd LayerMatrix::to_complex() const {
  if (!real_storage) return cx;
  Eigen::MatrixXcd c = re.cast<cplx>();
  if (times_i) c *= cplx(0.0, 1.0);
  return c;
}

std::vector<double> kress_corrections(int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("product rule needs an even node count");
  const int m = n / 2;
  std::vector<double> cos_table(n);
  for (int j = 0; j < n; ++j) cos_table[j] = std::cos(kPi * j / m);
  std::vector<double> c(n);
  for (int d = 0; d < n; ++d) {
    double sum = 0.0;
    for (int k = m - 1; k >= 1; --k) sum += cos_table[(static_cast<long long>(k) * d) % n] / k;
    const double r = -(2.0 * kPi / m) * sum - (kPi / (static_cast<double>(m) * m)) * (d % 2 == 0 ? 1.0 : -1.0);
    if (d == 0) {
      c[d] = r;
    } else {
      const double s = std::sin(0.5 * kPi * d / m);
      c[d] = r - (kPi / m) * std::log(4.0 * s * s);
    }
  }
  return c;
}

LayerMatrix assemble_q(const BoundaryGrid& grid, const SpectralPoint& sp) {
  return assemble_single(grid, sp, Part::full);
}

LayerMatrix assemble_q_diag(const BoundaryGrid& grid, const SpectralPoint& sp) {
  return assemble_single(grid, sp, Part::diag_only);
}

LayerMatrix assemble_dq(const BoundaryGrid& grid, const SpectralPoint& sp) {
  LayerMatrix out;
  out.kind = LayerKind::dq;
  out.sp = sp;
  out.blocks = grid.blocks;
  const BlockCorrections corr = corrections_for(grid);
  if (sp.is_imaginary()) {
    const double kappa = sp.value;
    out.real_storage = true;
    out.times_i = true;
    fill(out.re, grid, Part::full, [&](int i, int k, int b, bool same, int d) -> double {
      const double speed = grid.speeds[k];
      if (!same) return grid.weights[k] * green_imag_dlambda_over_i(kappa, dist(grid, i, k));
      const double h = 2.0 * kPi / grid.blocks[b].size();
      const double c = corr.per_block[b][d];
      const detail::RealSplit s =
          detail::split_dlambda_imag(kappa, d == 0 ? 0.0 : dist(grid, i, k), speed, 0.0, d == 0);
      return c * s.a + h * s.b;
    });
  } else {
    out.real_storage = false;
    fill(out.cx, grid, Part::full, [&](int i, int k, int b, bool same, int d) -> cplx {
      const double speed = grid.speeds[k];
      if (!same) return grid.weights[k] * green_free_dlambda(2, sp, dist(grid, i, k));
      const double h = 2.0 * kPi / grid.blocks[b].size();
      const double c = corr.per_block[b][d];
      const KressSplit s = detail::split_dlambda(sp, d == 0 ? 0.0 : dist(grid, i, k), speed, 0.0, d == 0);
      return c * s.a + h * s.b;
    });
  }
  return out;
}

namespace {

template <class M>
void zero_blocks(M& m, const std::vector<BlockRange>& blocks, bool keep_diagonal) {
  for (std::size_t a = 0; a < blocks.size(); ++a) {
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if ((a == b) == keep_diagonal) continue;
      m.block(blocks[a].begin, blocks[b].begin, blocks[a].size(), blocks[b].size()).setZero();
    }
  }
}

}  // namespace

LayerMatrix block_diagonal_part(const LayerMatrix& m) {
  LayerMatrix out = m;
  if (out.kind == LayerKind::q) out.kind = LayerKind::q_diag;
  if (out.real_storage) zero_blocks(out.re, out.blocks, true);
  else zero_blocks(out.cx, out.blocks, true);
  return out;
}

LayerMatrix off_diagonal_part(const LayerMatrix& m) {
  LayerMatrix out = m;
  if (out.real_storage) zero_blocks(out.re, out.blocks, false);
  else zero_blocks(out.cx, out.blocks, false);
  return out;
}

// ---- factorization -----------------------------------------------------

Factorization::Factorization(const Eigen::MatrixXd& a) : real_(true), n_(static_cast<int>(a.rows())), a_re_(a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("factorization needs a square matrix");
  lu_re_.compute(a);
  finish(lu_re_.matrixLU().diagonal().cast<cplx>(), static_cast<int>(std::lround(lu_re_.permutationP().determinant())));
}

Factorization::Factorization(const Eigen::MatrixXcd& a) : real_(false), n_(static_cast<int>(a.rows())), a_cx_(a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("factorization needs a square matrix");
  lu_cx_.compute(a);
  finish(lu_cx_.matrixLU().diagonal(), static_cast<int>(std::lround(lu_cx_.permutationP().determinant())));
}

Factorization::Factorization(const LayerMatrix& m)
    : Factorization(m.real_storage ? Factorization(m.re) : Factorization(m.cx)) {
  if (m.times_i) throw std::invalid_argument("times_i matrices are not factorized");
}

void Factorization::finish(const Eigen::VectorXcd& diag, int parity) {
  pivots_.resize(n_);
  log_abs_det_ = 0.0;
  phase_ = parity < 0 ? kPi : 0.0;
  sign_ = parity < 0 ? -1.0 : 1.0;
  negative_pivots_ = 0;
  for (int i = 0; i < n_; ++i) {
    const double mag = std::abs(diag[i]);
    pivots_[i] = mag;
    if (mag == 0.0 || !std::isfinite(mag))
      throw SingularMatrixError("singular matrix: zero pivot at index " + std::to_string(i), i);
    log_abs_det_ += std::log(mag);
    if (real_) {
      if (diag[i].real() < 0.0) {
        sign_ = -sign_;
        ++negative_pivots_;
      }
    } else {
      phase_ += std::arg(diag[i]);
    }
  }
  if (real_) phase_ = sign_ < 0 ? kPi : 0.0;
}

double Factorization::pivot_ratio() const {
  if (pivots_.empty()) return 1.0;
  const auto [lo, hi] = std::minmax_element(pivots_.begin(), pivots_.end());
  return *lo / *hi;
}

double Factorization::reconstruction_residual() const {
  if (real_) {
    const Eigen::MatrixXd lu = lu_re_.matrixLU();
    const Eigen::MatrixXd l = lu.triangularView<Eigen::UnitLower>();
    const Eigen::MatrixXd u = lu.triangularView<Eigen::Upper>();
    const Eigen::MatrixXd pa = lu_re_.permutationP() * a_re_;
    return (pa - l * u).norm() / a_re_.norm();
  }
  const Eigen::MatrixXcd lu = lu_cx_.matrixLU();
  const Eigen::MatrixXcd l = lu.triangularView<Eigen::UnitLower>();
  const Eigen::MatrixXcd u = lu.triangularView<Eigen::Upper>();
  const Eigen::MatrixXcd pa = lu_cx_.permutationP() * a_cx_;
  return (pa - l * u).norm() / a_cx_.norm();
}

Eigen::MatrixXd Factorization::solve(const Eigen::MatrixXd& rhs) const {
  if (!real_) return solve(Eigen::MatrixXcd(rhs.cast<cplx>())).real();
  Eigen::MatrixXd x = lu_re_.solve(rhs);
  const Eigen::MatrixXd r = rhs - a_re_ * x;
  x += lu_re_.solve(r);
  return x;
}

Eigen::MatrixXcd Factorization::solve(const Eigen::MatrixXcd& rhs) const {
  if (real_) {
    Eigen::MatrixXcd x(rhs.rows(), rhs.cols());
    x.real() = solve(Eigen::MatrixXd(rhs.real()));
    x.imag() = solve(Eigen::MatrixXd(rhs.imag()));
    return x;
  }
  Eigen::MatrixXcd x = lu_cx_.solve(rhs);
  const Eigen::MatrixXcd r = rhs - a_cx_ * x;
  x += lu_cx_.solve(r);
  return x;
}

Eigen::VectorXd Factorization::solve(const Eigen::VectorXd& rhs) const {
  return solve(Eigen::MatrixXd(rhs)).col(0);
}

Eigen::VectorXcd Factorization::solve(const Eigen::VectorXcd& rhs) const {
  return solve(Eigen::MatrixXcd(rhs)).col(0);
}

// ---- log det(I + E) ----------------------------------------------------

namespace {

constexpr double kDeviationNormLimit = 0.5;

template <class Mat>
void eliminate_deviation(Mat& d) {
  const Eigen::Index n = d.rows();
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const auto piv = 1.0 + d(k, k);
    const Eigen::Index rest = n - k - 1;
    d.col(k).tail(rest) /= piv;
    d.bottomRightCorner(rest, rest).noalias() -= d.col(k).tail(rest) * d.row(k).tail(rest);
  }
}

}  // namespace

LogDet log_det_identity_plus(const Eigen::MatrixXd& e) {
  LogDet out;
  if (e.rows() == 0) return out;
  if (e.norm() >= kDeviationNormLimit) {
    const Factorization f(Eigen::MatrixXd(Eigen::MatrixXd::Identity(e.rows(), e.cols()) + e));
    out.log_abs = f.log_abs_det();
    out.sign = f.sign();
    out.phase = f.phase();
    out.pivot_ratio = f.pivot_ratio();
    return out;
  }
  Eigen::MatrixXd d = e;
  eliminate_deviation(d);
  double lo = INFINITY, hi = 0.0;
  for (Eigen::Index k = 0; k < d.rows(); ++k) {
    const double dev = d(k, k);
    if (1.0 + dev <= 0.0) throw SingularMatrixError("non-positive pivot in log det(I + E)", static_cast<int>(k));
    out.log_abs += std::log1p(dev);
    lo = std::min(lo, 1.0 + dev);
    hi = std::max(hi, 1.0 + dev);
  }
  out.pivot_ratio = lo / hi;
  return out;
}

LogDet log_det_identity_plus(const Eigen::MatrixXcd& e) {
  LogDet out;
  if (e.rows() == 0) return out;
  if (e.norm() >= kDeviationNormLimit) {
    const Factorization f(Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(e.rows(), e.cols()) + e));
    out.log_abs = f.log_abs_det();
    out.phase = f.phase();
    out.pivot_ratio = f.pivot_ratio();
    return out;
  }
  Eigen::MatrixXcd d = e;
  eliminate_deviation(d);
  double lo = INFINITY, hi = 0.0;
  for (Eigen::Index k = 0; k < d.rows(); ++k) {
    const cplx z = d(k, k);
    const double mag = std::abs(1.0 + z);
    if (mag == 0.0) throw SingularMatrixError("zero pivot in log det(I + E)", static_cast<int>(k));
    out.log_abs += 0.5 * std::log1p(2.0 * z.real() + std::norm(z));
    out.phase += std::atan2(z.imag(), 1.0 + z.real());
    lo = std::min(lo, mag);
    hi = std::max(hi, mag);
  }
  out.pivot_ratio = lo / hi;
  return out;
}

}  // namespace kcas
