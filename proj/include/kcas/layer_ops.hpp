#pragma once

// Dense Nystrom matrices of the single-layer operator Q, its block-diagonal
// part and its wavenumber derivative, plus LU factorizations.
//
// Weights sit on the column index: Q(i, k) = w_k G(p_i, p_k) off the
// diagonal blocks. Within a diagonal block the log-singular product rule
// replaces the plain trapezoid weight.

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kcas/geometry.hpp"
#include "kcas/kernel.hpp"

namespace kcas {

enum class LayerKind { q, q_diag, dq };

const char* to_string(LayerKind kind);

struct LayerMatrix {
  LayerKind kind = LayerKind::q;
  SpectralPoint sp;
  std::vector<BlockRange> blocks;
  // Real storage on the imaginary axis. For dq there the stored matrix is
  // (dQ/dlambda)/i, flagged by times_i.
  bool real_storage = true;
  bool times_i = false;
  Eigen::MatrixXd re;
  Eigen::MatrixXcd cx;

  int dim() const { return real_storage ? static_cast<int>(re.rows()) : static_cast<int>(cx.rows()); }
  // The represented matrix, including the factor i when times_i is set.
  Eigen::MatrixXcd to_complex() const;
};

LayerMatrix assemble_q(const BoundaryGrid& grid, const SpectralPoint& sp);
LayerMatrix assemble_q_diag(const BoundaryGrid& grid, const SpectralPoint& sp);
LayerMatrix assemble_dq(const BoundaryGrid& grid, const SpectralPoint& sp);

// Restrictions of an assembled matrix: diagonal blocks only, or the
// complement (the coupling part T = Q - Qdiag).
LayerMatrix block_diagonal_part(const LayerMatrix& m);
LayerMatrix off_diagonal_part(const LayerMatrix& m);

// Self-corrections of the log-singular product rule on 2m equispaced nodes:
// entry d is R_d - (pi/m) log(4 sin^2(d pi / 2m)) for d != 0 and R_0 for d = 0.
std::vector<double> kress_corrections(int n);

class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(const std::string& what, int pivot) : std::runtime_error(what), pivot_(pivot) {}
  int pivot_index() const { return pivot_; }

 private:
  int pivot_;
};

class Factorization {
 public:
  explicit Factorization(const Eigen::MatrixXd& a);
  explicit Factorization(const Eigen::MatrixXcd& a);
  // Factorizes the stored matrix (times_i matrices are rejected).
  explicit Factorization(const LayerMatrix& m);

  bool is_real() const { return real_; }
  int dim() const { return n_; }
  double log_abs_det() const { return log_abs_det_; }
  // Real case: sign of det(A). Complex case: unreduced phase sum of the pivots plus parity.
  double sign() const { return sign_; }
  double phase() const { return phase_; }
  const std::vector<double>& pivot_magnitudes() const { return pivots_; }
  double pivot_ratio() const;  // min |u_ii| / max |u_ii|
  int negative_pivots() const { return negative_pivots_; }
  double reconstruction_residual() const;  // ||PA - LU|| / ||A||

  // One step of iterative refinement is applied to every solve.
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;
  Eigen::MatrixXcd solve(const Eigen::MatrixXcd& rhs) const;
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;

 private:
  void finish(const Eigen::VectorXcd& diag, int parity);

  bool real_ = true;
  int n_ = 0;
  Eigen::MatrixXd a_re_;
  Eigen::MatrixXcd a_cx_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_re_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_cx_;
  double log_abs_det_ = 0.0;
  double sign_ = 1.0;
  double phase_ = 0.0;
  int negative_pivots_ = 0;
  std::vector<double> pivots_;
};

// log det(I + E). For ||E||_F < 1/2 the elimination runs on E itself
// without pivoting and the pivots enter as log1p(u_kk - 1), which keeps
// full relative accuracy when the determinant is close to 1. Larger E
// goes through the pivoted factorization of I + E.
struct LogDet {
  double log_abs = 0.0;
  double phase = 0.0;  // complex case, unreduced
  double sign = 1.0;   // real case
  double pivot_ratio = 1.0;
};
LogDet log_det_identity_plus(const Eigen::MatrixXd& e);
LogDet log_det_identity_plus(const Eigen::MatrixXcd& e);

// Binary dump: 32-byte header (magic "KCLM", u32 version, u64 dimension,
// u32 axis tag, u32 storage tag (0 real, 1 complex, 2 real times i),
// f64 |lambda|) followed by row-major little-endian doubles, complex entries
// as (re, im) pairs.
void write_matrix_dump(const std::string& path, const LayerMatrix& m);
struct MatrixDump {
  std::uint32_t version = 0;
  std::uint32_t axis = 0;
  std::uint32_t storage = 0;
  double magnitude = 0.0;
  Eigen::MatrixXcd entries;
};
MatrixDump read_matrix_dump(const std::string& path);

}  // namespace kcas
