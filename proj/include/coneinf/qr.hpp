#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <utility>

#include "coneinf/core.hpp"

namespace coneinf {

/// QR factors of the anchored difference matrix
/// M = [pbar_{j2} - pbar_{j1} | ... | pbar_{js} - pbar_{j1}]  (dim x cols),
/// kept current across support edits: column append, column delete, and
/// anchor replacement as a rank-1 correction, all via Givens rotations.
/// Q is stored dense (dim x dim); R is dim x cols with exact zeros below
/// the diagonal.
class QrFactors {
 public:
  explicit QrFactors(Eigen::Index dim)
      : Q_(Mat::Identity(dim, dim)), R_(dim, 0) {}

  static QrFactors build(const Mat& M) {
    QrFactors f(M.rows());
    if (M.cols() == 0) return f;
    if (M.cols() > M.rows())
      throw SolverError(Errc::FullSupport,
                        "difference matrix has more columns than rows");
    Eigen::HouseholderQR<Mat> qr(M);
    f.Q_ = qr.householderQ();
    f.R_ = qr.matrixQR();
    for (Eigen::Index j = 0; j < f.R_.cols(); ++j)
      for (Eigen::Index i = j + 1; i < f.R_.rows(); ++i) f.R_(i, j) = 0.0;
    return f;
  }

  Eigen::Index dim() const { return Q_.rows(); }
  Eigen::Index cols() const { return R_.cols(); }
  const Mat& Q() const { return Q_; }
  const Mat& R() const { return R_; }

  /// Append column: O(dim * (dim - cols)) rotations, no rebuild.
  void append_column(const Vec& col) {
    const Eigen::Index d = dim(), c = cols();
    if (c >= d)
      throw SolverError(Errc::FullSupport, "support already spans the space");
    if (col.size() != d)
      throw SolverError(Errc::DimensionMismatch, "column has wrong dimension");
    Vec t = Q_.transpose() * col;
    for (Eigen::Index i = d - 1; i > c; --i) {
      const Rot g = make_rot(t[i - 1], t[i]);
      t[i - 1] = g.c * t[i - 1] + g.s * t[i];
      t[i] = 0.0;
      rotate_q_cols(g, i - 1, i);
      // R rows >= c are zero in all existing columns, nothing to rotate
    }
    R_.conservativeResize(Eigen::NoChange, c + 1);
    R_.col(c).setZero();
    R_.col(c).head(c + 1) = t.head(c + 1);
  }

  /// Delete column j of M (0-based), restoring triangularity.
  void remove_column(Eigen::Index j) {
    const Eigen::Index c = cols();
    if (j < 0 || j >= c)
      throw SolverError(Errc::IndexOutOfRange, "column index out of range");
    for (Eigen::Index t = j; t + 1 < c; ++t) R_.col(t) = R_.col(t + 1);
    R_.conservativeResize(Eigen::NoChange, c - 1);
    for (Eigen::Index t = j; t < cols() && t + 1 < dim(); ++t) {
      const Rot g = make_rot(R_(t, t), R_(t + 1, t));
      rotate_r_rows(g, t, t + 1, t);
      rotate_q_cols(g, t, t + 1);
      R_(t + 1, t) = 0.0;
    }
  }

  /// M <- M + u v^T (Golub & Van Loan 12.5.1): reduce Q^T u to a multiple
  /// of e_1 from the bottom up (R becomes upper Hessenberg), fold the
  /// correction into row 0, then restore triangularity top-down.
  void rank1_update(const Vec& u, const Vec& v) {
    const Eigen::Index d = dim(), c = cols();
    if (u.size() != d || v.size() != c)
      throw SolverError(Errc::DimensionMismatch, "rank-1 update shape");
    Vec w = Q_.transpose() * u;
    for (Eigen::Index i = d - 1; i >= 1; --i) {
      if (w[i] == 0.0) continue;
      const Rot g = make_rot(w[i - 1], w[i]);
      w[i - 1] = g.c * w[i - 1] + g.s * w[i];
      w[i] = 0.0;
      rotate_r_rows(g, i - 1, i, 0);
      rotate_q_cols(g, i - 1, i);
    }
    R_.row(0) += w[0] * v.transpose();
    for (Eigen::Index t = 0; t < c && t + 1 < d; ++t) {
      if (R_(t + 1, t) == 0.0) continue;
      const Rot g = make_rot(R_(t, t), R_(t + 1, t));
      rotate_r_rows(g, t, t + 1, t);
      rotate_q_cols(g, t, t + 1);
      R_(t + 1, t) = 0.0;
    }
  }

  /// Remove the point at support position pos (0 = anchor). Anchor removal
  /// re-anchors to the second support point: delete column 0, then apply
  /// the rank-1 correction M <- M - m1 * 1^T with m1 the deleted column.
  void remove_support_point(Eigen::Index pos) {
    if (pos == 0) {
      if (cols() == 0) return;  // singleton support, factors already empty
      const Vec m1 = Q_.col(0) * R_(0, 0);
      remove_column(0);
      if (cols() > 0) rank1_update(-m1, Vec::Ones(cols()));
    } else {
      remove_column(pos - 1);
    }
  }

  Vec apply(const Vec& t) const {  // M t
    if (cols() == 0) return Vec::Zero(dim());
    return Q_.leftCols(cols()) * (R_.topRows(cols()) * t);
  }

  Vec applyT(const Vec& y) const {  // M^T y
    if (cols() == 0) return Vec(0);
    return R_.topRows(cols()).transpose() * (Q_.leftCols(cols()).transpose() * y);
  }

  /// Solve (M^T M) t = rhs as two triangular systems with R^T and R.
  Vec solve_normal(const Vec& rhs, double rank_tol) const {
    const Eigen::Index c = cols();
    if (c == 0) return Vec(0);
    check_rank(rank_tol);
    const auto Rt = R_.topRows(c);
    Vec y = Rt.transpose().template triangularView<Eigen::Lower>().solve(rhs);
    return Rt.template triangularView<Eigen::Upper>().solve(y);
  }

  /// For d in R^dim, returns (w, z) with R w = -Q_M^T d and
  /// z = (I - M M^+) d. Empty factors: w empty, z = d.
  std::pair<Vec, Vec> project_residual(const Vec& d, double rank_tol) const {
    if (d.size() != dim())
      throw SolverError(Errc::DimensionMismatch, "vector has wrong dimension");
    const Eigen::Index c = cols();
    if (c == 0) return {Vec(0), d};
    Vec t = Q_.leftCols(c).transpose() * d;
    Vec z = d - Q_.leftCols(c) * t;
    check_rank(rank_tol);
    Vec w = R_.topRows(c).template triangularView<Eigen::Upper>().solve(-t);
    return {std::move(w), std::move(z)};
  }

  Mat reconstruct() const { return Q_ * R_; }

  double orthogonality_error() const {
    return (Q_.transpose() * Q_ - Mat::Identity(dim(), dim()))
        .cwiseAbs()
        .maxCoeff();
  }

  double min_abs_diag() const {
    double v = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < cols(); ++i) v = std::min(v, std::abs(R_(i, i)));
    return v;
  }

 private:
  struct Rot {
    double c, s;
  };

  // Maps (a, b) to (hypot(a, b), 0).
  static Rot make_rot(double a, double b) {
    const double r = std::hypot(a, b);
    if (r == 0.0) return {1.0, 0.0};
    return {a / r, b / r};
  }

  void rotate_r_rows(Rot g, Eigen::Index i1, Eigen::Index i2,
                     Eigen::Index from_col) {
    const Eigen::Index k = cols() - from_col;
    if (k <= 0) return;
    const Eigen::RowVectorXd t1 = R_.row(i1).tail(k);
    const Eigen::RowVectorXd t2 = R_.row(i2).tail(k);
    R_.row(i1).tail(k) = g.c * t1 + g.s * t2;
    R_.row(i2).tail(k) = -g.s * t1 + g.c * t2;
  }

  void rotate_q_cols(Rot g, Eigen::Index i1, Eigen::Index i2) {
    const Vec t1 = Q_.col(i1);
    Q_.col(i1) = g.c * t1 + g.s * Q_.col(i2);
    Q_.col(i2) = -g.s * t1 + g.c * Q_.col(i2);
  }

  void check_rank(double rank_tol) const {
    if (min_abs_diag() <= rank_tol)
      throw SolverError(Errc::RankDeficient,
                        "triangular factor is numerically rank deficient");
  }

  Mat Q_;
  Mat R_;
};

}  // namespace coneinf
