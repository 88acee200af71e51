#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <utility>

#include "coneinf/core.hpp"
#include "coneinf/qr.hpp"

namespace coneinf {

/// Derived quantities of one curve search for support S (anchor j1) and
/// entering point p*:
///   M^T xbar = b + x0 c  encodes the squared boundary conditions,
///   u = (M^T M)^{-1} (b - M^T pbar_{j1}),  v = (M^T M)^{-1} c,
///   w = -M^+ (pbar* - pbar_{j1}),  z = (I - M M^+)(pbar* - pbar_{j1}).
/// For |S| = 1: u, v, w empty and z = pbar* - pbar_{j1}.
struct CurveSystem {
  int s = 0;                  // |S|
  double anchor_height = 0.0; // p_{j1,0}
  Vec anchor_bar;
  Vec b, c;                   // length s-1
  Vec u, v, w;                // length s-1
  Vec z;                      // length n-1
  double z_norm = 0.0;
  Vec Mu, Mv;                 // M u and M v
  Vec d;                      // pbar* - pbar_{j1}
  double x0_cap = 0.0;        // min over support heights
  Point p_star;
  double scale = 1.0;
  double rank_tol = 0.0;      // eps_rank * scale
  double disc_band = 0.0;     // clamp band for the discriminant

  bool affinely_dependent() const { return z_norm <= rank_tol; }

  /// D(x0) = (p_{j1,0} - x0)^2 - ||M(u + x0 v)||^2.
  double discriminant(double x0) const {
    const double g = anchor_height - x0;
    return g * g - (Mu + x0 * Mv).squaredNorm();
  }
};

inline CurveSystem build_curve_system(const Instance& inst,
                                      std::span<const int> support,
                                      const QrFactors& qr, const Point& p_star,
                                      double scale, double eps_rank) {
  if (support.empty())
    throw SolverError(Errc::InvalidArgument, "support set is empty");
  CurveSystem cs;
  cs.s = static_cast<int>(support.size());
  const Point& anchor = inst.points[support[0]];
  cs.anchor_height = anchor.p0;
  cs.anchor_bar = anchor.pbar;
  cs.p_star = p_star;
  cs.d = p_star.pbar - anchor.pbar;
  cs.scale = scale;
  cs.rank_tol = eps_rank * scale;
  cs.disc_band = 1e-11 * scale * scale;

  const int k = cs.s - 1;
  cs.b.resize(k);
  cs.c.resize(k);
  cs.x0_cap = anchor.p0;
  const double anchor_term =
      anchor.pbar.squaredNorm() - anchor.p0 * anchor.p0;
  for (int i = 1; i < cs.s; ++i) {
    const Point& q = inst.points[support[i]];
    cs.c[i - 1] = q.p0 - anchor.p0;
    cs.b[i - 1] =
        0.5 * (q.pbar.squaredNorm() - q.p0 * q.p0 - anchor_term);
    cs.x0_cap = std::min(cs.x0_cap, q.p0);
  }

  if (k > 0) {
    cs.u = qr.solve_normal(cs.b - qr.applyT(anchor.pbar), cs.rank_tol);
    cs.v = qr.solve_normal(cs.c, cs.rank_tol);
    auto [w, z] = qr.project_residual(cs.d, cs.rank_tol);
    cs.w = std::move(w);
    cs.z = std::move(z);
    cs.Mu = qr.apply(cs.u);
    cs.Mv = qr.apply(cs.v);
  } else {
    cs.u = cs.v = cs.w = Vec(0);
    cs.z = cs.d;
    cs.Mu = Vec::Zero(inst.n - 1);
    cs.Mv = Vec::Zero(inst.n - 1);
  }
  cs.z_norm = cs.z.stableNorm();
  return cs;
}

/// The dual-feasible branch of the curve:
///   Gamma+(x0) = M(u + x0 v) + (z/||z||) sqrt(D(x0)) + pbar_{j1}.
/// Returns nothing when D(x0) is negative beyond the clamp band.
inline std::optional<Vec> gamma_plus(const CurveSystem& cs, double x0) {
  if (cs.affinely_dependent())
    throw SolverError(Errc::AffinelyDependent,
                      "curve is undefined: support plus entering point is "
                      "affinely dependent");
  double D = cs.discriminant(x0);
  if (D < -cs.disc_band) return std::nullopt;
  D = std::max(D, 0.0);
  return Vec(cs.Mu + x0 * cs.Mv + (std::sqrt(D) / cs.z_norm) * cs.z +
             cs.anchor_bar);
}

/// Affine coefficients along Gamma+ at height x0:
///   alpha* = sqrt(D)/||z||, alpha_{2:s} = u + x0 v + alpha* w,
///   alpha_1 = 1 - sum(alpha_{2:s}) - alpha*.
/// Returns (alpha*, alpha) with alpha ordered by support position.
inline std::optional<std::pair<double, Vec>> alphas_of_x0(
    const CurveSystem& cs, double x0) {
  if (cs.affinely_dependent())
    throw SolverError(Errc::AffinelyDependent,
                      "coefficients as functions of x0 require ||z|| > 0");
  double D = cs.discriminant(x0);
  if (D < -cs.disc_band) return std::nullopt;
  D = std::max(D, 0.0);
  const double alpha_star = std::sqrt(D) / cs.z_norm;
  Vec alpha(cs.s);
  for (int i = 1; i < cs.s; ++i)
    alpha[i] = cs.u[i - 1] + x0 * cs.v[i - 1] + alpha_star * cs.w[i - 1];
  alpha[0] = 1.0 - alpha.tail(cs.s - 1).sum() - alpha_star;
  return std::make_pair(alpha_star, std::move(alpha));
}

/// Affinely dependent case: x0 is pinned at x0j and the coefficients move
/// with alpha* instead:
///   alpha_{2:s}(alpha*) = u + x0j v + alpha* w,
///   alpha_1(alpha*) = 1 - alpha* - sum(alpha_{2:s}).
inline Vec alphas_affdep(const CurveSystem& cs, double x0j,
                         double alpha_star) {
  Vec alpha(cs.s);
  for (int i = 1; i < cs.s; ++i)
    alpha[i] = cs.u[i - 1] + x0j * cs.v[i - 1] + alpha_star * cs.w[i - 1];
  alpha[0] = 1.0 - alpha_star - alpha.tail(cs.s - 1).sum();
  return alpha;
}

/// Builds the dual certificate from the affine coefficients of xbar in the
/// support spatial parts:
///   y_i0 = alpha_i (p_i0 - x0) / sum_j alpha_j (p_j0 - x0),
///   ybar_i = (alpha_i / sum_j ...) (xbar - pbar_i).
/// When the normalizer vanishes, x coincides with a support point and the
/// certificate is y_k = e_1.
inline DualCertificate reconstruct_dual(const Instance& inst,
                                        std::span<const int> support,
                                        const Vec& alpha, const Point& x,
                                        double scale) {
  DualCertificate cert;
  cert.m = inst.m();
  cert.n = inst.n;
  const int s = static_cast<int>(support.size());
  double denom = 0.0;
  for (int i = 0; i < s; ++i)
    denom += alpha[i] * (inst.points[support[i]].p0 - x.p0);

  if (denom <= 1e-12 * std::max(1.0, scale)) {
    // x equals (up to roundoff) the lowest support point: emit y_k = e_1.
    int k = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < s; ++i) {
      const double gap = inst.points[support[i]].p0 - x.p0;
      if (gap < best) {
        best = gap;
        k = i;
      }
    }
    cert.indices = {support[k]};
    cert.vectors = {Point(1.0, Vec::Zero(inst.n - 1))};
    return cert;
  }

  cert.indices.assign(support.begin(), support.end());
  cert.vectors.reserve(s);
  for (int i = 0; i < s; ++i) {
    const Point& p = inst.points[support[i]];
    const double ratio = alpha[i] / denom;
    cert.vectors.emplace_back(ratio * (p.p0 - x.p0),
                              Vec(ratio * (x.pbar - p.pbar)));
  }
  return cert;
}

}  // namespace coneinf
