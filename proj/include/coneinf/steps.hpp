#pragma once

#include <cmath>
#include <limits>
#include <optional>

#include "coneinf/core.hpp"
#include "coneinf/curve.hpp"

namespace coneinf {

namespace detail {

/// Real roots of a2 x^2 + a1 x + a0 = 0, cancellation-free: the larger
/// magnitude root comes from the stable branch, the other from the product
/// of roots. Returns the number of roots written (0, 1, or 2).
inline int solve_quadratic(double a2, double a1, double a0, double roots[2]) {
  const double mag = std::max({std::abs(a2), std::abs(a1), std::abs(a0)});
  if (mag == 0.0) return 0;
  if (std::abs(a2) <= 1e-13 * mag) {
    if (std::abs(a1) <= 1e-13 * mag) return 0;
    roots[0] = -a0 / a1;
    return 1;
  }
  double disc = a1 * a1 - 4.0 * a2 * a0;
  const double disc_scale = std::max(a1 * a1, std::abs(4.0 * a2 * a0));
  if (disc < 0.0) {
    if (disc < -4.0 * 1e-14 * disc_scale) return 0;
    disc = 0.0;  // grazing root
  }
  const double t = -0.5 * (a1 + std::copysign(std::sqrt(disc), a1));
  if (t == 0.0) {
    roots[0] = 0.0;
    return 1;
  }
  roots[0] = t / a2;
  roots[1] = a0 / t;
  return 2;
}

}  // namespace detail

struct PartialStepResult {
  double x0;  // first height (largest x0 <= x0j) where some alpha_i vanishes
  int k;      // support position (0-based) whose coefficient vanished
};

/// Partial step: for each support position solve the radical equation
/// alpha_i(x0) = 0 with alpha*(x0) = sqrt(D(x0))/||z||, by squaring,
/// solving the quadratic, and discarding extraneous roots of the unsquared
/// equation. Returns nothing when no coefficient vanishes on the curve at
/// or below x0j.
inline std::optional<PartialStepResult> partial_step(const CurveSystem& cs,
                                                     double x0j) {
  const double zn2 = cs.z_norm * cs.z_norm;
  const double a = cs.anchor_height;
  const double mu2 = cs.Mu.squaredNorm();
  const double g = cs.Mu.dot(cs.Mv);
  const double h = cs.Mv.squaredNorm();
  const double accept_band = 1e-10 * cs.scale;
  const double residual_tol = 1e-8 * cs.scale;

  bool found = false;
  double best_x0 = -std::numeric_limits<double>::infinity();
  int best_k = -1;

  for (int i = 0; i < cs.s; ++i) {
    // alpha_i(x0) = A + B x0 + C alpha*(x0)
    double A, B, C;
    if (i == 0) {
      A = 1.0 - cs.u.sum();
      B = -cs.v.sum();
      C = -(cs.w.sum() + 1.0);
    } else {
      A = cs.u[i - 1];
      B = cs.v[i - 1];
      C = cs.w[i - 1];
    }
    // Squared: ||z||^2 (A + B x0)^2 = C^2 D(x0) with
    // D(x0) = (1-h) x0^2 - 2(a+g) x0 + (a^2 - mu2).
    const double q2 = zn2 * B * B - C * C * (1.0 - h);
    const double q1 = 2.0 * zn2 * A * B + 2.0 * C * C * (a + g);
    const double q0 = zn2 * A * A - C * C * (a * a - mu2);
    double roots[2];
    const int nr = detail::solve_quadratic(q2, q1, q0, roots);
    for (int r = 0; r < nr; ++r) {
      if (roots[r] > x0j + accept_band) continue;
      const double x0 = std::min(roots[r], x0j);
      double D = cs.discriminant(x0);
      if (D < -cs.disc_band) continue;  // no curve point at this height
      D = std::max(D, 0.0);
      const double alpha_star = std::sqrt(D) / cs.z_norm;
      if (std::abs(A + B * x0 + C * alpha_star) > residual_tol)
        continue;  // extraneous root introduced by squaring
      if (x0 > best_x0) {  // ties keep the smallest support position
        best_x0 = x0;
        best_k = i;
        found = true;
      }
    }
  }
  if (!found) return std::nullopt;
  return PartialStepResult{best_x0, best_k};
}

/// Full step: the largest x0 <= min(x0j, p*_0) where the entering
/// constraint becomes active on the curve. On the curve, xbar is linear in
/// x0 once the activation plane is imposed:
///   xbar(x0) = q + x0 r + pbar_{j1},
/// and ||q + x0 r||^2 = (p_{j1,0} - x0)^2 is a plain quadratic. Roots with
/// alpha*(x0) < -eps_dual belong to the other branch and are dropped.
/// Returns -infinity when no qualifying root exists.
inline double full_step(const CurveSystem& cs, double x0j, double eps_dual) {
  const double a = cs.anchor_height;
  const Point& ps = cs.p_star;
  const double c_star = ps.p0 - a;
  const double b_star = 0.5 * (ps.pbar.squaredNorm() - ps.p0 * ps.p0 -
                               cs.anchor_bar.squaredNorm() + a * a);
  const double dz = cs.d.dot(cs.z);  // equals ||z||^2
  const double lam_q = (b_star - cs.d.dot(cs.Mu + cs.anchor_bar)) / dz;
  const double lam_r = (c_star - cs.d.dot(cs.Mv)) / dz;
  const Vec q = cs.Mu + lam_q * cs.z;
  const Vec r = cs.Mv + lam_r * cs.z;

  const double q2 = r.squaredNorm() - 1.0;
  const double q1 = 2.0 * (q.dot(r) + a);
  const double q0 = q.squaredNorm() - a * a;
  double roots[2];
  const int nr = detail::solve_quadratic(q2, q1, q0, roots);

  const double cap = std::min(x0j, ps.p0);
  const double accept_band = 1e-10 * cs.scale;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < nr; ++i) {
    if (roots[i] > cap + accept_band) continue;
    const double x0 = std::min(roots[i], x0j);
    const double alpha_star =
        (b_star + x0 * c_star - cs.d.dot(cs.Mu + x0 * cs.Mv + cs.anchor_bar)) /
        dz;
    if (alpha_star < -eps_dual) continue;
    best = std::max(best, x0);
  }
  return best;
}

/// Affinely dependent case: with x0 pinned, move in alpha* until a
/// coefficient hits zero. alpha(alpha*) = rho + alpha* sigma with
///   rho = (1 - 1^T(u + x0j v); u + x0j v), sigma = (-1 - 1^T w; w);
/// the minimum-ratio rule over sigma_k < 0 picks the support position to
/// drop (ties to the smallest position).
inline int affdep_drop(const CurveSystem& cs, double x0j) {
  Vec rho(cs.s), sigma(cs.s);
  for (int i = 1; i < cs.s; ++i) {
    rho[i] = cs.u[i - 1] + x0j * cs.v[i - 1];
    sigma[i] = cs.w[i - 1];
  }
  rho[0] = 1.0 - rho.tail(cs.s - 1).sum();
  sigma[0] = -1.0 - sigma.tail(cs.s - 1).sum();

  const double sig_tol =
      1e-12 * std::max(1.0, sigma.cwiseAbs().maxCoeff());
  int best_k = -1;
  double best_ratio = std::numeric_limits<double>::infinity();
  for (int i = 0; i < cs.s; ++i) {
    if (sigma[i] >= -sig_tol) continue;
    const double ratio = -rho[i] / sigma[i];
    if (ratio < best_ratio) {
      best_ratio = ratio;
      best_k = i;
    }
  }
  if (best_k < 0)
    throw SolverError(Errc::NoNegativeSigma,
                      "no coefficient decreases with alpha*: entering point "
                      "cannot be violated");
  return best_k;
}

}  // namespace coneinf
