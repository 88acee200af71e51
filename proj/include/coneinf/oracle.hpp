#pragma once

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "coneinf/cone.hpp"
#include "coneinf/core.hpp"

namespace coneinf {

/// Per-condition maximum residuals of the Karush-Kuhn-Tucker system.
struct KktReport {
  double primal = 0.0;      // max_i infeasibility(x, p_i)
  double dual_cone = 0.0;   // max_i ||ybar_i|| - y_i0
  double dual_sum = 0.0;    // ||sum_i y_i - e_1||
  double comp_slack = 0.0;  // max_i |<p_i - x, y_i>|
  double threshold = 0.0;   // eps * scale the residuals were checked against
  bool pass = false;
};

inline KktReport kkt_check(const Instance& inst, const Point& x,
                           const DualCertificate& dual, double eps) {
  KktReport rep;
  rep.threshold = eps * instance_scale(inst);

  rep.primal = -std::numeric_limits<double>::infinity();
  for (const Point& p : inst.points)
    rep.primal = std::max(rep.primal, infeasibility(x, p));

  Point sum(0.0, Vec::Zero(inst.n - 1));
  for (std::size_t k = 0; k < dual.indices.size(); ++k) {
    const Point& y = dual.vectors[k];
    const Point& p = inst.points[dual.indices[k]];
    rep.dual_cone = std::max(rep.dual_cone, y.pbar.stableNorm() - y.p0);
    rep.comp_slack = std::max(
        rep.comp_slack,
        std::abs((p.p0 - x.p0) * y.p0 + (p.pbar - x.pbar).dot(y.pbar)));
    sum.p0 += y.p0;
    sum.pbar += y.pbar;
  }
  rep.dual_sum = std::hypot(sum.p0 - 1.0, sum.pbar.stableNorm());

  rep.pass = rep.primal <= rep.threshold && rep.dual_cone <= rep.threshold &&
             rep.dual_sum <= rep.threshold && rep.comp_slack <= rep.threshold;
  return rep;
}

/// Exact minimum enclosing ball of points by enumeration: every affinely
/// independent subset of size 1..d+1 contributes its circumsphere (center
/// in the subset's affine hull); the smallest candidate containing all
/// points wins. Exponential in m; intended for m <= ~15, d <= 4.
inline std::pair<Vec, double> brute_force_meb_points(
    const std::vector<Vec>& points, int d) {
  const int m = static_cast<int>(points.size());
  if (m == 0)
    throw SolverError(Errc::EmptyInstance, "no points given");
  double scale = 1.0;
  for (const Vec& q : points) scale = std::max(scale, q.stableNorm());
  const double contain_tol = 1e-10 * scale;

  Vec best_center = points[0];
  double best_radius = std::numeric_limits<double>::infinity();

  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    const int k = std::popcount(mask);
    if (k > d + 1) continue;
    std::vector<int> subset;
    subset.reserve(k);
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) subset.push_back(i);

    Vec center;
    if (k == 1) {
      center = points[subset[0]];
    } else {
      const Vec& q0 = points[subset[0]];
      Mat V(d, k - 1);
      Vec rhs(k - 1);
      for (int i = 1; i < k; ++i) {
        V.col(i - 1) = points[subset[i]] - q0;
        rhs[i - 1] = V.col(i - 1).squaredNorm();
      }
      const Mat A = 2.0 * V.transpose() * V;
      Eigen::FullPivLU<Mat> lu(A);
      if (lu.rank() < k - 1) continue;  // affinely dependent subset
      center = q0 + V * lu.solve(rhs);
    }
    double radius = 0.0;
    for (int idx : subset)
      radius = std::max(radius, (points[idx] - center).stableNorm());
    bool contains = true;
    for (const Vec& q : points)
      if ((q - center).stableNorm() > radius + contain_tol) {
        contains = false;
        break;
      }
    if (contains && radius < best_radius) {
      best_radius = radius;
      best_center = center;
    }
  }
  return {best_center, best_radius};
}

struct SubgradientBound {
  double bound = 0.0;  // best value found; a valid lower bound on x0*
  Point x;             // feasible point achieving it, (bound; xbar)
};

/// Anytime lower bound on x0*: projected supergradient ascent on the
/// concave g(xbar) = min_i (p_i0 - ||pbar_i - xbar||), started at the
/// spatial centroid with step scale/sqrt(t). The supergradient of the
/// first minimizing index is used. Fully deterministic; the seed is
/// reserved for the published signature.
inline SubgradientBound subgradient_oracle(const Instance& inst, int iters,
                                           [[maybe_unused]] std::uint64_t seed = 0) {
  if (iters < 1)
    throw SolverError(Errc::InvalidArgument, "iters must be >= 1");
  const double scale = instance_scale(inst);
  const int m = inst.m();

  Vec xbar = Vec::Zero(inst.n - 1);
  for (const Point& p : inst.points) xbar += p.pbar;
  xbar /= static_cast<double>(m);

  double best = -std::numeric_limits<double>::infinity();
  Vec best_x = xbar;
  for (int t = 1; t <= iters; ++t) {
    double g = std::numeric_limits<double>::infinity();
    int argmin = 0;
    for (int i = 0; i < m; ++i) {
      const double gi =
          inst.points[i].p0 - (inst.points[i].pbar - xbar).stableNorm();
      if (gi < g) {
        g = gi;
        argmin = i;
      }
    }
    if (g > best) {
      best = g;
      best_x = xbar;
    }
    const Vec diff = inst.points[argmin].pbar - xbar;
    const double dist = diff.stableNorm();
    if (dist > 0.0) xbar += (scale / std::sqrt(static_cast<double>(t))) * (diff / dist);
  }
  return SubgradientBound{best, Point(best, std::move(best_x))};
}

}  // namespace coneinf
