#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "coneinf/core.hpp"

namespace coneinf {

namespace detail {
inline void check_same_dim(const Point& a, const Point& b) {
  if (a.dim() != b.dim())
    throw SolverError(Errc::DimensionMismatch,
                      "points have different dimensions");
}
}  // namespace detail

/// Local scale for the pure two-point predicates.
inline double pair_scale(const Point& x, const Point& p) {
  return std::max({1.0, x.norm(), p.norm()});
}

/// Signed violation of x <=_Q p: ||pbar - xbar|| - (p0 - x0).
/// Positive means the constraint is violated at x.
inline double infeasibility(const Point& x, const Point& p) {
  detail::check_same_dim(x, p);
  return (p.pbar - x.pbar).stableNorm() - (p.p0 - x.p0);
}

/// x <=_Q p, i.e. p - x in Q, within eps * pair scale.
inline bool cone_leq(const Point& x, const Point& p, double eps) {
  return infeasibility(x, p) <= eps * pair_scale(x, p);
}

/// Exact solution of Inf_Q({p1, p2}):
///   x0* = min(p10, p20, (p10 + p20 - ||pbar1 - pbar2||) / 2)
///   xbar* = ((p10 - x0*) pbar2 + (p20 - x0*) pbar1) / ((p10 - x0*) + (p20 - x0*))
/// When both gaps vanish (coincident points), xbar* = pbar1.
inline Point two_point_solve(const Point& p1, const Point& p2) {
  detail::check_same_dim(p1, p2);
  const double dist = (p1.pbar - p2.pbar).stableNorm();
  const double x0 = std::min({p1.p0, p2.p0, 0.5 * (p1.p0 + p2.p0 - dist)});
  const double g1 = p1.p0 - x0;
  const double g2 = p2.p0 - x0;
  if (g1 + g2 <= 0.0) return Point(x0, p1.pbar);
  return Point(x0, (g1 * p2.pbar + g2 * p1.pbar) / (g1 + g2));
}

/// True iff p_star <=_Q p for every p in S (vacuously true for empty S);
/// then p_star solves Inf_Q(S u {p_star}).
inline bool is_point_solution(const Point& p_star, std::span<const Point> S,
                              double eps) {
  return std::all_of(S.begin(), S.end(), [&](const Point& p) {
    return cone_leq(p_star, p, eps);
  });
}

}  // namespace coneinf
