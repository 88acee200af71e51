#pragma once

#include <span>
#include <utility>
#include <vector>

#include "coneinf/core.hpp"
#include "coneinf/solver.hpp"

namespace coneinf {

struct Ball {
  Vec center;
  double radius = 0.0;
};

enum class BallMode { Enclosing, Intersecting, Enclosed, Mixed };

struct BallResult {
  Ball ball;
  std::vector<int> support_indices;  // input balls determining the answer
  BallMode mode = BallMode::Enclosing;
  SolveResult solve;  // underlying cone solve, for certificates
};

namespace detail {

inline int validate_balls(std::span<const Ball> balls) {
  if (balls.empty())
    throw SolverError(Errc::EmptyInstance, "no balls given");
  const int d = static_cast<int>(balls[0].center.size());
  if (d < 1)
    throw SolverError(Errc::DimensionMismatch, "balls must have dimension >= 1");
  for (std::size_t i = 0; i < balls.size(); ++i) {
    const Ball& b = balls[i];
    if (b.center.size() != d)
      throw SolverError(Errc::DimensionMismatch,
                        "ball " + std::to_string(i) + " has wrong dimension");
    if (!(b.radius >= 0.0) || !std::isfinite(b.radius) || !b.center.allFinite())
      throw SolverError(Errc::NonFiniteCoordinate,
                        "ball " + std::to_string(i) +
                            " has a negative or non-finite field");
  }
  return d;
}

/// Lift balls to cone points (sign * r_i; c_i) and solve.
inline SolveResult lifted_solve(std::span<const Ball> balls, double sign,
                                const SolverConfig& cfg, int d) {
  Instance inst;
  inst.n = d + 1;
  inst.points.reserve(balls.size());
  for (const Ball& b : balls) inst.points.emplace_back(sign * b.radius, b.center);
  return solve(inst, cfg);
}

}  // namespace detail

/// Smallest ball enclosing all input balls: lift to (-r_i; c_i); the answer
/// has center xbar* and radius -x0*.
inline BallResult min_enclosing_ball(std::span<const Ball> balls,
                                     const SolverConfig& cfg = {}) {
  const int d = detail::validate_balls(balls);
  SolveResult res = detail::lifted_solve(balls, -1.0, cfg, d);
  Ball out{res.x_star.pbar, -res.x_star.p0};
  return BallResult{std::move(out), res.support, BallMode::Enclosing,
                    std::move(res)};
}

/// Smallest ball meeting all input balls: lift to (r_i; c_i). When the
/// balls already share a point the optimum has x0* > 0 and the result is
/// flagged Enclosed: B(xbar*, x0*) is the largest ball inside the
/// intersection.
inline BallResult min_intersecting_ball(std::span<const Ball> balls,
                                        const SolverConfig& cfg = {}) {
  const int d = detail::validate_balls(balls);
  SolveResult res = detail::lifted_solve(balls, 1.0, cfg, d);
  const double x0 = res.x_star.p0;
  Ball out{res.x_star.pbar, x0 > 0.0 ? x0 : -x0};
  const BallMode mode = x0 > 0.0 ? BallMode::Enclosed : BallMode::Intersecting;
  return BallResult{std::move(out), res.support, mode, std::move(res)};
}

/// Largest ball inside the common intersection; requires the intersection
/// to have nonempty interior (x0* > 0).
inline BallResult largest_enclosed_ball(std::span<const Ball> balls,
                                        const SolverConfig& cfg = {}) {
  const int d = detail::validate_balls(balls);
  SolveResult res = detail::lifted_solve(balls, 1.0, cfg, d);
  if (!(res.x_star.p0 > 0.0))
    throw SolverError(Errc::EmptyIntersection,
                      "the balls have no common interior point");
  Ball out{res.x_star.pbar, res.x_star.p0};
  return BallResult{std::move(out), res.support, BallMode::Enclosed,
                    std::move(res)};
}

/// Smallest ball enclosing every ball of the first group and meeting every
/// ball of the second. Support indices refer to the concatenated input
/// (enclose group first).
inline BallResult min_enclosing_and_intersecting(
    std::span<const Ball> enclose, std::span<const Ball> intersect,
    const SolverConfig& cfg = {}) {
  if (enclose.empty() && intersect.empty())
    throw SolverError(Errc::EmptyInstance, "no balls given");
  if (enclose.empty()) return min_intersecting_ball(intersect, cfg);
  if (intersect.empty()) return min_enclosing_ball(enclose, cfg);
  const int d = detail::validate_balls(enclose);
  const int d2 = detail::validate_balls(intersect);
  if (d != d2)
    throw SolverError(Errc::DimensionMismatch,
                      "the two groups have different dimensions");
  Instance inst;
  inst.n = d + 1;
  inst.points.reserve(enclose.size() + intersect.size());
  for (const Ball& b : enclose) inst.points.emplace_back(-b.radius, b.center);
  for (const Ball& b : intersect) inst.points.emplace_back(b.radius, b.center);
  SolveResult res = solve(inst, cfg);
  Ball out{res.x_star.pbar, -res.x_star.p0};
  return BallResult{std::move(out), res.support, BallMode::Mixed,
                    std::move(res)};
}

}  // namespace coneinf
