#pragma once

#include <random>
#include <vector>

#include "coneinf/coneinf.hpp"

namespace coneinf::testing {

inline Point pt(double p0, std::initializer_list<double> spatial) {
  Vec v(static_cast<Eigen::Index>(spatial.size()));
  Eigen::Index i = 0;
  for (double x : spatial) v[i++] = x;
  return Point(p0, std::move(v));
}

inline Instance make_instance(int n, std::vector<Point> points) {
  Instance inst;
  inst.n = n;
  inst.points = std::move(points);
  return inst;
}

/// A state on which a curve search is legal: support points on the boundary
/// of x + Q, x spatially in the relative interior of their hull, plus an
/// entering point violated at x. Support spatial parts are generic, hence
/// affinely independent with probability one.
struct VTriple {
  Instance inst;
  std::vector<int> support;  // 0..s-1
  Point x;
  int star;  // index of the entering point (== s)
};

inline VTriple random_vtriple(std::mt19937_64& rng, int n, int s) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.2, 1.0);

  VTriple vt;
  vt.inst.n = n;
  const int d = n - 1;

  std::vector<Vec> spatial(s);
  for (int i = 0; i < s; ++i) {
    spatial[i] = Vec(d);
    for (int j = 0; j < d; ++j) spatial[i][j] = normal(rng);
  }
  // x in the relative interior of the hull of the spatial parts.
  Vec weights(s);
  for (int i = 0; i < s; ++i) weights[i] = unif(rng);
  weights /= weights.sum();
  Vec xbar = Vec::Zero(d);
  for (int i = 0; i < s; ++i) xbar += weights[i] * spatial[i];
  const double x0 = normal(rng);
  vt.x = Point(x0, xbar);

  for (int i = 0; i < s; ++i) {
    vt.inst.points.emplace_back(x0 + (spatial[i] - xbar).norm(), spatial[i]);
    vt.support.push_back(i);
  }

  // Entering point: spatially generic, height low enough to be violated.
  Vec pstar(d);
  for (int j = 0; j < d; ++j) pstar[j] = normal(rng);
  const double dist = (pstar - xbar).norm();
  const double viol = unif(rng);  // positive infeasibility at x
  vt.inst.points.emplace_back(x0 + dist - viol, pstar);
  vt.star = s;
  return vt;
}

inline CurveSystem curve_system_for(const VTriple& vt, double eps_rank = 1e-12) {
  SupportState state(vt.inst, vt.support, vt.x);
  return build_curve_system(vt.inst, state.support(), state.qr(),
                            vt.inst.points[vt.star], instance_scale(vt.inst),
                            eps_rank);
}

inline Instance random_normal_instance(std::mt19937_64& rng, int n, int m) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Instance inst;
  inst.n = n;
  for (int i = 0; i < m; ++i) {
    Point p(normal(rng), Vec(n - 1));
    for (int j = 0; j < n - 1; ++j) p.pbar[j] = normal(rng);
    inst.points.push_back(std::move(p));
  }
  return inst;
}

}  // namespace coneinf::testing
