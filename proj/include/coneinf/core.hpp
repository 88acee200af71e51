#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace coneinf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class Errc {
  DimensionMismatch,
  NonFiniteCoordinate,
  EmptyInstance,
  FullSupport,
  IndexOutOfRange,
  RankDeficient,
  AffinelyDependent,
  NoNegativeSigma,
  DegenerateWeights,
  IterationLimit,
  NumericalBreakdown,
  EmptyIntersection,
  ParseError,
  InvalidArgument,
};

class SolverError : public std::runtime_error {
 public:
  SolverError(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// A lifted point p = (p0; pbar): the height p0 plus the spatial part
/// pbar in R^{n-1}.
struct Point {
  double p0 = 0.0;
  Vec pbar;

  Point() = default;
  Point(double height, Vec spatial) : p0(height), pbar(std::move(spatial)) {}

  /// Ambient dimension n of the cone this point lives in.
  Eigen::Index dim() const { return pbar.size() + 1; }

  /// Euclidean norm of the full n-vector (p0; pbar), overflow-safe.
  double norm() const { return std::hypot(p0, pbar.stableNorm()); }

  bool is_finite() const {
    return std::isfinite(p0) && pbar.allFinite();
  }
};

/// Problem data for Inf_Q(P): m lifted points in a cone of dimension n >= 2.
struct Instance {
  int n = 0;
  std::vector<Point> points;

  int m() const { return static_cast<int>(points.size()); }
};

/// max(1, max_i ||p_i||); all relative tolerances are multiples of this.
inline double instance_scale(const Instance& inst) {
  double s = 1.0;
  for (const Point& p : inst.points) s = std::max(s, p.norm());
  return s;
}

inline void validate_instance(const Instance& inst) {
  if (inst.points.empty())
    throw SolverError(Errc::EmptyInstance, "instance has no points");
  if (inst.n < 2)
    throw SolverError(Errc::DimensionMismatch,
                      "cone dimension n must be >= 2, got " +
                          std::to_string(inst.n));
  for (std::size_t i = 0; i < inst.points.size(); ++i) {
    const Point& p = inst.points[i];
    if (p.dim() != inst.n)
      throw SolverError(Errc::DimensionMismatch,
                        "point " + std::to_string(i) + " has dimension " +
                            std::to_string(p.dim()) + ", expected " +
                            std::to_string(inst.n));
    if (!p.is_finite())
      throw SolverError(Errc::NonFiniteCoordinate,
                        "point " + std::to_string(i) +
                            " has a non-finite coordinate");
  }
}

enum class PivotRule { MostInfeasible, FirstViolated };

struct SolverConfig {
  double eps_feas = 1e-9;  // primal feasibility, relative to instance scale
  double eps_dual = 1e-9;  // dual coefficient sign tolerance
  double eps_rank = 1e-12; // affine-dependence / rank test, relative
  int max_iterations = 0;  // 0 = auto (100*m + 1000)
  PivotRule pivot_rule = PivotRule::MostInfeasible;
  bool use_two_point_shortcut = true;

  int effective_max_iterations(int m) const {
    return max_iterations > 0 ? max_iterations : 100 * m + 1000;
  }
};

struct SolveStats {
  int major_iterations = 0;  // points added to the support set
  int spair_updates = 0;     // S-pair replacements (curve searches + shortcuts)
  int partial_steps = 0;
  int affdep_drops = 0;
  double wall_time = 0.0;            // seconds
  std::vector<double> x0_history;    // objective at each dual feasible S-pair
};

/// Dual certificate: vectors y_i = (y_i0; ybar_i), nonzero only on the
/// support. Stored sparsely; y(i) materializes the i-th vector.
struct DualCertificate {
  int m = 0;
  int n = 0;
  std::vector<int> indices;
  std::vector<Point> vectors;

  Point y(int i) const {
    for (std::size_t k = 0; k < indices.size(); ++k)
      if (indices[k] == i) return vectors[k];
    return Point(0.0, Vec::Zero(n - 1));
  }

  /// Sum of all y_i as a full n-vector pair; should equal e_1.
  Point sum() const {
    Point acc(0.0, Vec::Zero(n - 1));
    for (const Point& v : vectors) {
      acc.p0 += v.p0;
      acc.pbar += v.pbar;
    }
    return acc;
  }
};

struct SolveResult {
  Point x_star;
  std::vector<int> support;  // indices into Instance.points, anchor first
  DualCertificate dual;
  SolveStats stats;
};

/// Raised when the iteration safety valve trips; carries the best state
/// reached so the caller can inspect it.
class IterationLimitError : public SolverError {
 public:
  IterationLimitError(SolveResult best, const std::string& what)
      : SolverError(Errc::IterationLimit, what), best_(std::move(best)) {}
  const SolveResult& best() const noexcept { return best_; }

 private:
  SolveResult best_;
};

}  // namespace coneinf
