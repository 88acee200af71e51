#pragma once

#include <chrono>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coneinf/cone.hpp"
#include "coneinf/core.hpp"
#include "coneinf/curve.hpp"
#include "coneinf/qr.hpp"
#include "coneinf/steps.hpp"

namespace coneinf {

/// Working state of one solve: ordered support (anchor first), current
/// iterate, live QR factors of the anchored difference matrix. Factors are
/// refactorized from scratch every 64 edits to bound drift.
class SupportState {
 public:
  SupportState(const Instance& inst, std::vector<int> support, Point x)
      : support_(std::move(support)), x_(std::move(x)), qr_(inst.n - 1) {
    rebuild(inst);
  }

  const std::vector<int>& support() const { return support_; }
  int size() const { return static_cast<int>(support_.size()); }
  int anchor() const { return support_.front(); }
  const Point& x() const { return x_; }
  void set_x(Point x) { x_ = std::move(x); }
  const QrFactors& qr() const { return qr_; }

  void add_point(const Instance& inst, int index) {
    qr_.append_column(inst.points[index].pbar -
                      inst.points[anchor()].pbar);
    support_.push_back(index);
    maybe_rebuild(inst);
  }

  void remove_position(const Instance& inst, int pos) {
    if (pos < 0 || pos >= size())
      throw SolverError(Errc::IndexOutOfRange, "support position out of range");
    qr_.remove_support_point(pos);
    support_.erase(support_.begin() + pos);
    maybe_rebuild(inst);
  }

  void reset(const Instance& inst, int index, Point x) {
    support_ = {index};
    x_ = std::move(x);
    rebuild(inst);
  }

  void rebuild(const Instance& inst) {
    const Eigen::Index dim = inst.n - 1;
    Mat M(dim, size() - 1);
    for (int i = 1; i < size(); ++i)
      M.col(i - 1) = inst.points[support_[i]].pbar -
                     inst.points[support_[0]].pbar;
    qr_ = QrFactors::build(M);
    updates_ = 0;
  }

 private:
  void maybe_rebuild(const Instance& inst) {
    if (++updates_ >= 64) rebuild(inst);
  }

  std::vector<int> support_;
  Point x_;
  QrFactors qr_;
  int updates_ = 0;
};

/// Any singleton ({p}, p) is a dual feasible S-pair; start from the lowest
/// point so dominated instances finish in one optimality check.
inline SupportState initial_spair(const Instance& inst) {
  if (inst.points.empty())
    throw SolverError(Errc::EmptyInstance, "instance has no points");
  int k = 0;
  for (int i = 1; i < inst.m(); ++i)
    if (inst.points[i].p0 < inst.points[k].p0) k = i;
  return SupportState(inst, {k}, inst.points[k]);
}

/// Index of the entering point, or nothing when x is primal feasible.
inline std::optional<int> select_violated(const Instance& inst, const Point& x,
                                          const SolverConfig& cfg,
                                          double scale) {
  const double tol = cfg.eps_feas * scale;
  if (cfg.pivot_rule == PivotRule::FirstViolated) {
    for (int i = 0; i < inst.m(); ++i)
      if (infeasibility(x, inst.points[i]) > tol) return i;
    return std::nullopt;
  }
  int best = -1;
  double worst = tol;
  for (int i = 0; i < inst.m(); ++i) {
    const double v = infeasibility(x, inst.points[i]);
    if (v > worst) {
      worst = v;
      best = i;
    }
  }
  if (best < 0) return std::nullopt;
  return best;
}

namespace detail {

/// Affine coefficients of xbar in the support spatial parts (unique by
/// affine independence), via the live factors.
inline Vec support_coefficients(const Instance& inst, const SupportState& st,
                                double rank_tol) {
  const int s = st.size();
  Vec alpha(s);
  if (s == 1) {
    alpha[0] = 1.0;
    return alpha;
  }
  const Vec dx = st.x().pbar - inst.points[st.anchor()].pbar;
  auto [w, zx] = st.qr().project_residual(dx, rank_tol);
  alpha.tail(s - 1) = -w;
  alpha[0] = 1.0 - alpha.tail(s - 1).sum();
  return alpha;
}

/// Checks Definition-2 conditions at runtime tolerance; returns a message
/// describing the first violation, or nothing.
inline std::optional<std::string> spair_violation(const Instance& inst,
                                                  const SupportState& st,
                                                  double scale,
                                                  const SolverConfig& cfg) {
  const double tol = 1e-7 * scale;
  const Point& x = st.x();
  for (int i = 0; i < st.size(); ++i) {
    const Point& p = inst.points[st.support()[i]];
    const double res =
        std::abs((p.pbar - x.pbar).stableNorm() - (p.p0 - x.p0));
    if (res > tol)
      return "support point " + std::to_string(st.support()[i]) +
             " off the cone boundary by " + std::to_string(res);
  }
  if (st.size() > 1) {
    if (st.qr().min_abs_diag() <= cfg.eps_rank * scale)
      return std::string("support spatial parts are affinely dependent");
    try {
      const Vec dx = x.pbar - inst.points[st.anchor()].pbar;
      auto [w, zx] = st.qr().project_residual(dx, cfg.eps_rank * scale);
      if (zx.stableNorm() > tol)
        return std::string("iterate is outside the support affine hull");
      Vec alpha(st.size());
      alpha.tail(st.size() - 1) = -w;
      alpha[0] = 1.0 - alpha.tail(st.size() - 1).sum();
      if (alpha.minCoeff() < -1e-7)
        return "iterate is outside the support convex hull (coefficient " +
               std::to_string(alpha.minCoeff()) + ")";
    } catch (const SolverError& e) {
      return std::string("coefficient solve failed: ") + e.what();
    }
  }
  return std::nullopt;
}

inline SolveResult make_result(const Instance& inst, const SupportState& st,
                               SolveStats stats, double scale,
                               const SolverConfig& cfg) {
  const Vec alpha = support_coefficients(inst, st, cfg.eps_rank * scale);
  DualCertificate dual =
      reconstruct_dual(inst, st.support(), alpha, st.x(), scale);
  return SolveResult{st.x(), st.support(), std::move(dual), std::move(stats)};
}

inline SolveResult solve_loop(const Instance& inst, SupportState& state,
                              const SolverConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const double scale = instance_scale(inst);
  const double feas_tol = cfg.eps_feas * scale;
  const double mono_band = 1e-12 * scale;
  const int max_major = cfg.effective_max_iterations(inst.m());
  const double neg_inf = -std::numeric_limits<double>::infinity();

  SolveStats stats;
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  double prev_x0 = std::numeric_limits<double>::infinity();

  for (;;) {
    // Top of a major iteration: (S, x) must be a dual feasible S-pair.
    if (auto why = spair_violation(inst, state, scale, cfg)) {
      state.rebuild(inst);  // one recovery attempt: refactorize and recheck
      if (auto again = spair_violation(inst, state, scale, cfg))
        throw SolverError(Errc::NumericalBreakdown,
                          "S-pair invariant lost: " + *again);
    }
    if (state.x().p0 > prev_x0 + mono_band)
      throw SolverError(Errc::NumericalBreakdown,
                        "objective increased across major iterations");
    prev_x0 = state.x().p0;
    stats.x0_history.push_back(prev_x0);

    const auto entering = select_violated(inst, state.x(), cfg, scale);
    if (!entering) {
      stats.wall_time = elapsed();
      return make_result(inst, state, std::move(stats), scale, cfg);
    }
    if (stats.major_iterations >= max_major) {
      stats.wall_time = elapsed();
      throw IterationLimitError(
          make_result(inst, state, std::move(stats), scale, cfg),
          "iteration limit reached (" + std::to_string(max_major) + ")");
    }
    const int star = *entering;
    const Point& p_star = inst.points[star];

    // Is p* itself the solution of Inf_Q(S u {p*})?
    const bool dominates = [&] {
      for (int idx : state.support())
        if (!cone_leq(p_star, inst.points[idx], cfg.eps_feas)) return false;
      return true;
    }();
    if (dominates) {
      state.reset(inst, star, p_star);
      ++stats.major_iterations;
      ++stats.spair_updates;
      continue;
    }

    // |S| = 1: the pair solution is available in closed form.
    if (state.size() == 1 && cfg.use_two_point_shortcut) {
      state.set_x(two_point_solve(inst.points[state.anchor()], p_star));
      state.add_point(inst, star);
      ++stats.major_iterations;
      ++stats.spair_updates;
      continue;
    }

    // Curve searches until p* enters the support.
    bool retried = false;
    int guard = 0;
    bool major_done = false;
    while (!major_done) {
      if (++guard > 2 * inst.n + 8)
        throw SolverError(Errc::NumericalBreakdown,
                          "curve search loop did not terminate");
      CurveSystem cs;
      try {
        cs = build_curve_system(inst, state.support(), state.qr(), p_star,
                                scale, cfg.eps_rank);
      } catch (const SolverError&) {
        if (!retried) {
          state.rebuild(inst);
          retried = true;
          continue;
        }
        throw;
      }

      if (cs.affinely_dependent()) {
        const int k = affdep_drop(cs, state.x().p0);
        state.remove_position(inst, k);
        ++stats.affdep_drops;
        continue;
      }

      // Drops may leave a singleton support whose anchor was not the gate
      // witness; if p* now dominates it, p* solves the pair subproblem
      // (and p*_0 <= x0 here, so the move is monotone).
      if (state.size() == 1 &&
          cone_leq(p_star, inst.points[state.anchor()], cfg.eps_feas)) {
        state.reset(inst, star, p_star);
        ++stats.major_iterations;
        ++stats.spair_updates;
        major_done = true;
        continue;
      }

      const auto pr = partial_step(cs, state.x().p0);
      const double x0_full = full_step(cs, state.x().p0, cfg.eps_dual);
      const double x0_partial = pr ? pr->x0 : neg_inf;
      ++stats.spair_updates;

      if (x0_partial == neg_inf && x0_full == neg_inf) {
        if (!retried) {
          state.rebuild(inst);
          retried = true;
          continue;
        }
        throw SolverError(Errc::NumericalBreakdown,
                          "neither partial nor full step exists");
      }

      const double x0_next = std::max(x0_partial, x0_full);
      const auto xbar = gamma_plus(cs, x0_next);
      if (!xbar) {
        if (!retried) {
          state.rebuild(inst);
          retried = true;
          continue;
        }
        throw SolverError(Errc::NumericalBreakdown,
                          "curve point vanished at the step target");
      }

      if (x0_partial >= x0_full) {
        state.set_x(Point(x0_partial, *xbar));
        state.remove_position(inst, pr->k);
        ++stats.partial_steps;
        if (state.size() == 0)
          throw SolverError(Errc::NumericalBreakdown, "support emptied");
      } else {
        state.set_x(Point(x0_full, *xbar));
        state.add_point(inst, star);
        ++stats.major_iterations;
        major_done = true;
      }
    }
  }
}

}  // namespace detail

/// Solves Inf_Q(P) with the dual simplex-type algorithm: optimality check,
/// entering-point selection, then exact curve searches (partial/full steps,
/// affinely dependent drops) until a better dual feasible S-pair is found.
inline SolveResult solve(const Instance& inst, const SolverConfig& cfg = {}) {
  validate_instance(inst);
  SupportState state = initial_spair(inst);
  return detail::solve_loop(inst, state, cfg);
}

/// Warm start from a caller-supplied dual feasible S-pair (the support must
/// list the anchor first). Validates Definition-2 conditions up front.
inline SolveResult solve_from(const Instance& inst, std::vector<int> support,
                              Point x, const SolverConfig& cfg = {}) {
  validate_instance(inst);
  if (support.empty() || static_cast<int>(support.size()) > inst.n)
    throw SolverError(Errc::InvalidArgument,
                      "support must have between 1 and n points");
  for (int idx : support)
    if (idx < 0 || idx >= inst.m())
      throw SolverError(Errc::IndexOutOfRange, "support index out of range");
  SupportState state(inst, std::move(support), std::move(x));
  const double scale = instance_scale(inst);
  if (auto why = detail::spair_violation(inst, state, scale, cfg))
    throw SolverError(Errc::InvalidArgument,
                      "not a dual feasible S-pair: " + *why);
  return detail::solve_loop(inst, state, cfg);
}

}  // namespace coneinf
