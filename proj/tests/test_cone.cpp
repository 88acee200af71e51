#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "helpers.hpp"

using namespace coneinf;
using coneinf::testing::pt;

TEST_CASE("cone_leq basic cases") {
  CHECK(cone_leq(pt(0, {0, 0}), pt(1, {0, 0}), 1e-9));          // interior
  CHECK_FALSE(cone_leq(pt(0, {0, 0}), pt(0, {1, 0}), 1e-9));    // 1 > 0
  CHECK(cone_leq(pt(-1, {1, 0}), pt(0, {0, 0}), 1e-9));         // boundary
}

TEST_CASE("infeasibility values") {
  CHECK(infeasibility(pt(-1, {0, 0}), pt(0, {0, 0})) == Catch::Approx(-1));
  CHECK(infeasibility(pt(0, {0, 0}), pt(0, {3, 0})) == Catch::Approx(3));
  CHECK(infeasibility(pt(-1, {1, 0}), pt(0, {0, 0})) ==
        Catch::Approx(0).margin(1e-15));
}

TEST_CASE("mismatched dimensions are reported") {
  try {
    infeasibility(pt(0, {0}), pt(0, {0, 0}));
    FAIL("expected DimensionMismatch");
  } catch (const SolverError& e) {
    CHECK(e.code() == Errc::DimensionMismatch);
  }
}

TEST_CASE("two_point_solve symmetric pair gives the midpoint") {
  const Point x = two_point_solve(pt(0, {0, 0}), pt(0, {2, 0}));
  CHECK(x.p0 == Catch::Approx(-1));
  CHECK(x.pbar[0] == Catch::Approx(1));
  CHECK(x.pbar[1] == Catch::Approx(0).margin(1e-15));
}

TEST_CASE("two_point_solve dominated pair returns the dominating point") {
  const Point x = two_point_solve(pt(0, {0, 0}), pt(5, {3, 0}));
  CHECK(x.p0 == Catch::Approx(0));
  CHECK(x.pbar.norm() == Catch::Approx(0).margin(1e-15));
}

TEST_CASE("two_point_solve generic pair satisfies both boundary conditions") {
  const Point p1 = pt(1, {0, 0});
  const Point p2 = pt(0, {4, 0});
  const Point x = two_point_solve(p1, p2);
  CHECK(x.p0 == Catch::Approx(-1.5));
  CHECK(x.pbar[0] == Catch::Approx(2.5));
  CHECK((p1.pbar - x.pbar).norm() == Catch::Approx(p1.p0 - x.p0));
  CHECK((p2.pbar - x.pbar).norm() == Catch::Approx(p2.p0 - x.p0));
}

TEST_CASE("two_point_solve coincident shifted points") {
  const Point x = two_point_solve(pt(2, {1, 1}), pt(2, {1, 1}));
  CHECK(x.p0 == Catch::Approx(2));
  CHECK(x.pbar[0] == Catch::Approx(1));
}

TEST_CASE("is_point_solution") {
  const std::vector<Point> S = {pt(0, {-1, 0}), pt(0, {1, 0})};
  CHECK(is_point_solution(pt(-2, {0, 0}), S, 1e-9));
  CHECK_FALSE(is_point_solution(pt(0, {3, 0}), {S.data(), 1}, 1e-9));
  CHECK(is_point_solution(pt(0, {0, 0}), {}, 1e-9));  // vacuous
}

TEST_CASE("two_point_solve properties on random pairs") {
  std::mt19937_64 rng(20240915);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    Point p1(normal(rng), Vec(n - 1)), p2(normal(rng), Vec(n - 1));
    for (int j = 0; j < n - 1; ++j) {
      p1.pbar[j] = normal(rng);
      p2.pbar[j] = normal(rng);
    }
    const Point x = two_point_solve(p1, p2);
    const Point y = two_point_solve(p2, p1);

    // Symmetry up to floating-point commutativity.
    CHECK(std::abs(x.p0 - y.p0) <= 1e-14 * pair_scale(p1, p2));
    CHECK((x.pbar - y.pbar).norm() <= 1e-14 * pair_scale(p1, p2));

    // Feasibility for both points.
    CHECK(cone_leq(x, p1, 1e-12));
    CHECK(cone_leq(x, p2, 1e-12));

    // Hull condition: xbar is a convex combination of the boundary-active
    // spatial parts.
    std::vector<const Point*> active;
    for (const Point* p : {&p1, &p2})
      if (std::abs(infeasibility(x, *p)) <= 1e-9 * pair_scale(p1, p2))
        active.push_back(p);
    REQUIRE_FALSE(active.empty());
    if (active.size() == 1) {
      CHECK((x.pbar - active[0]->pbar).norm() <= 1e-9 * pair_scale(p1, p2));
    } else {
      const Vec dir = active[0]->pbar - active[1]->pbar;
      const double len2 = dir.squaredNorm();
      if (len2 > 1e-18) {
        const double t = (x.pbar - active[1]->pbar).dot(dir) / len2;
        CHECK(t >= -1e-9);
        CHECK(t <= 1.0 + 1e-9);
        CHECK((x.pbar - (active[1]->pbar + t * dir)).norm() <=
              1e-9 * pair_scale(p1, p2));
      }
    }

    // cone_leq and infeasibility agree.
    const double eps = 1e-9;
    CHECK(cone_leq(x, p1, eps) ==
          (infeasibility(x, p1) <= eps * pair_scale(x, p1)));
  }
}
