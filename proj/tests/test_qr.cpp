#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "helpers.hpp"

using namespace coneinf;

namespace {

Mat random_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> normal;
  Mat M(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) M(i, j) = normal(rng);
  return M;
}

double reconstruction_error(const QrFactors& qr, const Mat& M) {
  if (M.cols() == 0) return 0.0;
  return (qr.reconstruct() - M).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("qr_build on the identity") {
  const Mat M = Mat::Identity(2, 2);
  const auto qr = QrFactors::build(M);
  CHECK(reconstruction_error(qr, M) <= 1e-14);
  CHECK(std::abs(std::abs(qr.R()(0, 0)) - 1.0) <= 1e-14);
  CHECK(std::abs(std::abs(qr.R()(1, 1)) - 1.0) <= 1e-14);
  CHECK(qr.R()(1, 0) == 0.0);
}

TEST_CASE("qr_build single column has |R11| = column norm") {
  Mat M(2, 1);
  M << 3, 4;
  const auto qr = QrFactors::build(M);
  CHECK(std::abs(qr.R()(0, 0)) == Catch::Approx(5.0));
  CHECK(reconstruction_error(qr, M) <= 1e-14);
}

TEST_CASE("qr_build reconstructs a random rectangular matrix") {
  std::mt19937_64 rng(7);
  const Mat M = random_matrix(rng, 3, 2);
  const auto qr = QrFactors::build(M);
  CHECK(reconstruction_error(qr, M) <= 1e-12);
  CHECK(qr.orthogonality_error() <= 1e-13);
}

TEST_CASE("append to empty factors") {
  QrFactors qr(3);
  Vec col(3);
  col << 1, 2, 2;
  qr.append_column(col);
  CHECK(std::abs(qr.R()(0, 0)) == Catch::Approx(3.0));
  CHECK(reconstruction_error(qr, col) <= 1e-14);
}

TEST_CASE("append matches a fresh factorization") {
  std::mt19937_64 rng(11);
  const Mat M = random_matrix(rng, 5, 2);
  auto qr = QrFactors::build(M.leftCols(1));
  qr.append_column(M.col(1));
  CHECK(reconstruction_error(qr, M) <= 1e-12);
  CHECK(qr.orthogonality_error() <= 1e-12);
}

TEST_CASE("appending a duplicate column is legal") {
  std::mt19937_64 rng(13);
  const Mat M = random_matrix(rng, 4, 1);
  auto qr = QrFactors::build(M);
  REQUIRE_NOTHROW(qr.append_column(M.col(0)));
  Mat M2(4, 2);
  M2 << M, M;
  CHECK(reconstruction_error(qr, M2) <= 1e-12);
  // Deficiency shows up in the diagonal, not as an error.
  CHECK(qr.min_abs_diag() <= 1e-12);
}

TEST_CASE("append past the dimension throws FullSupport") {
  QrFactors qr(1);
  qr.append_column(Vec::Ones(1));
  try {
    qr.append_column(Vec::Ones(1));
    FAIL("expected FullSupport");
  } catch (const SolverError& e) {
    CHECK(e.code() == Errc::FullSupport);
  }
}

TEST_CASE("remove the only column leaves empty factors") {
  Mat M(3, 1);
  M << 1, 2, 2;
  auto qr = QrFactors::build(M);
  qr.remove_column(0);
  CHECK(qr.cols() == 0);
}

TEST_CASE("remove middle column matches rebuild") {
  std::mt19937_64 rng(17);
  const Mat M = random_matrix(rng, 4, 3);
  auto qr = QrFactors::build(M);
  qr.remove_column(1);
  Mat expect(4, 2);
  expect << M.col(0), M.col(2);
  CHECK(reconstruction_error(qr, expect) <= 1e-10);
  CHECK(qr.orthogonality_error() <= 1e-12);
}

TEST_CASE("anchor removal re-anchors the difference matrix") {
  // Support {a, b, c}: M = [b-a, c-a]. Removing the anchor must produce
  // the factors of [c-b].
  std::mt19937_64 rng(19);
  std::normal_distribution<double> normal;
  Vec a(3), b(3), c(3);
  for (int i = 0; i < 3; ++i) {
    a[i] = normal(rng);
    b[i] = normal(rng);
    c[i] = normal(rng);
  }
  Mat M(3, 2);
  M << (b - a), (c - a);
  auto qr = QrFactors::build(M);
  qr.remove_support_point(0);
  Mat expect(3, 1);
  expect << (c - b);
  CHECK(reconstruction_error(qr, expect) <= 1e-10);
  CHECK(qr.orthogonality_error() <= 1e-12);
}

TEST_CASE("solve_normal") {
  SECTION("identity R") {
    const auto qr = QrFactors::build(Mat::Identity(3, 3));
    Vec rhs(3);
    rhs << 1, 2, 3;
    const Vec t = qr.solve_normal(rhs, 1e-12);
    CHECK((t - rhs).cwiseAbs().maxCoeff() <= 1e-14);
  }
  SECTION("single column") {
    Mat M(2, 1);
    M << 2, 0;
    const auto qr = QrFactors::build(M);
    Vec rhs(1);
    rhs << 8;
    CHECK(qr.solve_normal(rhs, 1e-12)[0] == Catch::Approx(2.0));
  }
  SECTION("random system residual") {
    std::mt19937_64 rng(23);
    const Mat M = random_matrix(rng, 4, 3);
    const auto qr = QrFactors::build(M);
    Vec rhs(3);
    rhs << 1, -2, 0.5;
    const Vec t = qr.solve_normal(rhs, 1e-12);
    CHECK((M.transpose() * M * t - rhs).cwiseAbs().maxCoeff() <= 1e-10);
  }
  SECTION("rank deficiency is reported") {
    Mat M(3, 2);
    M << 1, 1, 2, 2, 0, 0;
    const auto qr = QrFactors::build(M);
    try {
      qr.solve_normal(Vec::Ones(2), 1e-12);
      FAIL("expected RankDeficient");
    } catch (const SolverError& e) {
      CHECK(e.code() == Errc::RankDeficient);
    }
  }
}

TEST_CASE("project_residual") {
  SECTION("empty factors pass d through") {
    QrFactors qr(2);
    Vec d(2);
    d << 1, 3;
    const auto [w, z] = qr.project_residual(d, 1e-12);
    CHECK(w.size() == 0);
    CHECK((z - d).cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("projection onto the x-axis") {
    Mat M(2, 1);
    M << 2, 0;
    const auto qr = QrFactors::build(M);
    Vec d(2);
    d << 1, 3;
    const auto [w, z] = qr.project_residual(d, 1e-12);
    CHECK(z[0] == Catch::Approx(0.0).margin(1e-14));
    CHECK(z[1] == Catch::Approx(3.0));
    // w = -M^+ d = -(1/4)(2*1) = -1/2
    CHECK(w[0] == Catch::Approx(-0.5));
  }
  SECTION("d in range(M) gives z ~ 0") {
    std::mt19937_64 rng(29);
    const Mat M = random_matrix(rng, 5, 3);
    const auto qr = QrFactors::build(M);
    Vec t(3);
    t << 0.3, -1.2, 0.7;
    const auto [w, z] = qr.project_residual(M * t, 1e-12);
    CHECK(z.norm() <= 1e-12 * M.norm());
    CHECK((w + t).cwiseAbs().maxCoeff() <= 1e-10);
  }
  SECTION("z is orthogonal to range(M)") {
    std::mt19937_64 rng(31);
    const Mat M = random_matrix(rng, 6, 4);
    const auto qr = QrFactors::build(M);
    Vec d(6);
    for (int i = 0; i < 6; ++i) d[i] = std::sin(1.0 + i);
    const auto [w, z] = qr.project_residual(d, 1e-12);
    CHECK((M.transpose() * z).cwiseAbs().maxCoeff() <= 1e-12 * M.norm());
  }
}

TEST_CASE("random edit sequences stay accurate") {
  std::mt19937_64 rng(20240916);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = 2 + static_cast<int>(rng() % 6);
    // Shadow copy of the column set to rebuild the expected matrix.
    std::vector<Vec> cols;
    QrFactors qr(dim);
    for (int op = 0; op < 50; ++op) {
      const bool can_add = static_cast<int>(cols.size()) < dim;
      const bool add = cols.empty() || (can_add && rng() % 2 == 0);
      if (add) {
        Vec c(dim);
        for (int i = 0; i < dim; ++i) c[i] = normal(rng);
        qr.append_column(c);
        cols.push_back(c);
      } else {
        const int j = static_cast<int>(rng() % cols.size());
        qr.remove_column(j);
        cols.erase(cols.begin() + j);
      }
    }
    Mat M(dim, static_cast<int>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) M.col(j) = cols[j];
    CHECK(reconstruction_error(qr, M) <= 1e-9);
    CHECK(qr.orthogonality_error() <= 1e-9);
  }
}

TEST_CASE("rank-1 update matches a direct factorization") {
  std::mt19937_64 rng(37);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 3 + static_cast<int>(rng() % 4);
    const int cols = 1 + static_cast<int>(rng() % (dim - 1));
    const Mat M = random_matrix(rng, dim, cols);
    Vec u(dim), v(cols);
    for (int i = 0; i < dim; ++i) u[i] = normal(rng);
    for (int j = 0; j < cols; ++j) v[j] = normal(rng);
    auto qr = QrFactors::build(M);
    qr.rank1_update(u, v);
    const Mat expect = M + u * v.transpose();
    CHECK(reconstruction_error(qr, expect) <= 1e-10 * (1 + expect.norm()));
    CHECK(qr.orthogonality_error() <= 1e-11);
  }
}
