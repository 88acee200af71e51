#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace coneinf;
using coneinf::testing::make_instance;
using coneinf::testing::pt;

TEST_CASE("validate_instance accepts consistent data") {
  const auto inst = make_instance(3, {pt(0, {1, 2}), pt(1, {-1, 0})});
  REQUIRE_NOTHROW(validate_instance(inst));
}

TEST_CASE("validate_instance rejects a wrong spatial length") {
  const auto inst = make_instance(3, {pt(0, {1, 2}), pt(1, {-1})});
  try {
    validate_instance(inst);
    FAIL("expected DimensionMismatch");
  } catch (const SolverError& e) {
    CHECK(e.code() == Errc::DimensionMismatch);
  }
}

TEST_CASE("validate_instance rejects NaN coordinates") {
  const auto inst = make_instance(
      3, {pt(0, {1, std::numeric_limits<double>::quiet_NaN()})});
  try {
    validate_instance(inst);
    FAIL("expected NonFiniteCoordinate");
  } catch (const SolverError& e) {
    CHECK(e.code() == Errc::NonFiniteCoordinate);
  }
}

TEST_CASE("validate_instance rejects empty instances") {
  const auto inst = make_instance(3, {});
  try {
    validate_instance(inst);
    FAIL("expected EmptyInstance");
  } catch (const SolverError& e) {
    CHECK(e.code() == Errc::EmptyInstance);
  }
}

TEST_CASE("instance scale is max(1, largest point norm)") {
  CHECK(instance_scale(make_instance(3, {pt(0, {0.1, 0.1})})) == 1.0);
  const auto big = make_instance(3, {pt(3, {4, 0})});
  CHECK(instance_scale(big) == Catch::Approx(5.0));
}

TEST_CASE("dual certificate sums its sparse entries") {
  DualCertificate cert;
  cert.m = 3;
  cert.n = 3;
  cert.indices = {0, 2};
  cert.vectors = {pt(0.5, {0.5, 0}), pt(0.5, {-0.5, 0})};
  const Point total = cert.sum();
  CHECK(total.p0 == Catch::Approx(1.0));
  CHECK(total.pbar.norm() == Catch::Approx(0.0).margin(1e-15));
  CHECK(cert.y(1).p0 == 0.0);
  CHECK(cert.y(2).pbar[0] == Catch::Approx(-0.5));
}
