#include <doctest.h>

#include "oracles.hpp"
#include "rr/lp.hpp"
#include "rr/rng.hpp"

using namespace rr;

TEST_CASE("lp: small textbook problems") {
  SUBCASE("single lower constraint") {
    lp::Problem p = lp::Problem::with_size(1, 1);
    p.objective << 1;
    p.a << 1;
    p.b << 3;
    p.senses[0] = lp::Sense::kGreaterEqual;
    const lp::Solution s = lp::solve(p);
    REQUIRE(s.status == lp::Status::kOptimal);
    CHECK(s.x(0) == doctest::Approx(3.0));
    CHECK(s.objective_value == doctest::Approx(3.0));
  }
  SUBCASE("symmetric optimum") {
    lp::Problem p = lp::Problem::with_size(2, 1);
    p.objective << 1, 1;
    p.a << 1, 1;
    p.b << 2;
    p.senses[0] = lp::Sense::kGreaterEqual;
    p.lower.setZero();
    const lp::Solution s = lp::solve(p);
    REQUIRE(s.status == lp::Status::kOptimal);
    CHECK(s.objective_value == doctest::Approx(2.0));
  }
  SUBCASE("unbounded ray") {
    lp::Problem p = lp::Problem::with_size(1, 0);
    p.objective << -1;
    p.lower.setZero();
    CHECK(lp::solve(p).status == lp::Status::kUnbounded);
  }
  SUBCASE("infeasible") {
    lp::Problem p = lp::Problem::with_size(1, 2);
    p.objective << 1;
    p.a << 1, 1;
    p.b << 1, 2;
    p.senses = {lp::Sense::kLessEqual, lp::Sense::kGreaterEqual};
    CHECK(lp::solve(p).status == lp::Status::kInfeasible);
  }
  SUBCASE("crossed bounds are infeasible") {
    lp::Problem p = lp::Problem::with_size(1, 0);
    p.lower << 2;
    p.upper << 1;
    CHECK(lp::solve(p).status == lp::Status::kInfeasible);
  }
  SUBCASE("upper-bounded and flipped columns") {
    lp::Problem p = lp::Problem::with_size(2, 1);
    p.objective << -1, -1;
    p.a << 1, 1;
    p.b << 10;
    p.senses[0] = lp::Sense::kLessEqual;
    p.lower << 0, -kInf;
    p.upper << 4, -2;
    const lp::Solution s = lp::solve(p);
    REQUIRE(s.status == lp::Status::kOptimal);
    CHECK(s.x(0) == doctest::Approx(4.0));
    CHECK(s.x(1) == doctest::Approx(-2.0));
    CHECK(s.objective_value == doctest::Approx(-2.0));
  }
  SUBCASE("redundant equality rows") {
    lp::Problem p = lp::Problem::with_size(2, 3);
    p.objective << 1, 2;
    p.a << 1, 1, 2, 2, 1, -1;
    p.b << 2, 4, 0;
    p.lower.setZero();
    const lp::Solution s = lp::solve(p);
    REQUIRE(s.status == lp::Status::kOptimal);
    CHECK(s.x(0) == doctest::Approx(1.0));
    CHECK(s.x(1) == doctest::Approx(1.0));
  }
}

TEST_CASE("lp: degenerate cycling example terminates") {
  // Beale's example cycles under naive Dantzig pricing.
  lp::Problem p = lp::Problem::with_size(4, 3);
  p.objective << -0.75, 150, -0.02, 6;
  p.a << 0.25, -60, -0.04, 9, 0.5, -90, -0.02, 3, 0, 0, 1, 0;
  p.b << 0, 0, 1;
  p.senses.assign(3, lp::Sense::kLessEqual);
  p.lower.setZero();
  const lp::Solution s = lp::solve(p);
  REQUIRE(s.status == lp::Status::kOptimal);
  CHECK(s.objective_value == doctest::Approx(-0.05));
}

TEST_CASE("lp: random bounded problems match vertex enumeration") {
  Rng rng(2024);
  for (int t = 0; t < 150; ++t) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const int m = 1 + static_cast<int>(rng() % 4);
    lp::Problem p = lp::Problem::with_size(n, m);
    for (int j = 0; j < n; ++j) p.objective(j) = standard_normal(rng);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) p.a(i, j) = standard_normal(rng);
      p.b(i) = standard_normal(rng) + 1.0;
      p.senses[i] = rng() % 2 ? lp::Sense::kLessEqual : lp::Sense::kGreaterEqual;
    }
    p.lower.setConstant(-3.0);
    p.upper.setConstant(3.0);

    // Same problem as a x <= b with explicit box rows for the oracle.
    oracle::Matrix a(m + 2 * n, n);
    oracle::Vector b(m + 2 * n);
    for (int i = 0; i < m; ++i) {
      const double s = p.senses[i] == lp::Sense::kLessEqual ? 1.0 : -1.0;
      a.row(i) = s * p.a.row(i);
      b(i) = s * p.b(i);
    }
    a.bottomRows(2 * n) << Matrix::Identity(n, n), -Matrix::Identity(n, n);
    b.tail(2 * n).setConstant(3.0);
    const double expect = oracle::lp_vertex_min(p.objective, a, b);

    const lp::Solution s = lp::solve(p, {.verify = true});
    if (std::isinf(expect)) {
      CHECK(s.status == lp::Status::kInfeasible);
      continue;
    }
    REQUIRE(s.status == lp::Status::kOptimal);
    CHECK(s.objective_value == doctest::Approx(expect).epsilon(1e-9));
    REQUIRE(s.certificate);
    CHECK(s.certificate->gap <= 1e-8 * (1.0 + std::abs(expect)));
    CHECK(s.certificate->max_dual_infeasibility <= 1e-8);
    for (int i = 0; i < m; ++i) {
      if (p.senses[i] == lp::Sense::kLessEqual) CHECK(s.certificate->row_duals(i) <= 1e-9);
      if (p.senses[i] == lp::Sense::kGreaterEqual) CHECK(s.certificate->row_duals(i) >= -1e-9);
    }
  }
}

TEST_CASE("lp: repeated solves are bitwise identical") {
  Rng rng(7);
  lp::Problem p = lp::Problem::with_size(6, 5);
  for (int j = 0; j < 6; ++j) p.objective(j) = standard_normal(rng);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 6; ++j) p.a(i, j) = standard_normal(rng);
    p.b(i) = 1.0;
    p.senses[i] = lp::Sense::kLessEqual;
  }
  p.lower.setConstant(-1);
  p.upper.setConstant(1);
  const lp::Solution a = lp::solve(p);
  const lp::Solution b = lp::solve(p);
  CHECK(a.x == b.x);
  CHECK(a.objective_value == b.objective_value);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("lp: malformed problems are rejected") {
  lp::Problem p = lp::Problem::with_size(2, 1);
  p.b.resize(2);
  CHECK_THROWS_AS(lp::solve(p), PreconditionError);
  lp::Problem q = lp::Problem::with_size(1, 1);
  q.a(0, 0) = std::nan("");
  CHECK_THROWS_AS(lp::solve(q), PreconditionError);
}
