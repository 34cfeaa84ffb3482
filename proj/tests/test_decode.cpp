#include <doctest.h>

#include "oracles.hpp"
#include "rr/decode.hpp"

using namespace rr;

namespace {

Matrix col(std::initializer_list<double> v) {
  Matrix m(v.size(), 1);
  int i = 0;
  for (double x : v) m(i++, 0) = x;
  return m;
}

Vector vec(std::initializer_list<double> v) {
  Vector out(v.size());
  int i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Matrix gaussian(int r, int c, Rng& rng) {
  Matrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = standard_normal(rng);
  return m;
}

Vector gaussian(int n, Rng& rng) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = standard_normal(rng);
  return v;
}

}  // namespace

TEST_CASE("weighted l1 norm") {
  CHECK(weighted_l1_norm(vec({1, -2, 3}), WeightVector::ones(3)) == 6.0);
  CHECK(weighted_l1_norm(vec({1, -2, 3}), make_weights({1}, 0.5, 3)) == 5.0);
  CHECK(weighted_l1_norm(Vector::Zero(4), make_weights({0, 2}, 0.3, 4)) == 0.0);
  CHECK_THROWS_AS(weighted_l1_norm(vec({1, 2}), WeightVector::ones(3)), PreconditionError);
}

TEST_CASE("make_weights") {
  CHECK(make_weights({0, 2}, 0.1, 4).values() == vec({0.1, 1, 0.1, 1}));
  CHECK(make_weights({}, 0.3, 3).values() == Vector::Ones(3));
  CHECK(make_weights({1}, 1.0, 3).values() == Vector::Ones(3));
  CHECK_THROWS_AS(make_weights({0}, 0.0, 3), PreconditionError);
  CHECK_THROWS_AS(make_weights({0}, 1.5, 3), PreconditionError);
  CHECK_THROWS_AS(make_weights({3}, 0.5, 3), PreconditionError);
}

TEST_CASE("l1_decode hand examples") {
  SUBCASE("consistent data") {
    const Estimate e = l1_decode({col({1, 1, 1}), vec({5, 5, 5}), 1});
    CHECK(e.x_hat(0) == doctest::Approx(5.0));
    CHECK(e.residual.cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("single outlier") {
    const Estimate e = l1_decode({col({1, 1, 1}), vec({0, 0, 9}), 1});
    CHECK(e.x_hat(0) == doctest::Approx(0.0));
    CHECK(oracle::breakpoint_argmin(vec({1, 1, 1}), vec({0, 0, 9}), Vector::Ones(3)) == 0.0);
  }
  SUBCASE("dominant attacked row") {
    const Estimate e = l1_decode({col({1, 1, 3}), vec({0, 0, 1.5}), 1});
    CHECK(e.x_hat(0) == doctest::Approx(0.5));
    CHECK(oracle::breakpoint_argmin(vec({1, 1, 3}), vec({0, 0, 1.5}), Vector::Ones(3)) ==
          doctest::Approx(0.5));
    CHECK(e.objective == doctest::Approx(1.0));
  }
}

TEST_CASE("weighted_l1_decode hand examples") {
  const ObservationWindow w(col({1, 1, 3}), vec({0, 0, 1.5}), 1);
  SUBCASE("correct prior recovers the state") {
    const Estimate e = weighted_l1_decode(w, make_weights({2}, 0.01, 3));
    CHECK(e.x_hat(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(oracle::breakpoint_argmin(vec({1, 1, 3}), vec({0, 0, 1.5}), vec({1, 1, 0.01})) ==
          doctest::Approx(0.0));
  }
  SUBCASE("omega one matches l1") {
    CHECK(weighted_l1_decode(w, make_weights({2}, 1.0, 3)).x_hat(0) == doctest::Approx(0.5));
  }
  SUBCASE("wrong prior") {
    const Estimate e = weighted_l1_decode(w, make_weights({0}, 0.01, 3));
    CHECK(e.x_hat(0) == doctest::Approx(0.5));
    CHECK(oracle::breakpoint_argmin(vec({1, 1, 3}), vec({0, 0, 1.5}), vec({0.01, 1, 1})) ==
          doctest::Approx(0.5));
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(weighted_l1_decode(w, WeightVector::ones(4)), PreconditionError);
  }
}

TEST_CASE("decoder objective equals the reported residual norm") {
  Rng rng(31);
  for (int t = 0; t < 50; ++t) {
    const Matrix h = gaussian(7, 3, rng);
    const Vector y = gaussian(7, rng);
    const WeightVector w = make_weights(random_subset(7, 3, rng), 0.2, 7);
    const Estimate e = weighted_l1_decode({h, y, 1}, w);
    CHECK((e.residual - (y - h * e.x_hat)).norm() <= 1e-12);
    CHECK(e.objective == doctest::Approx(weighted_l1_norm(e.residual, w)).epsilon(1e-9));
  }
}

TEST_CASE("decoders agree with basis enumeration") {
  Rng rng(77);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const int rows = n + 1 + static_cast<int>(rng() % (8 - n));
    const Matrix h = gaussian(rows, n, rng);
    const Vector y = gaussian(rows, rng);
    const ObservationWindow win(h, y, 1);
    CHECK(l1_decode(win).objective == doctest::Approx(oracle::l1_min(h, y)).epsilon(1e-9));
    const WeightVector w = make_weights(random_subset(rows, rows / 2, rng), 0.05, rows);
    CHECK(weighted_l1_decode(win, w).objective ==
          doctest::Approx(oracle::weighted_l1_min(h, y, w.values())).epsilon(1e-9));
  }
}

TEST_CASE("decoder invariants") {
  Rng rng(5);
  for (int t = 0; t < 40; ++t) {
    const Matrix h = gaussian(8, 3, rng);
    const Vector x0 = gaussian(3, rng);
    Vector y = h * x0;
    // Exact recovery without attack.
    CHECK((l1_decode({h, y, 1}).x_hat - x0).norm() <= 1e-9 * (1 + x0.norm()));

    y(static_cast<int>(rng() % 8)) += 5.0 * standard_normal(rng);
    const Estimate base = l1_decode({h, y, 1});
    // Translation equivariance.
    const Vector d = gaussian(3, rng);
    const Estimate moved = l1_decode({h, y + h * d, 1});
    CHECK((moved.x_hat - (base.x_hat + d)).norm() <= 1e-8 * (1 + d.norm()));
    CHECK(moved.objective == doctest::Approx(base.objective).epsilon(1e-9));
    // omega = 1 reduction.
    const WeightVector ones = make_weights(random_subset(8, 2, rng), 1.0, 8);
    CHECK(weighted_l1_decode({h, y, 1}, ones).objective ==
          doctest::Approx(base.objective).epsilon(1e-12));
  }
}

TEST_CASE("down-weighting the true support keeps an exact decode exact") {
  Rng rng(19);
  int checked = 0;
  for (int t = 0; t < 200 && checked < 40; ++t) {
    const Matrix h = gaussian(9, 2, rng);
    const Vector x0 = gaussian(2, rng);
    const IndexSet support = random_subset(9, 2, rng);
    Vector y = h * x0;
    for (int i : support) y(i) += 3.0 * standard_normal(rng);
    const ObservationWindow win(h, y, 1);
    const double err1 = (l1_decode(win).x_hat - x0).norm();
    if (err1 > 1e-9) continue;
    ++checked;
    double prev = err1;
    for (double omega : {0.8, 0.5, 0.2, 0.01}) {
      const double err = (weighted_l1_decode(win, make_weights(support, omega, 9)).x_hat - x0).norm();
      CHECK(err <= prev + 1e-9);
      prev = err;
    }
  }
  CHECK(checked >= 10);
}

TEST_CASE("decoders reject rank-deficient H") {
  Matrix h(3, 2);
  h << 1, 2, 2, 4, 3, 6;
  CHECK_THROWS_AS(l1_decode({h, Vector::Zero(3), 1}), NumericalError);
}

TEST_CASE("success criterion") {
  const Vector x = vec({1, 0});
  CHECK(is_successful_recovery(x, x));
  CHECK_FALSE(is_successful_recovery(vec({1.002, 0}), x, 0.001));
  CHECK(is_successful_recovery(vec({1.0005, 0}), x, 0.001));
  CHECK(is_successful_recovery(Vector::Zero(2), Vector::Zero(2)));
  CHECK_FALSE(is_successful_recovery(vec({1e-6, 0}), Vector::Zero(2)));
}
