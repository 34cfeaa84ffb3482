#include <doctest.h>

#include "rr/prior.hpp"

using namespace rr;

TEST_CASE("simulate_prior extremes") {
  Rng rng(1);
  const IndexSet truth{1, 4, 7};
  const SupportPrior same = simulate_prior(truth, 1.0, 5, 2, rng);
  CHECK(same.stacked == truth);
  CHECK(same.per_step.size() == 2);
  CHECK(same.per_step[0] == IndexSet{1, 4});
  CHECK(same.per_step[1] == IndexSet{2});
  const SupportPrior flip = simulate_prior(truth, 0.0, 5, 2, rng);
  CHECK(flip.stacked == complement(truth, 10));
  CHECK(compute_quality(truth, flip, 10).ppv.value() == 0.0);
  CHECK_THROWS_AS(simulate_prior(truth, 1.5, 5, 2, rng), PreconditionError);
}

TEST_CASE("simulate_prior agreement statistics") {
  Rng rng(2025);
  const IndexSet truth{0, 5, 9, 13};
  const int draws = 10000;
  double hits = 0.0;
  long agree = 0;
  for (int d = 0; d < draws; ++d) {
    const SupportPrior p = simulate_prior(truth, 0.8, 19, 1, rng);
    const PriorQuality q = compute_quality(truth, p, 19);
    hits += q.tp;
    agree += q.tp + q.tn;
    CHECK(q.tp + q.fn == 4);
    CHECK(q.fp + q.tn == 15);
  }
  CHECK(hits / draws == doctest::Approx(3.2).epsilon(0.05 / 3.2));
  const double rate = static_cast<double>(agree) / (19.0 * draws);
  CHECK(std::abs(rate - 0.8) <= 3.0 * std::sqrt(0.8 * 0.2 / (19.0 * draws)));
}

TEST_CASE("compute_quality") {
  const SupportPrior p = prior_from_stacked({0, 1, 4, 5}, 8, 1);
  const PriorQuality q = compute_quality({0, 1, 2, 3}, p, 8);
  CHECK(q.tp == 2);
  CHECK(q.fp == 2);
  CHECK(*q.ppv == 0.5);
  CHECK(*q.rho == 1.0);
  CHECK(*q.kappa == 1.0);

  const PriorQuality perfect = compute_quality({2, 3}, prior_from_stacked({2, 3}, 8, 1), 8);
  CHECK(*perfect.ppv == 1.0);
  CHECK(*perfect.kappa == 0.0);

  const PriorQuality empty = compute_quality({2}, prior_from_stacked({}, 8, 1), 8);
  CHECK_FALSE(empty.ppv);
  CHECK_FALSE(empty.kappa);
  const PriorQuality no_truth = compute_quality({}, prior_from_stacked({1}, 8, 1), 8);
  CHECK_FALSE(no_truth.rho);
}

TEST_CASE("kappa below one exactly when PPV exceeds one half") {
  for (int i = 1; i < 100; ++i) {
    const double ppv = i / 100.0;
    for (double rho : {0.1, 0.5, 1.0, 2.0, 7.5}) {
      const double kappa = 1.0 + rho - 2.0 * ppv * rho;
      CHECK((kappa < 1.0) == (ppv > 0.5));
    }
  }
  CHECK(1.0 + 1.0 - 2.0 * 0.655 * 1.0 == doctest::Approx(0.69));
}

TEST_CASE("choose_weight") {
  CHECK(choose_weight(0.8) == 0.01);
  CHECK(choose_weight(0.3) == 0.99);
  CHECK(choose_weight(0.5) == 0.99);
  CHECK_THROWS_AS(choose_weight(-0.1), PreconditionError);
}
