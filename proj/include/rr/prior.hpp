#pragma once

#include <optional>
#include <vector>

#include "rr/common.hpp"
#include "rr/rng.hpp"

namespace rr {

/// Estimated attack support, per step and stacked.
struct SupportPrior {
  std::vector<IndexSet> per_step;
  IndexSet stacked;
};

/// Splits a stacked set into per-step blocks of width m.
SupportPrior prior_from_stacked(IndexSet stacked, int m, int horizon);

/// Bernoulli agreement model: each of the `horizon * m` channels keeps its
/// true membership with probability p and is flipped otherwise.
SupportPrior simulate_prior(const IndexSet& true_support, double p, int m,
                            int horizon, Rng& rng);

/// Confusion counts of a prior against the truth (positive = flagged).
struct PriorQuality {
  int tp = 0;
  int fp = 0;
  int fn = 0;
  int tn = 0;
  std::optional<double> ppv;    // undefined when nothing is flagged
  std::optional<double> rho;    // undefined when the true support is empty
  std::optional<double> kappa;  // needs both of the above
};

PriorQuality compute_quality(const IndexSet& true_support, const SupportPrior& prior,
                             int width);

inline constexpr double kOmegaConfident = 0.01;
inline constexpr double kOmegaSkeptical = 0.99;

/// 0.01 for precision above one half, 0.99 otherwise.
double choose_weight(double ppv);

}  // namespace rr
