#include "rr/prior.hpp"

namespace rr {

SupportPrior prior_from_stacked(IndexSet stacked, int m, int horizon) {
  if (m < 1 || horizon < 1) throw PreconditionError("m and T must be >= 1");
  SupportPrior out;
  out.stacked = normalize_index_set(std::move(stacked), m * horizon);
  out.per_step.assign(horizon, {});
  for (int i : out.stacked) out.per_step[i / m].push_back(i % m);
  return out;
}

SupportPrior simulate_prior(const IndexSet& true_support, double p, int m, int horizon,
                            Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("agreement p must lie in [0, 1]");
  const int width = m * horizon;
  const IndexSet truth = normalize_index_set(true_support, width);
  IndexSet flagged;
  for (int i = 0; i < width; ++i) {
    const bool attacked = contains(truth, i);
    // One draw per channel even at p in {0, 1} keeps streams aligned.
    const bool agree = uniform01(rng) < p;
    if (agree == attacked) flagged.push_back(i);
  }
  return prior_from_stacked(std::move(flagged), m, horizon);
}

PriorQuality compute_quality(const IndexSet& true_support, const SupportPrior& prior,
                             int width) {
  const IndexSet truth = normalize_index_set(true_support, width);
  const IndexSet flagged = normalize_index_set(prior.stacked, width);
  PriorQuality q;
  for (int i = 0; i < width; ++i) {
    const bool t = contains(truth, i);
    const bool f = contains(flagged, i);
    if (t && f) ++q.tp;
    if (!t && f) ++q.fp;
    if (t && !f) ++q.fn;
    if (!t && !f) ++q.tn;
  }
  if (q.tp + q.fp > 0) q.ppv = static_cast<double>(q.tp) / (q.tp + q.fp);
  if (!truth.empty()) q.rho = static_cast<double>(flagged.size()) / truth.size();
  if (q.ppv && q.rho) q.kappa = 1.0 + *q.rho - 2.0 * *q.ppv * *q.rho;
  return q;
}

double choose_weight(double ppv) {
  if (!(ppv >= 0.0 && ppv <= 1.0)) throw PreconditionError("ppv must lie in [0, 1]");
  return ppv > 0.5 ? kOmegaConfident : kOmegaSkeptical;
}

}  // namespace rr
