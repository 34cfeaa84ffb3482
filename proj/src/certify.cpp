#include "rr/certify.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <charconv>
#include <cmath>
#include <numeric>

#include "rr/lp.hpp"
#include "rr/model.hpp"
#include "rr/parallel.hpp"
#include "rr/rng.hpp"

namespace rr {

namespace {

struct LpRatio {
  double value;  // +inf when unbounded
  Vector x;
};

// max g'x  s.t.  ||hc x||_1 <= 1, with hc x = u - v, u, v >= 0.
LpRatio maximize_linear(const Vector& g, const Matrix& hc) {
  const int n = static_cast<int>(hc.cols());
  const int mc = static_cast<int>(hc.rows());
  lp::Problem p = lp::Problem::with_size(n + 2 * mc, mc + 1);
  p.a.topLeftCorner(mc, n) = hc;
  p.a.block(0, n, mc, mc) = -Matrix::Identity(mc, mc);
  p.a.block(0, n + mc, mc, mc).setIdentity();
  p.a.row(mc).tail(2 * mc).setOnes();
  p.b(mc) = 1.0;
  p.senses[mc] = lp::Sense::kLessEqual;
  p.objective.head(n) = -g;
  p.lower.tail(2 * mc).setZero();
  const lp::Solution sol = lp::solve(p);
  if (sol.status == lp::Status::kUnbounded) return {kInf, Vector::Zero(n)};
  if (sol.status != lp::Status::kOptimal) {
    throw NumericalError("ratio LP infeasible (x = 0 is always feasible)");
  }
  return {-sol.objective_value, sol.x.head(n)};
}

Vector sign_pattern_gradient(const Matrix& hs, std::uint64_t pattern) {
  // Row 0 fixed to +1; bit i of `pattern` flips row i + 1 to -1.
  Vector sigma = Vector::Ones(hs.rows());
  for (Eigen::Index i = 1; i < hs.rows(); ++i) {
    if ((pattern >> (i - 1)) & 1ULL) sigma(i) = -1.0;
  }
  return hs.transpose() * sigma;
}

Vector sign_of(const Vector& v) {
  Vector s(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) s(i) = v(i) < 0.0 ? -1.0 : 1.0;
  return s;
}

Vector random_direction(int n, Rng& rng) {
  Vector x(n);
  for (int i = 0; i < n; ++i) x(i) = standard_normal(rng);
  return x;
}

// Null-space test: +inf witness when some v in null(hc) has hs v != 0.
std::optional<Vector> unbounded_witness(const Matrix& hs, const Matrix& hc,
                                        bool* degenerate) {
  const Matrix nulls = null_space(hc);
  *degenerate = false;
  if (nulls.cols() == 0) return std::nullopt;
  const Matrix image = hs * nulls;
  const double scale = std::max(1.0, hs.norm());
  Eigen::JacobiSVD<Matrix> svd(image, Eigen::ComputeFullV);
  if (svd.singularValues().size() > 0 && svd.singularValues()(0) > kRankTol * scale) {
    Vector v = nulls * svd.matrixV().col(0);
    if (v.norm() > 0.0) v /= v.norm();
    return v;
  }
  *degenerate = true;
  return std::nullopt;
}

struct Best {
  double value = -1.0;
  std::uint64_t index = 0;
  Vector x;
  bool set = false;

  void offer(double v, std::uint64_t i, const Vector& dir) {
    if (!set || v > value) {
      value = v;
      index = i;
      x = dir;
      set = true;
    }
  }
};

Best merge_in_order(const std::vector<Best>& parts) {
  Best out;
  for (const Best& b : parts) {
    if (b.set) out.offer(b.value, b.index, b.x);
  }
  return out;
}

double delta_from_gram(const Matrix& sub) {
  const Matrix gram = sub.transpose() * sub;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  const Vector& ev = es.eigenvalues();  // ascending
  const double lo = std::max(0.0, ev(0));
  const double hi = std::max(0.0, ev(ev.size() - 1));
  return std::max(hi - 1.0, 1.0 - lo);
}

}  // namespace

double evaluate_ratio(const Matrix& h, const IndexSet& support, const Vector& x) {
  const Vector hx = h * x;
  double num = 0.0;
  double den = 0.0;
  std::size_t j = 0;
  for (Eigen::Index i = 0; i < hx.size(); ++i) {
    if (j < support.size() && support[j] == i) {
      num += std::abs(hx(i));
      ++j;
    } else {
      den += std::abs(hx(i));
    }
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : kInf;
  return num / den;
}

RatioResult support_ratio(const Matrix& h, const IndexSet& support_in,
                          const SearchOptions& opts) {
  const int rows = static_cast<int>(h.rows());
  const IndexSet support = normalize_index_set(support_in, rows);
  if (support.empty() || static_cast<int>(support.size()) == rows) {
    throw PreconditionError("support must be nonempty and proper");
  }
  const Matrix hs = select_rows(h, support);
  const Matrix hc = select_rows(h, complement(support, rows));
  const int n = static_cast<int>(h.cols());

  RatioResult out;
  if (auto w = unbounded_witness(hs, hc, &out.degenerate_complement)) {
    out.value = kInf;
    out.direction = *w;
    return out;
  }

  const int s = static_cast<int>(support.size());
  if (s <= opts.exact_limit) {
    const std::uint64_t patterns = 1ULL << (s - 1);
    std::vector<Best> parts(chunk_count(patterns, opts.threads));
    parallel_chunks(patterns, opts.threads,
                    [&](std::size_t begin, std::size_t end, std::size_t chunk) {
                      Best& best = parts[chunk];
                      for (std::size_t p = begin; p < end; ++p) {
                        const LpRatio r =
                            maximize_linear(sign_pattern_gradient(hs, p), hc);
                        best.offer(r.value, p, r.x);
                      }
                    });
    const Best best = merge_in_order(parts);
    out.value = std::max(0.0, best.value);
    out.direction = best.x;
    out.exact = true;
    return out;
  }

  // Local ascent: fix the sign pattern of H_S x, solve the LP, repeat.
  Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(rows),
                      static_cast<std::uint64_t>(s),
                      static_cast<std::uint64_t>(support.front())));
  Best best;
  for (int start = 0; start < opts.random_starts; ++start) {
    Vector x = random_direction(n, rng);
    double current = evaluate_ratio(h, support, x);
    for (int step = 0; step < opts.max_ascent_steps; ++step) {
      const LpRatio r = maximize_linear(hs.transpose() * sign_of(hs * x), hc);
      if (!std::isfinite(r.value)) {
        current = kInf;
        break;
      }
      const double next = evaluate_ratio(h, support, r.x);
      if (!(next > current + 1e-12 * (1.0 + current))) {
        if (next >= current) x = r.x;
        current = std::max(current, next);
        break;
      }
      current = next;
      x = r.x;
    }
    best.offer(current, static_cast<std::uint64_t>(start), x);
  }
  out.value = best.value;
  out.direction = best.x;
  out.exact = false;
  return out;
}

// ---------------------------------------------------------------------------

CspCertificate csp_beta(const Matrix& h, int s, const CspOptions& opts) {
  const int rows = static_cast<int>(h.rows());
  const int n = static_cast<int>(h.cols());
  if (s < 1 || s >= rows) throw PreconditionError("csp_beta requires 1 <= s < Tm");
  CspCertificate cert;
  cert.order = s;

  if (rows - s < n) {
    // Fewer than n complement rows: the complement always has a null vector
    // outside null(H_S) because H has full column rank.
    IndexSet support(s);
    std::iota(support.begin(), support.end(), 0);
    RatioResult r = support_ratio(h, support, {.exact_limit = 0, .random_starts = 1});
    cert.beta = r.value;
    cert.witness_support = support;
    cert.witness_direction = r.direction;
    cert.exact = !std::isfinite(r.value);
    return cert;
  }

  const std::uint64_t subsets = binomial(rows, s);
  if (rows <= opts.exact_limit && subsets <= opts.subset_limit) {
    std::vector<IndexSet> all;
    all.reserve(subsets);
    SubsetIterator it(rows, s);
    do {
      all.push_back(it.current());
    } while (it.next());

    std::vector<Best> parts(chunk_count(all.size(), opts.threads));
    parallel_chunks(all.size(), opts.threads,
                    [&](std::size_t begin, std::size_t end, std::size_t chunk) {
                      Best& best = parts[chunk];
                      SearchOptions so;
                      so.exact_limit = s;
                      so.threads = 1;
                      for (std::size_t i = begin; i < end; ++i) {
                        const RatioResult r = support_ratio(h, all[i], so);
                        best.offer(r.value, i, r.direction);
                        if (!std::isfinite(r.value)) break;
                      }
                    });
    const Best best = merge_in_order(parts);
    cert.beta = best.value;
    cert.witness_support = all[best.index];
    cert.witness_direction = best.x;
    cert.exact = true;
    return cert;
  }

  // Randomized lower bound: alternate "S = top-s entries of |Hx|" with the
  // sign-pattern LP on that S.
  Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(rows),
                      static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(s)));
  Best best;
  IndexSet best_support;
  for (int start = 0; start < opts.random_starts; ++start) {
    Vector x = random_direction(n, rng);
    IndexSet support;
    double current = -1.0;
    for (int step = 0; step < 100; ++step) {
      const Vector hx = h * x;
      std::vector<int> order(rows);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(hx(a)) > std::abs(hx(b));
      });
      IndexSet next_support(order.begin(), order.begin() + s);
      std::sort(next_support.begin(), next_support.end());
      const double here = evaluate_ratio(h, next_support, x);
      if (!(here > current + 1e-12 * (1.0 + std::max(0.0, current)))) break;
      current = here;
      support = next_support;
      const Matrix hs = select_rows(h, support);
      const Matrix hc = select_rows(h, complement(support, rows));
      bool degenerate = false;
      if (auto w = unbounded_witness(hs, hc, &degenerate)) {
        current = kInf;
        x = *w;
        break;
      }
      const LpRatio r = maximize_linear(hs.transpose() * sign_of(hs * x), hc);
      x = r.x;
    }
    if (!best.set || current > best.value) best_support = support;
    best.offer(current, static_cast<std::uint64_t>(start), x);
  }
  cert.beta = best.value;
  cert.witness_support = best_support;
  cert.witness_direction = best.x;
  cert.exact = false;
  return cert;
}

// ---------------------------------------------------------------------------

double rip_delta_of(const Matrix& h, const IndexSet& rows) {
  return delta_from_gram(select_rows(h, rows));
}

RipCertificate rip_delta(const Matrix& h, int k, RipMode mode, const RipOptions& opts) {
  const int rows = static_cast<int>(h.rows());
  if (k < 1 || k > rows) throw PreconditionError("rip_delta requires 1 <= k <= Tm");
  RipCertificate cert;
  cert.order = k;
  cert.mode = mode;

  const int lo = mode == RipMode::kEffective ? k : 1;
  std::uint64_t total = 0;
  for (int size = lo; size <= k; ++size) {
    const std::uint64_t c = binomial(rows, size);
    total = c > opts.subset_limit ? opts.subset_limit + 1 : total + c;
    if (total > opts.subset_limit) break;
  }

  std::vector<IndexSet> candidates;
  if (total <= opts.subset_limit) {
    candidates.reserve(total);
    for (int size = lo; size <= k; ++size) {
      SubsetIterator it(rows, size);
      do {
        candidates.push_back(it.current());
      } while (it.next());
    }
    cert.exact = true;
  } else {
    Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(rows),
                        static_cast<std::uint64_t>(k)));
    candidates.reserve(opts.random_samples);
    for (int i = 0; i < opts.random_samples; ++i) {
      const int size = lo + static_cast<int>(rng() % static_cast<std::uint64_t>(k - lo + 1));
      candidates.push_back(random_subset(rows, size, rng));
    }
    cert.exact = false;
  }

  std::vector<Best> parts(chunk_count(candidates.size(), opts.threads));
  parallel_chunks(candidates.size(), opts.threads,
                  [&](std::size_t begin, std::size_t end, std::size_t chunk) {
                    for (std::size_t i = begin; i < end; ++i) {
                      parts[chunk].offer(rip_delta_of(h, candidates[i]), i, Vector());
                    }
                  });
  const Best best = merge_in_order(parts);
  cert.delta = best.value;
  cert.witness_support = candidates[best.index];
  return cert;
}

// ---------------------------------------------------------------------------

UniquenessResult check_uniqueness(const Matrix& h, int k, int horizon,
                                  const UniquenessOptions& opts) {
  if (k < 0 || horizon < 1) throw PreconditionError("check_uniqueness: bad k or T");
  const int rows = static_cast<int>(h.rows());
  const int n = static_cast<int>(h.cols());
  const int removed = 2 * horizon * k;
  UniquenessResult out;

  if (removed >= rows || rows - removed < n) {
    out.unique = false;
    const int w = std::min(removed, rows);
    out.witness_deletion.resize(w);
    std::iota(out.witness_deletion.begin(), out.witness_deletion.end(), 0);
    return out;
  }
  if (removed == 0) {
    out.unique = has_full_column_rank(h);
    return out;
  }

  auto survives = [&](const IndexSet& deletion) {
    return has_full_column_rank(select_rows(h, complement(deletion, rows)));
  };

  const std::uint64_t total = binomial(rows, removed);
  if (total <= opts.subset_limit) {
    std::vector<IndexSet> all;
    all.reserve(total);
    SubsetIterator it(rows, removed);
    do {
      all.push_back(it.current());
    } while (it.next());
    std::vector<std::int64_t> first_bad(chunk_count(all.size(), opts.threads), -1);
    parallel_chunks(all.size(), opts.threads,
                    [&](std::size_t begin, std::size_t end, std::size_t chunk) {
                      for (std::size_t i = begin; i < end; ++i) {
                        if (!survives(all[i])) {
                          first_bad[chunk] = static_cast<std::int64_t>(i);
                          return;
                        }
                      }
                    });
    out.unique = true;
    out.exhaustive = true;
    for (std::int64_t idx : first_bad) {
      if (idx >= 0) {
        out.unique = false;
        out.witness_deletion = all[idx];
        break;
      }
    }
    return out;
  }

  Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(rows),
                      static_cast<std::uint64_t>(removed)));
  for (int i = 0; i < opts.random_samples; ++i) {
    IndexSet deletion = random_subset(rows, removed, rng);
    if (!survives(deletion)) {
      out.unique = false;
      out.witness_deletion = std::move(deletion);
      out.exhaustive = true;  // a counterexample is conclusive
      return out;
    }
  }
  out.unique = true;
  out.exhaustive = false;
  return out;
}

// ---------------------------------------------------------------------------

std::optional<double> lemma_csp_from_rip(double delta_k, double delta_ak, double a) {
  if (delta_k < 0.0 || delta_ak < 0.0) throw PreconditionError("deltas must be >= 0");
  if (!(a > 1.0)) throw PreconditionError("lemma requires a > 1");
  if (!(delta_k + a * delta_ak < a - 1.0)) return std::nullopt;
  return std::sqrt((1.0 + delta_k) / (a * (1.0 - delta_ak)));
}

const char* to_string(BoundKind k) {
  switch (k) {
    case BoundKind::kCsp:
      return "csp";
    case BoundKind::kRip:
      return "rip";
    case BoundKind::kWeighted:
      return "weighted";
  }
  return "unknown";
}

BoundReport bound_csp_error(double beta, double sigma_min, double eps) {
  if (beta < 0.0 || !(sigma_min > 0.0) || eps < 0.0) {
    throw PreconditionError("bound_csp_error: need beta >= 0, sigma_min > 0, eps >= 0");
  }
  BoundReport r;
  r.kind = BoundKind::kCsp;
  r.beta = beta;
  r.sigma_min = sigma_min;
  r.eps = eps;
  r.condition_ok = beta < 1.0;
  if (r.condition_ok) {
    r.value = 2.0 * (1.0 + beta) * eps / (sigma_min * (1.0 - beta));
  } else {
    r.note = "CSP parameter beta >= 1: no recovery guarantee";
  }
  return r;
}

double proof_maximal_mu1(double sigma_min, double delta, double a) {
  return sigma_min - (1.0 / std::sqrt(a) + 1.0) * std::sqrt(1.0 + delta);
}

double rip_delta_upper(double sigma_min, double mu1, double a) {
  const double d = sigma_min - mu1;
  const double root = 1.0 + std::sqrt(a);
  return a * d * d / (root * root) - 1.0;
}

namespace {

double checked_atk(double a, int horizon, int k) {
  if (horizon < 1 || k < 1) throw PreconditionError("T and k must be >= 1");
  const double atk = a * horizon * k;
  if (std::abs(atk - std::round(atk)) > 1e-9 * std::max(1.0, atk)) {
    throw PreconditionError("a*T*k must be an integer");
  }
  return std::round(atk);
}

void check_sigma_condition(double a, double sigma_min) {
  const double gap = sigma_min - 1.0;
  const double need = gap == 0.0 ? kInf : 1.0 / (gap * gap);
  if (!(a > need)) {
    throw PreconditionError("a must exceed 1/(sigma_min - 1)^2");
  }
}

}  // namespace

BoundReport bound_rip_error(const RipBoundInputs& in) {
  if (!(in.a > 1.0)) throw PreconditionError("a must exceed 1");
  if (in.delta < 0.0 || in.eps < 0.0) throw PreconditionError("delta, eps must be >= 0");
  check_sigma_condition(in.a, in.sigma_min);
  const double atk = checked_atk(in.a, in.horizon, in.k);

  BoundReport r;
  r.kind = BoundKind::kRip;
  r.sigma_min = in.sigma_min;
  r.delta = in.delta;
  r.a = in.a;
  r.tk = static_cast<double>(in.horizon) * in.k;
  r.eps = in.eps;
  r.mu1 = in.mu1.value_or(proof_maximal_mu1(in.sigma_min, in.delta, in.a));
  r.condition_ok = r.mu1 > 0.0;
  if (r.condition_ok) {
    r.value = 2.0 * in.eps / (r.mu1 * std::sqrt(atk));
  } else {
    r.note = "mu1 <= 0: Row-RIP constant too large for a guarantee";
  }
  return r;
}

double prior_kappa(double ppv, double rho) { return 1.0 + rho - 2.0 * ppv * rho; }

double weighted_mu2(double mu1, double omega, double kappa, double a, double delta) {
  return mu1 + (1.0 - omega) * (1.0 - std::sqrt(kappa)) / std::sqrt(a) *
                   std::sqrt(1.0 + delta);
}

BoundReport bound_weighted_error(const WeightedBoundInputs& in) {
  if (!(in.omega > 0.0 && in.omega <= 1.0)) throw PreconditionError("omega must lie in (0, 1]");
  if (!(in.ppv > 0.0 && in.ppv < 1.0)) throw PreconditionError("PPV must lie in (0, 1)");
  if (!(in.rho > 0.0)) throw PreconditionError("rho must be positive");
  if (in.delta < 0.0 || in.eps < 0.0) throw PreconditionError("delta, eps must be >= 0");
  if (!(in.a > std::max(1.0, (1.0 - in.ppv) * in.rho))) {
    throw PreconditionError("a must exceed max(1, (1 - PPV) rho)");
  }
  if (in.sigma_min) check_sigma_condition(in.a, *in.sigma_min);
  const double atk = checked_atk(in.a, in.horizon, in.k);
  const double kappa = prior_kappa(in.ppv, in.rho);
  if (kappa < 0.0) throw PreconditionError("kappa must be >= 0");

  BoundReport r;
  r.kind = BoundKind::kWeighted;
  r.mu1 = in.mu1;
  r.omega = in.omega;
  r.ppv = in.ppv;
  r.rho = in.rho;
  r.a = in.a;
  r.delta = in.delta;
  r.tk = static_cast<double>(in.horizon) * in.k;
  r.eps = in.eps;
  r.kappa = kappa;
  if (in.sigma_min) r.sigma_min = *in.sigma_min;
  r.mu2 = weighted_mu2(in.mu1, in.omega, kappa, in.a, in.delta);
  r.condition_ok = r.mu2 > 0.0;
  if (r.condition_ok) {
    r.value = 2.0 * in.eps / (r.mu2 * std::sqrt(atk));
  } else {
    r.note = "mu2 <= 0: no recovery guarantee";
  }
  return r;
}

std::vector<double> interior_grid(int steps, bool include_one) {
  std::vector<double> out;
  for (int i = 1; i <= steps; ++i) out.push_back(static_cast<double>(i) / (steps + 1));
  if (include_one) out.push_back(1.0);
  return out;
}

std::vector<SurfaceCell> weight_surface(const SurfaceParams& params) {
  if (params.omegas.empty() || params.ppvs.empty()) {
    throw PreconditionError("weight_surface needs a nonempty grid");
  }
  const double mu1 =
      params.mu1.value_or(proof_maximal_mu1(params.sigma_min, params.delta, params.a));
  const double sqrt_a = std::sqrt(params.a);
  const double gap = params.sigma_min - mu1;
  std::vector<SurfaceCell> cells;
  cells.reserve(params.omegas.size() * params.ppvs.size());
  for (double ppv : params.ppvs) {
    for (double omega : params.omegas) {
      WeightedBoundInputs in;
      in.mu1 = mu1;
      in.omega = omega;
      in.ppv = ppv;
      in.rho = params.rho;
      in.a = params.a;
      in.delta = params.delta;
      in.horizon = 1;
      in.k = params.tk;
      in.eps = params.eps;
      in.sigma_min = params.sigma_min;
      const BoundReport r = bound_weighted_error(in);
      const double c = omega + (1.0 - omega) * std::sqrt(r.kappa);
      const double denom = sqrt_a + c;
      cells.push_back({omega, ppv, r.kappa, r.mu2, r.condition_ok ? r.value : kInf,
                       params.a * gap * gap / (denom * denom) - 1.0});
    }
  }
  return cells;
}

namespace {

void put_number(std::ostream& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.write(buf, res.ptr - buf);
}

}  // namespace

void write_surface_csv(std::ostream& out, const std::vector<SurfaceCell>& cells) {
  out << "omega,ppv,kappa,mu2,bound,delta_upper\n";
  for (const SurfaceCell& c : cells) {
    put_number(out, c.omega);
    out << ',';
    put_number(out, c.ppv);
    out << ',';
    put_number(out, c.kappa);
    out << ',';
    put_number(out, c.mu2);
    out << ',';
    put_number(out, c.bound);
    out << ',';
    put_number(out, c.delta_upper);
    out << '\n';
  }
}

}  // namespace rr
