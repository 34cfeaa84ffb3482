#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rr/common.hpp"

namespace rr {

// ---------------------------------------------------------------------------
// Support ratio engine
//
//   ratio(S) = max_{x != 0} ||H_S x||_1 / ||H_{S^c} x||_1
//
// The maximum of a convex function over the polytope ||H_{S^c} x||_1 <= 1 is
// attained at a vertex. Writing ||H_S x||_1 = max_sigma sigma' H_S x over
// sign vectors sigma turns it into one LP per sign pattern; fixing
// sigma_0 = +1 halves the enumeration by symmetry.
// ---------------------------------------------------------------------------

struct SearchOptions {
  /// Largest |S| whose 2^{|S|-1} sign patterns are enumerated exhaustively.
  int exact_limit = 18;
  /// Random restarts for the local ascent used beyond exact_limit.
  int random_starts = 8;
  int max_ascent_steps = 100;
  std::uint64_t seed = 0x5eed5eedULL;
  /// Worker threads for enumeration (0 = hardware concurrency).
  int threads = 0;
};

struct RatioResult {
  double value = 0.0;  // may be +inf
  Vector direction;    // maximizing x, or a null-space witness when infinite
  bool exact = true;
  /// H_{S^c} is rank deficient but its null space lies in null(H_S); the
  /// ratio is finite and computed on the quotient.
  bool degenerate_complement = false;
};

/// Exact (|S| <= exact_limit) or local-ascent lower bound of ratio(S).
RatioResult support_ratio(const Matrix& h, const IndexSet& support,
                          const SearchOptions& opts = {});

/// ||H_S x||_1 / ||H_{S^c} x||_1 evaluated directly (+inf on a zero
/// denominator with nonzero numerator, 0 when both vanish).
double evaluate_ratio(const Matrix& h, const IndexSet& support, const Vector& x);

// ---------------------------------------------------------------------------
// CSP
// ---------------------------------------------------------------------------

struct CspCertificate {
  int order = 0;
  double beta = 0.0;
  IndexSet witness_support;
  Vector witness_direction;
  bool exact = true;

  bool holds() const { return beta < 1.0; }
};

struct CspOptions {
  /// Exhaustive only when Tm <= exact_limit and C(Tm, s) <= subset_limit.
  int exact_limit = 18;
  std::uint64_t subset_limit = 1'000'000;
  int random_starts = 64;
  std::uint64_t seed = 0xc5bULL;
  int threads = 0;
};

/// beta = max_{|S| <= s} ratio(S). Adding rows to S can only raise the
/// ratio, so only |S| = s is searched.
CspCertificate csp_beta(const Matrix& h, int s, const CspOptions& opts = {});

// ---------------------------------------------------------------------------
// Row-RIP
// ---------------------------------------------------------------------------

enum class RipMode { kEffective, kStrict };

struct RipCertificate {
  int order = 0;
  double delta = 0.0;
  RipMode mode = RipMode::kEffective;
  IndexSet witness_support;
  bool exact = true;
};

struct RipOptions {
  std::uint64_t subset_limit = 1'000'000;
  int random_samples = 20'000;
  std::uint64_t seed = 0x121fULL;
  int threads = 0;
};

/// max(sigma_max(H_T)^2 - 1, 1 - sigma_min(H_T)^2) over |T| = k (effective)
/// or 1 <= |T| <= k (strict). sigma_min counts missing singular values as 0.
RipCertificate rip_delta(const Matrix& h, int k, RipMode mode = RipMode::kEffective,
                         const RipOptions& opts = {});

/// delta for a single row subset.
double rip_delta_of(const Matrix& h, const IndexSet& rows);

// ---------------------------------------------------------------------------
// Uniqueness
// ---------------------------------------------------------------------------

struct UniquenessResult {
  bool unique = false;
  IndexSet witness_deletion;  // rows whose removal breaks column rank
  bool exhaustive = true;
};

struct UniquenessOptions {
  std::uint64_t subset_limit = 1'000'000;
  int random_samples = 50'000;
  std::uint64_t seed = 0x0417ULL;
  int threads = 0;
};

/// True iff deleting any 2*T*k rows leaves H with full column rank.
/// Returns false immediately when Tm - 2Tk < n (too few rows survive).
UniquenessResult check_uniqueness(const Matrix& h, int k, int horizon,
                                  const UniquenessOptions& opts = {});

// ---------------------------------------------------------------------------
// Lemma bridge and error bounds
// ---------------------------------------------------------------------------

/// sqrt((1 + delta_k) / (a (1 - delta_ak))) when delta_k + a delta_ak < a - 1.
std::optional<double> lemma_csp_from_rip(double delta_k, double delta_ak, double a);

enum class BoundKind { kCsp, kRip, kWeighted };

const char* to_string(BoundKind k);

struct BoundReport {
  BoundKind kind = BoundKind::kCsp;
  bool condition_ok = false;
  double value = kInf;  // meaningful only when condition_ok
  std::string note;

  // Echoed inputs and derived constants (NaN when not applicable).
  double beta = std::nan("");
  double delta = std::nan("");
  double sigma_min = std::nan("");
  double mu1 = std::nan("");
  double mu2 = std::nan("");
  double a = std::nan("");
  double tk = std::nan("");
  double eps = std::nan("");
  double omega = std::nan("");
  double ppv = std::nan("");
  double rho = std::nan("");
  double kappa = std::nan("");
};

/// 2 (1 + beta) eps / (sigma_min (1 - beta)); condition_ok iff beta < 1.
BoundReport bound_csp_error(double beta, double sigma_min, double eps);

/// Largest mu1 allowed by the Row-RIP argument:
/// sigma_min - (1/sqrt(a) + 1) sqrt(1 + delta).
double proof_maximal_mu1(double sigma_min, double delta, double a);

/// Row-RIP delta upper bound a (sigma_min - mu1)^2 / (1 + sqrt(a))^2 - 1.
double rip_delta_upper(double sigma_min, double mu1, double a);

struct RipBoundInputs {
  double sigma_min = 0.0;
  double delta = 0.0;  // delta_{(a+1)Tk}
  double a = 2.0;
  int horizon = 1;
  int k = 1;
  double eps = 1.0;
  std::optional<double> mu1;  // defaults to proof_maximal_mu1
};

/// 2 eps / (mu1 sqrt(a T k)). Throws PreconditionError unless
/// a > max(1, 1/(sigma_min - 1)^2) and a T k is an integer.
BoundReport bound_rip_error(const RipBoundInputs& in);

/// kappa = 1 + rho - 2 PPV rho.
double prior_kappa(double ppv, double rho);

/// mu1 + (1 - omega)(1 - sqrt(kappa)) / sqrt(a) * sqrt(1 + delta).
double weighted_mu2(double mu1, double omega, double kappa, double a, double delta);

struct WeightedBoundInputs {
  double mu1 = 0.0;
  double omega = 1.0;
  double ppv = 0.5;
  double rho = 1.0;
  double a = 2.0;
  double delta = 0.0;
  int horizon = 1;
  int k = 1;
  double eps = 1.0;
  /// When given, also enforces a > 1/(sigma_min - 1)^2.
  std::optional<double> sigma_min;
};

/// 2 eps / (mu2 sqrt(a T k)). Throws PreconditionError on
/// a <= max(1, (1 - PPV) rho), omega outside (0, 1], PPV outside (0, 1) or a
/// negative kappa. condition_ok is false when mu2 <= 0.
BoundReport bound_weighted_error(const WeightedBoundInputs& in);

struct SurfaceParams {
  double rho = 1.0;
  double sigma_min = 2.0;
  double a = 2.0;
  int tk = 50;
  double eps = 1.0;
  double delta = 0.0;
  std::optional<double> mu1;  // defaults to proof_maximal_mu1(sigma_min, delta, a)
  std::vector<double> omegas;
  std::vector<double> ppvs;
};

struct SurfaceCell {
  double omega;
  double ppv;
  double kappa;
  double mu2;
  double bound;
  /// Row-RIP delta ceiling implied by the weighted argument; equals
  /// rip_delta_upper at omega = 1.
  double delta_upper;
};

/// Evenly spaced interior grid {1/(steps+1), ..., steps/(steps+1)} plus the
/// endpoint 1 when include_one is set.
std::vector<double> interior_grid(int steps, bool include_one);

std::vector<SurfaceCell> weight_surface(const SurfaceParams& params);

/// CSV with header omega,ppv,kappa,mu2,bound,delta_upper.
void write_surface_csv(std::ostream& out, const std::vector<SurfaceCell>& cells);

}  // namespace rr
