#pragma once

#include <optional>
#include <string>

#include "rr/certify.hpp"
#include "rr/common.hpp"
#include "rr/model.hpp"

namespace rr {

/// H_{T^c} lacks full column rank; `witness` spans part of its null space.
class RankPreconditionError : public PreconditionError {
 public:
  RankPreconditionError(const std::string& what, Vector witness)
      : PreconditionError(what), witness_(std::move(witness)) {}
  const Vector& witness() const { return witness_; }

 private:
  Vector witness_;
};

/// max_v ||H_T v||_1 / ||H_{T^c} v||_1 (+inf when some v in null(H_{T^c})
/// moves the attacked rows).
RatioResult sigma1(const Matrix& h, const IndexSet& support,
                   const SearchOptions& opts = {});

struct AlphaBound {
  bool guaranteed = false;
  double value = 0.0;
  double sigma1 = 0.0;
  double sigma_max_support = 0.0;     // largest singular value of H_T
  double sigma_min_complement = 0.0;  // smallest nonzero one of H_{T^c}
  std::string reason;
};

/// (sigma1 - 1) eps / (sqrt(|T|) sigma_max(H_T) - sigma_min(H_{T^c})), valid
/// when sigma1 > 1 and |T| > sigma_min^2 / sigma_max^2. Otherwise
/// guaranteed = false with the failing condition in `reason`.
AlphaBound alpha_bound(const Matrix& h, const IndexSet& support, double eps,
                       const SearchOptions& opts = {});
AlphaBound alpha_bound(const Matrix& h, const IndexSet& support, double eps,
                       double sigma1_value);

struct AttackDesign {
  IndexSet support;
  Vector x_e;
  Vector e;  // H_T x_e on T, zero elsewhere
  double sigma1 = 0.0;
  double eps = 0.0;
  std::optional<double> alpha_max;
  bool exact = true;
};

/// Solves max ||H_T x||_1 s.t. ||H_{T^c} x||_1 <= eps and assembles the
/// stealthy injection. Throws RankPreconditionError when H_{T^c} is rank
/// deficient.
AttackDesign design_attack(const Matrix& h, const IndexSet& support, double eps,
                           const SearchOptions& opts = {});

struct SuccessVerdict {
  bool effective = false;
  bool stealthy = false;
  double perturbation = 0.0;   // ||x_star - D(y)||_2
  double residual_norm = 0.0;  // ||y - H D(y)||_2
  Vector x_hat;
};

/// Relative slack on the stealth test.
inline constexpr double kStealthRelTol = 1e-9;

/// Decodes the attacked window with the plain l1 decoder and checks both
/// halves of the (eps, alpha)-success definition.
SuccessVerdict verify_success(const ObservationWindow& window, const Vector& x_star,
                              double eps, double alpha);

}  // namespace rr
