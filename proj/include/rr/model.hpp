#pragma once

#include <optional>
#include <vector>

#include "rr/common.hpp"
#include "rr/rng.hpp"

namespace rr {

/// Discrete LTI plant x_{i+1} = A x_i, y_i = C x_i + e_i.
class LtiSystem {
 public:
  LtiSystem(Matrix a, Matrix c);

  const Matrix& a() const { return a_; }
  const Matrix& c() const { return c_; }
  int n() const { return static_cast<int>(a_.rows()); }
  int m() const { return static_cast<int>(c_.rows()); }

 private:
  Matrix a_;
  Matrix c_;
};

/// Stacked observability matrix for a T-step window, descending time:
/// block j (from the top) is C A^{T-1-j}, so the bottom block is C.
/// Throws NumericalError("unobservable window") when H loses column rank.
Matrix build_observability(const LtiSystem& sys, int horizon);

/// Same stacking without the rank check; `full_rank` receives the verdict.
Matrix build_observability_unchecked(const LtiSystem& sys, int horizon,
                                     bool* full_rank);

bool has_full_column_rank(const Matrix& h);

/// Measurements of one decoding window together with the matrix that
/// generated them. H is required to have full column rank.
class ObservationWindow {
 public:
  ObservationWindow(Matrix h, Vector y, int horizon,
                    std::optional<Vector> base_state = std::nullopt);

  const Matrix& h() const { return h_; }
  const Vector& y() const { return y_; }
  int horizon() const { return horizon_; }
  int per_step() const { return static_cast<int>(h_.rows()) / horizon_; }
  int rows() const { return static_cast<int>(h_.rows()); }
  int n() const { return static_cast<int>(h_.cols()); }
  const std::optional<Vector>& base_state() const { return base_state_; }

 private:
  Matrix h_;
  Vector y_;
  int horizon_;
  std::optional<Vector> base_state_;
};

/// Stacks per-step supports (descending time, block j shifted by j*m).
IndexSet flatten_supports(const std::vector<IndexSet>& supports, int m);

/// Sparse attack plus bounded noise over one window.
struct AttackScenario {
  std::vector<IndexSet> supports;
  IndexSet stacked_support;
  Vector e;
  int k = 0;
  double eps = 0.0;

  /// Validates |T_j| <= k and the noise budget on the stacked complement.
  static AttackScenario make(std::vector<IndexSet> supports, int m, Vector e,
                             int k, double eps);
};

/// y = H x0 + e for the given window length.
ObservationWindow simulate_window(const LtiSystem& sys, const Vector& x0,
                                  int horizon, const AttackScenario& scenario);

struct RandomSystemOptions {
  int horizon = 1;
  int max_retries = 100;
  /// Rescale A to unit spectral radius (off by default).
  bool spectral_rescale = false;
};

/// A and C with i.i.d. standard normal entries, redrawn until the window
/// observability matrix has full column rank. Requires m >= n.
LtiSystem random_system(int m, int n, Rng& rng,
                        const RandomSystemOptions& opts = {});

}  // namespace rr
