#pragma once

#include "rr/common.hpp"
#include "rr/model.hpp"

namespace rr {

/// Per-channel weights: omega on the flagged set, 1 elsewhere.
class WeightVector {
 public:
  /// Throws PreconditionError unless 0 < omega <= 1 and flagged fits in
  /// [0, length).
  WeightVector(IndexSet flagged, double omega, int length);

  static WeightVector ones(int length) { return WeightVector({}, 1.0, length); }

  const Vector& values() const { return values_; }
  double omega() const { return omega_; }
  const IndexSet& flagged() const { return flagged_; }
  int size() const { return static_cast<int>(values_.size()); }

 private:
  Vector values_;
  double omega_;
  IndexSet flagged_;
};

inline WeightVector make_weights(IndexSet t_hat, double omega, int length) {
  return WeightVector(std::move(t_hat), omega, length);
}

double weighted_l1_norm(const Vector& z, const WeightVector& w);
double weighted_l1_norm(const Vector& z, const Vector& w);

struct Estimate {
  Vector x_hat;
  Vector residual;   // y - H x_hat
  double objective;  // weighted 1-norm of the residual
};

/// argmin_x ||y - Hx||_1, solved as an LP.
Estimate l1_decode(const ObservationWindow& window);

/// argmin_x sum_i w_i |y_i - (Hx)_i|, solved as an LP.
Estimate weighted_l1_decode(const ObservationWindow& window,
                            const WeightVector& w);

inline constexpr double kDefaultSuccessTol = 1e-3;

/// ||x_hat - x_true||_2 <= rel_tol * max(||x_true||_2, 1e-12).
bool is_successful_recovery(const Vector& x_hat, const Vector& x_true,
                            double rel_tol = kDefaultSuccessTol);

}  // namespace rr
