#include "rr/decode.hpp"

#include <cmath>

#include "rr/lp.hpp"

namespace rr {

WeightVector::WeightVector(IndexSet flagged, double omega, int length)
    : omega_(omega) {
  if (!(omega > 0.0 && omega <= 1.0)) {
    throw PreconditionError("omega must lie in (0, 1]");
  }
  flagged_ = normalize_index_set(std::move(flagged), length);
  values_ = Vector::Ones(length);
  for (int i : flagged_) values_(i) = omega;
}

double weighted_l1_norm(const Vector& z, const Vector& w) {
  if (z.size() != w.size()) throw PreconditionError("weight length mismatch");
  return w.dot(z.cwiseAbs());
}

double weighted_l1_norm(const Vector& z, const WeightVector& w) {
  return weighted_l1_norm(z, w.values());
}

namespace {

// Residual split y - Hx = u - v with u, v >= 0; at a vertex at most one of
// u_i, v_i is nonzero so w'(u + v) equals the weighted residual norm.
Estimate decode_with_weights(const ObservationWindow& window, const Vector& w) {
  const Matrix& h = window.h();
  const int rows = window.rows();
  const int n = window.n();
  lp::Problem p = lp::Problem::with_size(n + 2 * rows, rows);
  p.a.leftCols(n) = h;
  p.a.middleCols(n, rows).setIdentity();
  p.a.rightCols(rows) = -Matrix::Identity(rows, rows);
  p.b = window.y();
  p.objective.segment(n, rows) = w;
  p.objective.tail(rows) = w;
  p.lower.tail(2 * rows).setZero();

  const lp::Solution sol = lp::solve(p);
  if (sol.status != lp::Status::kOptimal) {
    throw NumericalError(std::string("decoder LP not optimal: ") +
                         lp::to_string(sol.status));
  }
  Estimate est;
  est.x_hat = sol.x.head(n);
  est.residual = window.y() - h * est.x_hat;
  est.objective = weighted_l1_norm(est.residual, w);
  return est;
}

}  // namespace

Estimate l1_decode(const ObservationWindow& window) {
  return decode_with_weights(window, Vector::Ones(window.rows()));
}

Estimate weighted_l1_decode(const ObservationWindow& window,
                            const WeightVector& w) {
  if (w.size() != window.rows()) {
    throw PreconditionError("weight vector length must equal T*m");
  }
  return decode_with_weights(window, w.values());
}

bool is_successful_recovery(const Vector& x_hat, const Vector& x_true,
                            double rel_tol) {
  if (x_hat.size() != x_true.size()) throw PreconditionError("state length mismatch");
  if (!(rel_tol > 0.0)) throw PreconditionError("rel_tol must be positive");
  const double scale = std::max(x_true.norm(), 1e-12);
  return (x_hat - x_true).norm() <= rel_tol * scale;
}

}  // namespace rr
