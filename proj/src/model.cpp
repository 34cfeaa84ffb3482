#include "rr/model.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <string>

namespace rr {

LtiSystem::LtiSystem(Matrix a, Matrix c) : a_(std::move(a)), c_(std::move(c)) {
  if (a_.rows() < 1 || a_.rows() != a_.cols()) {
    throw PreconditionError("state transition matrix must be square, n >= 1");
  }
  if (c_.rows() < 1 || c_.cols() != a_.cols()) {
    throw PreconditionError("output map must be m x n with m >= 1");
  }
}

bool has_full_column_rank(const Matrix& h) {
  if (h.rows() < h.cols()) return false;
  Eigen::JacobiSVD<Matrix> svd(h);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return false;
  return sv(sv.size() - 1) > kRankTol * sv(0);
}

Matrix build_observability_unchecked(const LtiSystem& sys, int horizon,
                                     bool* full_rank) {
  if (horizon < 1) throw PreconditionError("horizon must be >= 1");
  const int m = sys.m();
  const int n = sys.n();
  Matrix h(static_cast<Eigen::Index>(horizon) * m, n);
  // Fill from the bottom: block T-1 is C, block T-2 is C A, ...
  Matrix block = sys.c();
  for (int j = horizon - 1; j >= 0; --j) {
    h.middleRows(static_cast<Eigen::Index>(j) * m, m) = block;
    if (j > 0) block = block * sys.a();
  }
  if (full_rank != nullptr) *full_rank = has_full_column_rank(h);
  return h;
}

Matrix build_observability(const LtiSystem& sys, int horizon) {
  bool ok = false;
  Matrix h = build_observability_unchecked(sys, horizon, &ok);
  if (!ok) throw NumericalError("unobservable window: H is rank deficient");
  return h;
}

ObservationWindow::ObservationWindow(Matrix h, Vector y, int horizon,
                                     std::optional<Vector> base_state)
    : h_(std::move(h)),
      y_(std::move(y)),
      horizon_(horizon),
      base_state_(std::move(base_state)) {
  if (horizon_ < 1) throw PreconditionError("horizon must be >= 1");
  if (h_.rows() == 0 || h_.rows() % horizon_ != 0) {
    throw PreconditionError("H row count must be a positive multiple of T");
  }
  if (y_.size() != h_.rows()) {
    throw PreconditionError("measurement length does not match H");
  }
  if (base_state_ && base_state_->size() != h_.cols()) {
    throw PreconditionError("base state length does not match H");
  }
  if (!has_full_column_rank(h_)) {
    throw NumericalError("unobservable window: H is rank deficient");
  }
}

IndexSet flatten_supports(const std::vector<IndexSet>& supports, int m) {
  IndexSet out;
  for (std::size_t j = 0; j < supports.size(); ++j) {
    const int offset = static_cast<int>(j) * m;
    for (int i : supports[j]) {
      if (i < 0 || i >= m) {
        throw PreconditionError("support index " + std::to_string(i) +
                                " outside [0, m)");
      }
      out.push_back(offset + i);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

AttackScenario AttackScenario::make(std::vector<IndexSet> supports, int m,
                                    Vector e, int k, double eps) {
  const int width = static_cast<int>(supports.size()) * m;
  if (e.size() != width) {
    throw PreconditionError("attack vector length must be T*m");
  }
  for (auto& s : supports) {
    s = normalize_index_set(std::move(s), m);
    if (static_cast<int>(s.size()) > k) {
      throw PreconditionError("per-step support exceeds sparsity budget k");
    }
  }
  AttackScenario out;
  out.stacked_support = flatten_supports(supports, m);
  double noise = 0.0;
  for (int i : complement(out.stacked_support, width)) noise += std::abs(e(i));
  if (!(noise < eps)) {
    throw PreconditionError("noise on the unattacked channels exceeds eps");
  }
  out.supports = std::move(supports);
  out.e = std::move(e);
  out.k = k;
  out.eps = eps;
  return out;
}

ObservationWindow simulate_window(const LtiSystem& sys, const Vector& x0,
                                  int horizon, const AttackScenario& scenario) {
  if (x0.size() != sys.n()) throw PreconditionError("x0 length must be n");
  Matrix h = build_observability(sys, horizon);
  if (scenario.e.size() != h.rows()) {
    throw PreconditionError("attack vector length must be T*m");
  }
  Vector y = h * x0 + scenario.e;
  return ObservationWindow(std::move(h), std::move(y), horizon, x0);
}

LtiSystem random_system(int m, int n, Rng& rng,
                        const RandomSystemOptions& opts) {
  if (n < 1 || m < n) throw PreconditionError("random_system requires m >= n >= 1");
  for (int attempt = 0; attempt < opts.max_retries; ++attempt) {
    Matrix a(n, n);
    Matrix c(m, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) a(i, j) = standard_normal(rng);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < m; ++i) c(i, j) = standard_normal(rng);
    if (opts.spectral_rescale) {
      const double radius =
          Eigen::EigenSolver<Matrix>(a, false).eigenvalues().cwiseAbs().maxCoeff();
      if (radius > 0.0) a /= radius;
    }
    LtiSystem sys(std::move(a), std::move(c));
    bool ok = false;
    build_observability_unchecked(sys, opts.horizon, &ok);
    if (ok) return sys;
  }
  throw NumericalError("random_system: retry budget exhausted");
}

}  // namespace rr
