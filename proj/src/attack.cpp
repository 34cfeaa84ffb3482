#include "rr/attack.hpp"

#include <cmath>

#include "rr/decode.hpp"

namespace rr {

namespace {

double smallest_nonzero_singular(const Matrix& m) {
  const Vector sv = singular_values_padded(m);
  if (sv.size() == 0 || sv(0) <= 0.0) return 0.0;
  double lo = sv(0);
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > kRankTol * sv(0)) lo = sv(i);
  }
  return lo;
}

}  // namespace

RatioResult sigma1(const Matrix& h, const IndexSet& support, const SearchOptions& opts) {
  return support_ratio(h, support, opts);
}

AlphaBound alpha_bound(const Matrix& h, const IndexSet& support_in, double eps,
                       double sigma1_value) {
  const int rows = static_cast<int>(h.rows());
  const IndexSet support = normalize_index_set(support_in, rows);
  if (support.empty() || static_cast<int>(support.size()) == rows) {
    throw PreconditionError("support must be nonempty and proper");
  }
  if (eps < 0.0) throw PreconditionError("eps must be >= 0");
  AlphaBound out;
  out.sigma1 = sigma1_value;
  const Matrix hs = select_rows(h, support);
  const Matrix hc = select_rows(h, complement(support, rows));
  out.sigma_max_support = singular_values_padded(hs)(0);
  out.sigma_min_complement = smallest_nonzero_singular(hc);

  if (!std::isfinite(sigma1_value)) {
    out.reason = "H_{T^c} rank deficient: attack is unbounded";
    return out;
  }
  if (!(sigma1_value > 1.0)) {
    out.reason = "sigma1 <= 1: no range vector dominated by the attacked rows";
    return out;
  }
  const double t = static_cast<double>(support.size());
  const double smax = out.sigma_max_support;
  const double smin = out.sigma_min_complement;
  if (!(t * smax * smax > smin * smin)) {
    out.reason = "|T| <= sigma_min(H_{T^c})^2 / sigma_max(H_T)^2";
    return out;
  }
  out.guaranteed = true;
  out.value = (sigma1_value - 1.0) * eps / (std::sqrt(t) * smax - smin);
  return out;
}

AlphaBound alpha_bound(const Matrix& h, const IndexSet& support, double eps,
                       const SearchOptions& opts) {
  return alpha_bound(h, support, eps, sigma1(h, support, opts).value);
}

AttackDesign design_attack(const Matrix& h, const IndexSet& support_in, double eps,
                           const SearchOptions& opts) {
  const int rows = static_cast<int>(h.rows());
  const IndexSet support = normalize_index_set(support_in, rows);
  if (support.empty() || static_cast<int>(support.size()) == rows) {
    throw PreconditionError("support must be nonempty and proper");
  }
  if (eps < 0.0) throw PreconditionError("eps must be >= 0");
  const Matrix hc = select_rows(h, complement(support, rows));
  const Matrix nulls = null_space(hc);
  if (nulls.cols() > 0) {
    throw RankPreconditionError(
        "design_attack: H_{T^c} is rank deficient (null space of dimension " +
            std::to_string(nulls.cols()) + ")",
        nulls.col(0));
  }

  const RatioResult ratio = sigma1(h, support, opts);
  AttackDesign out;
  out.support = support;
  out.sigma1 = ratio.value;
  out.eps = eps;
  out.exact = ratio.exact;

  // The program is positively homogeneous: scale the unit-budget maximizer.
  Vector unit = ratio.direction;
  const double budget = (hc * unit).cwiseAbs().sum();
  if (budget > 0.0) unit /= budget;
  out.x_e = eps * unit;
  out.e = Vector::Zero(rows);
  const Vector hx = h * out.x_e;
  for (int i : support) out.e(i) = hx(i);

  const AlphaBound ab = alpha_bound(h, support, eps, ratio.value);
  if (ab.guaranteed) out.alpha_max = ab.value;
  return out;
}

SuccessVerdict verify_success(const ObservationWindow& window, const Vector& x_star,
                              double eps, double alpha) {
  if (x_star.size() != window.n()) throw PreconditionError("x_star length must be n");
  SuccessVerdict v;
  const Estimate est = l1_decode(window);
  v.x_hat = est.x_hat;
  v.perturbation = (x_star - est.x_hat).norm();
  v.residual_norm = est.residual.norm();
  v.effective = v.perturbation >= alpha;
  // Optimal attacks sit on the budget boundary, often with a single nonzero
  // residual entry, so the 2-norm ties eps up to rounding.
  v.stealthy = v.residual_norm <= eps * (1.0 + kStealthRelTol) + 1e-15;
  return v;
}

}  // namespace rr
