#include "rr/lp.hpp"

#include <Eigen/LU>
#include <cmath>
#include <string>

namespace rr::lp {

namespace {

constexpr double kPivotTol = 1e-9;       // smallest acceptable pivot
constexpr double kPivotFloor = 1e-12;    // below this a pivot is meaningless
constexpr double kCostTol = 1e-9;        // reduced-cost optimality tolerance
constexpr double kFeasTol = 1e-9;        // phase-one residual tolerance
constexpr int kDegenerateRunBeforeBland = 50;

enum class ColumnKind { kShift, kFlip, kSplit };

struct ColumnMap {
  ColumnKind kind;
  int col;
  int col2;
  double offset;
};

// min c'z  s.t.  A z = b, z >= 0, b >= 0; original objective = c'z + offset.
struct StandardForm {
  Matrix a;
  Vector b;
  Vector c;
  double offset = 0.0;
  std::vector<ColumnMap> columns;
  std::vector<double> row_sign;  // +1 / -1 per standard row
  int original_rows = 0;
  bool trivially_infeasible = false;
};

StandardForm to_standard_form(const Problem& p) {
  StandardForm sf;
  const int n = p.num_vars();
  const int m = p.num_rows();
  int ncols = 0;
  std::vector<std::pair<int, double>> upper_rows;  // (std column, span)
  sf.columns.resize(n);
  for (int j = 0; j < n; ++j) {
    const double l = p.lower(j);
    const double u = p.upper(j);
    if (std::isfinite(l) && std::isfinite(u) && u < l) sf.trivially_infeasible = true;
    if (std::isfinite(l)) {
      sf.columns[j] = {ColumnKind::kShift, ncols, -1, l};
      if (std::isfinite(u)) upper_rows.emplace_back(ncols, u - l);
      ++ncols;
    } else if (std::isfinite(u)) {
      sf.columns[j] = {ColumnKind::kFlip, ncols, -1, u};
      ++ncols;
    } else {
      sf.columns[j] = {ColumnKind::kSplit, ncols, ncols + 1, 0.0};
      ncols += 2;
    }
  }
  int slacks = static_cast<int>(upper_rows.size());
  for (Sense s : p.senses)
    if (s != Sense::kEqual) ++slacks;

  const int rows = m + static_cast<int>(upper_rows.size());
  const int cols = ncols + slacks;
  sf.a = Matrix::Zero(rows, cols);
  sf.b = Vector::Zero(rows);
  sf.c = Vector::Zero(cols);
  sf.original_rows = m;

  for (int j = 0; j < n; ++j) {
    const ColumnMap& cm = sf.columns[j];
    const double cj = p.objective(j);
    switch (cm.kind) {
      case ColumnKind::kShift:
        sf.c(cm.col) = cj;
        sf.offset += cj * cm.offset;
        break;
      case ColumnKind::kFlip:
        sf.c(cm.col) = -cj;
        sf.offset += cj * cm.offset;
        break;
      case ColumnKind::kSplit:
        sf.c(cm.col) = cj;
        sf.c(cm.col2) = -cj;
        break;
    }
  }

  int slack = ncols;
  for (int i = 0; i < m; ++i) {
    double rhs = p.b(i);
    for (int j = 0; j < n; ++j) {
      const double aij = p.a(i, j);
      if (aij == 0.0) continue;
      const ColumnMap& cm = sf.columns[j];
      switch (cm.kind) {
        case ColumnKind::kShift:
          sf.a(i, cm.col) += aij;
          rhs -= aij * cm.offset;
          break;
        case ColumnKind::kFlip:
          sf.a(i, cm.col) -= aij;
          rhs -= aij * cm.offset;
          break;
        case ColumnKind::kSplit:
          sf.a(i, cm.col) += aij;
          sf.a(i, cm.col2) -= aij;
          break;
      }
    }
    if (p.senses[i] == Sense::kLessEqual) sf.a(i, slack++) = 1.0;
    if (p.senses[i] == Sense::kGreaterEqual) sf.a(i, slack++) = -1.0;
    sf.b(i) = rhs;
  }
  for (std::size_t r = 0; r < upper_rows.size(); ++r) {
    const int i = m + static_cast<int>(r);
    sf.a(i, upper_rows[r].first) = 1.0;
    sf.a(i, slack++) = 1.0;
    sf.b(i) = upper_rows[r].second;
  }
  sf.row_sign.assign(rows, 1.0);
  for (int i = 0; i < rows; ++i) {
    if (sf.b(i) < 0.0) {
      sf.a.row(i) *= -1.0;
      sf.b(i) = -sf.b(i);
      sf.row_sign[i] = -1.0;
    }
  }
  return sf;
}

class Tableau {
 public:
  Tableau(const StandardForm& sf, int max_iterations)
      : structural_(static_cast<int>(sf.a.cols())),
        max_iterations_(max_iterations) {
    const int rows = static_cast<int>(sf.a.rows());
    // Crash basis: reuse any singleton column with a positive entry so that
    // slack-like columns start basic and only the remaining rows need an
    // artificial variable.
    std::vector<int> nnz(structural_, 0);
    std::vector<int> where(structural_, -1);
    for (int j = 0; j < structural_; ++j) {
      for (int i = 0; i < rows; ++i) {
        if (sf.a(i, j) != 0.0) {
          ++nnz[j];
          where[j] = i;
        }
      }
    }
    basis_.assign(rows, -1);
    std::vector<bool> used(structural_, false);
    for (int j = 0; j < structural_; ++j) {
      if (nnz[j] != 1 || used[j]) continue;
      const int i = where[j];
      if (basis_[i] >= 0 || sf.a(i, j) <= 0.0) continue;
      basis_[i] = j;
      used[j] = true;
    }
    int artificials = 0;
    for (int i = 0; i < rows; ++i)
      if (basis_[i] < 0) ++artificials;

    t_ = Matrix::Zero(rows, structural_ + artificials);
    t_.leftCols(structural_) = sf.a;
    rhs_ = sf.b;
    int next = structural_;
    for (int i = 0; i < rows; ++i) {
      if (basis_[i] < 0) {
        t_(i, next) = 1.0;
        basis_[i] = next++;
      } else {
        const double s = t_(i, basis_[i]);
        if (s != 1.0) {
          t_.row(i) /= s;
          rhs_(i) /= s;
        }
      }
    }
    active_.assign(rows, true);
  }

  int rows() const { return static_cast<int>(t_.rows()); }
  int total_cols() const { return static_cast<int>(t_.cols()); }
  int structural() const { return structural_; }
  int iterations() const { return iterations_; }
  const std::vector<int>& basis() const { return basis_; }
  const std::vector<bool>& active() const { return active_; }
  const Vector& rhs() const { return rhs_; }

  bool is_artificial(int j) const { return j >= structural_; }
  bool has_artificials() const { return total_cols() > structural_; }

  // Phase one: minimize the sum of artificials. Returns the optimum.
  double phase_one() {
    Vector cost = Vector::Zero(total_cols());
    for (int j = structural_; j < total_cols(); ++j) cost(j) = 1.0;
    run(cost, /*allow_artificial=*/true);
    double sum = 0.0;
    for (int i = 0; i < rows(); ++i)
      if (is_artificial(basis_[i])) sum += rhs_(i);
    return sum;
  }

  // Pivot basic artificials (at zero) out; rows with no structural entry
  // are linearly dependent and get deactivated.
  void drive_out_artificials() {
    for (int r = 0; r < rows(); ++r) {
      if (!is_artificial(basis_[r])) continue;
      int best = -1;
      for (int j = 0; j < structural_; ++j) {
        if (std::abs(t_(r, j)) > kPivotTol) {
          best = j;
          break;
        }
      }
      if (best < 0) {
        active_[r] = false;
      } else {
        pivot(r, best);
      }
    }
  }

  // Returns false when unbounded.
  bool phase_two(const Vector& structural_cost) {
    Vector cost = Vector::Zero(total_cols());
    cost.head(structural_) = structural_cost;
    return run(cost, /*allow_artificial=*/false);
  }

 private:
  bool run(const Vector& cost, bool allow_artificial) {
    const int ncols = allow_artificial ? total_cols() : structural_;
    const double cost_scale = std::max(1.0, cost.cwiseAbs().maxCoeff());
    const double tol = kCostTol * cost_scale;

    // Reduced costs d = c - c_B' B^{-1} A.
    Vector cb(rows());
    for (int i = 0; i < rows(); ++i) cb(i) = cost(basis_[i]);
    Eigen::RowVectorXd d = cost.transpose() - cb.transpose() * t_;

    std::vector<bool> basic(total_cols(), false);
    for (int i = 0; i < rows(); ++i) basic[basis_[i]] = true;

    bool bland = false;
    int degenerate_run = 0;
    while (true) {
      int q = -1;
      double best = -tol;
      for (int j = 0; j < ncols; ++j) {
        if (basic[j]) continue;
        if (d(j) < best) {
          q = j;
          if (bland) break;
          best = d(j);
        }
      }
      if (q < 0) return true;

      int r = -1;
      double best_ratio = kInf;
      bool tiny_only = false;
      for (int i = 0; i < rows(); ++i) {
        if (!active_[i]) continue;
        const double a = t_(i, q);
        if (a <= kPivotTol) {
          if (a > kPivotFloor) tiny_only = true;
          continue;
        }
        const double ratio = std::max(0.0, rhs_(i)) / a;
        const double tie = 1e-12 * (1.0 + best_ratio);
        if (r < 0 || ratio < best_ratio - tie) {
          r = i;
          best_ratio = ratio;
        } else if (ratio <= best_ratio + tie && basis_[i] < basis_[r]) {
          r = i;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
      if (r < 0) {
        if (tiny_only) {
          throw NumericalError("simplex: only pivots below tolerance remain");
        }
        return false;
      }
      if (++iterations_ > max_iterations_) {
        throw NumericalError("simplex: iteration limit reached");
      }
      if (best_ratio <= 1e-12) {
        if (++degenerate_run > kDegenerateRunBeforeBland) bland = true;
      } else {
        degenerate_run = 0;
      }
      basic[basis_[r]] = false;
      basic[q] = true;
      pivot(r, q);
      const double dq = d(q);
      d.noalias() -= dq * t_.row(r);
      d(q) = 0.0;
    }
  }

  void pivot(int r, int q) {
    const double piv = t_(r, q);
    if (std::abs(piv) < kPivotFloor) {
      throw NumericalError("simplex: pivot magnitude below 1e-12");
    }
    t_.row(r) /= piv;
    rhs_(r) /= piv;
    Vector col = t_.col(q);
    col(r) = 0.0;
    const Eigen::RowVectorXd prow = t_.row(r);
    t_.noalias() -= col * prow;
    rhs_.noalias() -= col * rhs_(r);
    t_.col(q).setZero();
    t_(r, q) = 1.0;
    basis_[r] = q;
  }

  Matrix t_;
  Vector rhs_;
  std::vector<int> basis_;
  std::vector<bool> active_;
  int structural_;
  int max_iterations_;
  int iterations_ = 0;
};

Vector recover_original(const Problem& p, const StandardForm& sf,
                        const Vector& z) {
  Vector x(p.num_vars());
  for (int j = 0; j < p.num_vars(); ++j) {
    const ColumnMap& cm = sf.columns[j];
    switch (cm.kind) {
      case ColumnKind::kShift:
        x(j) = cm.offset + z(cm.col);
        break;
      case ColumnKind::kFlip:
        x(j) = cm.offset - z(cm.col);
        break;
      case ColumnKind::kSplit:
        x(j) = z(cm.col) - z(cm.col2);
        break;
    }
  }
  return x;
}

DualCertificate make_certificate(const StandardForm& sf, const Tableau& tab,
                                 const Vector& z) {
  const std::vector<int>& basis = tab.basis();
  std::vector<int> rows;
  for (int i = 0; i < tab.rows(); ++i)
    if (tab.active()[i]) rows.push_back(i);
  const int k = static_cast<int>(rows.size());
  Matrix bt(k, k);
  Vector cb(k);
  for (int r = 0; r < k; ++r) {
    const int col = basis[rows[r]];
    cb(r) = sf.c(col);
    for (int s = 0; s < k; ++s) bt(r, s) = sf.a(rows[s], col);
  }
  Vector y_active = Vector::Zero(k);
  if (k > 0) y_active = bt.fullPivLu().solve(cb);
  Vector y = Vector::Zero(sf.a.rows());
  for (int r = 0; r < k; ++r) y(rows[r]) = y_active(r);

  DualCertificate cert;
  const Vector reduced = sf.c - sf.a.transpose() * y;
  cert.max_dual_infeasibility =
      reduced.size() > 0 ? std::max(0.0, -reduced.minCoeff()) : 0.0;
  cert.primal_objective = sf.c.dot(z) + sf.offset;
  cert.dual_objective = sf.b.dot(y) + sf.offset;
  cert.gap = std::abs(cert.primal_objective - cert.dual_objective);
  cert.row_duals.resize(sf.original_rows);
  for (int i = 0; i < sf.original_rows; ++i) cert.row_duals(i) = sf.row_sign[i] * y(i);
  return cert;
}

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::kOptimal:
      return "optimal";
    case Status::kInfeasible:
      return "infeasible";
    case Status::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

Problem Problem::with_size(int n, int rows) {
  Problem p;
  p.objective = Vector::Zero(n);
  p.a = Matrix::Zero(rows, n);
  p.b = Vector::Zero(rows);
  p.senses.assign(rows, Sense::kEqual);
  p.lower = Vector::Constant(n, -kInf);
  p.upper = Vector::Constant(n, kInf);
  return p;
}

void Problem::validate() const {
  const Eigen::Index n = objective.size();
  if (a.cols() != n || lower.size() != n || upper.size() != n) {
    throw PreconditionError("lp: variable dimension mismatch");
  }
  if (b.size() != a.rows() || static_cast<Eigen::Index>(senses.size()) != a.rows()) {
    throw PreconditionError("lp: constraint dimension mismatch");
  }
  if (!objective.allFinite() || !a.allFinite() || !b.allFinite()) {
    throw PreconditionError("lp: non-finite coefficient");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isnan(lower(j)) || std::isnan(upper(j)) || lower(j) == kInf ||
        upper(j) == -kInf) {
      throw PreconditionError("lp: invalid variable bound");
    }
  }
}

Solution solve(const Problem& problem, const Options& options) {
  problem.validate();
  const StandardForm sf = to_standard_form(problem);
  Solution sol;
  if (sf.trivially_infeasible) {
    sol.status = Status::kInfeasible;
    return sol;
  }
  const int limit = options.max_iterations > 0
                        ? options.max_iterations
                        : 50 * static_cast<int>(sf.a.rows() + sf.a.cols()) + 1000;
  Tableau tab(sf, limit);

  if (tab.has_artificials()) {
    const double infeasibility = tab.phase_one();
    const double scale = 1.0 + (sf.b.size() > 0 ? sf.b.cwiseAbs().maxCoeff() : 0.0);
    if (infeasibility > kFeasTol * scale) {
      sol.status = Status::kInfeasible;
      sol.iterations = tab.iterations();
      return sol;
    }
    tab.drive_out_artificials();
  }
  const bool bounded = tab.phase_two(sf.c);
  sol.iterations = tab.iterations();
  if (!bounded) {
    sol.status = Status::kUnbounded;
    return sol;
  }

  Vector z = Vector::Zero(tab.structural());
  for (int i = 0; i < tab.rows(); ++i) {
    const int col = tab.basis()[i];
    if (tab.active()[i] && !tab.is_artificial(col)) z(col) = std::max(0.0, tab.rhs()(i));
  }
  sol.status = Status::kOptimal;
  sol.x = recover_original(problem, sf, z);
  sol.objective_value = problem.objective.dot(sol.x);
  if (options.verify) sol.certificate = make_certificate(sf, tab, z);
  return sol;
}

}  // namespace rr::lp
