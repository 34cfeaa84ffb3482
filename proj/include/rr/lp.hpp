#pragma once

#include <optional>
#include <vector>

#include "rr/common.hpp"

namespace rr::lp {

enum class Sense { kLessEqual, kEqual, kGreaterEqual };

enum class Status { kOptimal, kInfeasible, kUnbounded };

const char* to_string(Status s);

/// minimize  objective' x
/// subject   a.row(i) x  (senses[i])  b(i)
///           lower <= x <= upper      (entries may be infinite)
struct Problem {
  Vector objective;
  Matrix a;
  Vector b;
  std::vector<Sense> senses;
  Vector lower;
  Vector upper;

  /// n variables, `rows` constraints, all variables free, all rows `=`.
  static Problem with_size(int n, int rows);

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(a.rows()); }

  /// Throws PreconditionError on inconsistent shapes or non-finite data.
  void validate() const;
};

/// Dual information for an optimal basis, expressed on the internal
/// standard form (equality rows, nonnegative columns).
struct DualCertificate {
  /// One multiplier per original constraint row, signed for the original
  /// sense (<= rows nonpositive, >= rows nonnegative for minimization).
  Vector row_duals;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;
  /// Largest violation of standard-form dual feasibility (reduced cost < 0).
  double max_dual_infeasibility = 0.0;
};

struct Solution {
  Status status = Status::kInfeasible;
  Vector x;
  double objective_value = 0.0;
  int iterations = 0;
  std::optional<DualCertificate> certificate;
};

struct Options {
  /// Compute and attach the dual certificate.
  bool verify = false;
  /// 0 picks a limit proportional to the tableau size.
  int max_iterations = 0;
};

/// Dense two-phase tableau simplex. Entering column: most negative reduced
/// cost, lowest index on ties; switches to Bland's rule after a run of
/// degenerate pivots. Leaving row: minimum ratio, lowest basic index on
/// ties. Output is a vertex and is bitwise reproducible for a given input.
///
/// Infeasible and unbounded problems are reported through Solution::status.
/// Throws NumericalError when only pivots below 1e-12 remain available or
/// the iteration limit is hit.
Solution solve(const Problem& problem, const Options& options = {});

}  // namespace rr::lp
