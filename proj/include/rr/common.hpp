#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace rr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Sorted, duplicate-free list of 0-based row/channel indices.
using IndexSet = std::vector<int>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Relative singular-value threshold used for every rank decision.
inline constexpr double kRankTol = 1e-8;

/// Raised when inputs violate a documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical routine cannot produce a trustworthy answer.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sorts and deduplicates; throws if any index falls outside [0, width).
IndexSet normalize_index_set(IndexSet s, int width);

IndexSet complement(const IndexSet& s, int width);

bool contains(const IndexSet& s, int i);

Matrix select_rows(const Matrix& h, const IndexSet& rows);
Vector select_rows(const Vector& v, const IndexSet& rows);

/// Singular values of h in descending order, padded with zeros up to
/// h.cols() so that the smallest entry is the true lower isometry constant.
Vector singular_values_padded(const Matrix& h);

/// Numerical rank with the module-wide relative tolerance.
int numerical_rank(const Matrix& h);

/// Orthonormal basis of null(h) (columns); empty when h has full column rank.
Matrix null_space(const Matrix& h);

/// Binomial coefficient saturating at uint64 max.
std::uint64_t binomial(int n, int k);

/// Enumerates k-subsets of {0..n-1} in lexicographic order.
class SubsetIterator {
 public:
  SubsetIterator(int n, int k);
  const IndexSet& current() const { return idx_; }
  bool next();

 private:
  int n_;
  int k_;
  IndexSet idx_;
};

/// Random k-subset of {0..n-1}, sorted.
template <class Rng>
IndexSet random_subset(int n, int k, Rng& rng) {
  IndexSet pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  // Partial Fisher-Yates with an explicit bounded draw so the sequence does
  // not depend on the standard library's distribution implementation.
  for (int i = 0; i < k; ++i) {
    const std::uint64_t span = static_cast<std::uint64_t>(n - i);
    const int j = i + static_cast<int>(rng() % span);
    std::swap(pool[i], pool[j]);
  }
  IndexSet out(pool.begin(), pool.begin() + k);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rr
