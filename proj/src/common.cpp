#include "rr/common.hpp"

#include <Eigen/SVD>

namespace rr {

IndexSet normalize_index_set(IndexSet s, int width) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  for (int i : s) {
    if (i < 0 || i >= width) {
      throw PreconditionError("index " + std::to_string(i) +
                              " out of range [0, " + std::to_string(width) +
                              ")");
    }
  }
  return s;
}

IndexSet complement(const IndexSet& s, int width) {
  IndexSet out;
  out.reserve(width - static_cast<int>(s.size()));
  std::size_t j = 0;
  for (int i = 0; i < width; ++i) {
    if (j < s.size() && s[j] == i) {
      ++j;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

bool contains(const IndexSet& s, int i) {
  return std::binary_search(s.begin(), s.end(), i);
}

Matrix select_rows(const Matrix& h, const IndexSet& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), h.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(r) = h.row(rows[r]);
  return out;
}

Vector select_rows(const Vector& v, const IndexSet& rows) {
  Vector out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) out(r) = v(rows[r]);
  return out;
}

Vector singular_values_padded(const Matrix& h) {
  Vector out = Vector::Zero(h.cols());
  if (h.rows() == 0 || h.cols() == 0) return out;
  Eigen::JacobiSVD<Matrix> svd(h);
  const Vector& sv = svd.singularValues();
  out.head(sv.size()) = sv;
  return out;
}

int numerical_rank(const Matrix& h) {
  if (h.rows() == 0 || h.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(h);
  const Vector& sv = svd.singularValues();
  const double top = sv(0);
  if (top <= 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > kRankTol * top) ++r;
  }
  return r;
}

Matrix null_space(const Matrix& h) {
  const Eigen::Index n = h.cols();
  if (h.rows() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(h, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  int r = 0;
  if (top > 0.0) {
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > kRankTol * top) ++r;
    }
  }
  return svd.matrixV().rightCols(n - r);
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (r > kMax / num) return kMax;
    r = r * num / static_cast<std::uint64_t>(i);
  }
  return r;
}

SubsetIterator::SubsetIterator(int n, int k) : n_(n), k_(k), idx_(k) {
  for (int i = 0; i < k; ++i) idx_[i] = i;
}

bool SubsetIterator::next() {
  int i = k_ - 1;
  while (i >= 0 && idx_[i] == n_ - k_ + i) --i;
  if (i < 0) return false;
  ++idx_[i];
  for (int j = i + 1; j < k_; ++j) idx_[j] = idx_[j - 1] + 1;
  return true;
}

}  // namespace rr
