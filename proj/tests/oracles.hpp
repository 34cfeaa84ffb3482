#pragma once

// Brute-force reference computations. None of these call into the library's
// LP or ratio engines, so agreement with them is an independent check.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Calls fn(subset) for every k-subset of {0..n-1}.
inline void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline Matrix rows_of(const Matrix& h, const std::vector<int>& rows) {
  Matrix out(rows.size(), h.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(i) = h.row(rows[i]);
  return out;
}

inline std::vector<int> others(int width, const std::vector<int>& s) {
  std::vector<int> out;
  for (int i = 0; i < width; ++i) {
    bool in = false;
    for (int j : s) in = in || j == i;
    if (!in) out.push_back(i);
  }
  return out;
}

// min_x sum_i w_i |y_i - h_i x| for full-column-rank H. Some minimizer
// interpolates n rows exactly, so trying every invertible n-row system is
// exhaustive.
inline double weighted_l1_min(const Matrix& h, const Vector& y, const Vector& w) {
  const int rows = static_cast<int>(h.rows());
  const int n = static_cast<int>(h.cols());
  double best = kInf;
  for_each_subset(rows, n, [&](const std::vector<int>& j) {
    const Matrix hj = rows_of(h, j);
    Eigen::FullPivLU<Matrix> lu(hj);
    if (!lu.isInvertible()) return;
    Vector yj(n);
    for (int i = 0; i < n; ++i) yj(i) = y(j[i]);
    const Vector x = lu.solve(yj);
    const double obj = (w.array() * (y - h * x).array().abs()).sum();
    best = std::min(best, obj);
  });
  return best;
}

inline double l1_min(const Matrix& h, const Vector& y) {
  return weighted_l1_min(h, y, Vector::Ones(h.rows()));
}

// Scalar weighted l1 fit: the objective is piecewise linear with kinks at
// y_i / h_i, so its minimum sits at one of them.
inline double breakpoint_argmin(const Vector& h, const Vector& y, const Vector& w) {
  double best_x = 0.0;
  double best = kInf;
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    if (h(i) == 0.0) continue;
    const double x = y(i) / h(i);
    const double obj = (w.array() * (y - h * x).array().abs()).sum();
    if (obj < best - 1e-15) {
      best = obj;
      best_x = x;
    }
  }
  return best_x;
}

inline double ratio_at(const Matrix& h, const std::vector<int>& s, const Vector& v) {
  const std::vector<int> c = others(static_cast<int>(h.rows()), s);
  const double num = (rows_of(h, s) * v).cwiseAbs().sum();
  const double den = c.empty() ? 0.0 : (rows_of(h, c) * v).cwiseAbs().sum();
  const double scale = h.cwiseAbs().maxCoeff() * v.norm();
  if (den <= 1e-12 * scale) return num <= 1e-12 * scale ? 0.0 : kInf;
  return num / den;
}

// max_v ||H_S v||_1 / ||H_{S^c} v||_1. Inside a cone where every row of H v
// keeps its sign both norms are linear, so the ratio peaks on an extreme ray:
// a direction annihilated by n - 1 rows of H.
inline double support_ratio(const Matrix& h, const std::vector<int>& s) {
  const int rows = static_cast<int>(h.rows());
  const int n = static_cast<int>(h.cols());
  if (n == 1) return ratio_at(h, s, Vector::Ones(1));
  double best = 0.0;
  for_each_subset(rows, n - 1, [&](const std::vector<int>& j) {
    const Matrix hj = rows_of(h, j);
    Eigen::FullPivLU<Matrix> lu(hj);
    const Matrix ker = lu.kernel();
    if (ker.cols() != 1) return;
    Vector v = ker.col(0);
    v /= v.norm();
    best = std::max(best, ratio_at(h, s, v));
  });
  // Null directions of the complement are extreme rays too.
  const std::vector<int> c = others(rows, s);
  if (!c.empty()) {
    const Matrix ker = Eigen::FullPivLU<Matrix>(rows_of(h, c)).kernel();
    if (!(ker.cols() == 1 && ker.col(0).isZero())) {
      for (Eigen::Index i = 0; i < ker.cols(); ++i) {
        best = std::max(best, ratio_at(h, s, ker.col(i) / ker.col(i).norm()));
      }
    }
  }
  return best;
}

inline double csp_beta(const Matrix& h, int s) {
  double best = 0.0;
  for_each_subset(static_cast<int>(h.rows()), s, [&](const std::vector<int>& sup) {
    best = std::max(best, support_ratio(h, sup));
  });
  return best;
}

// Effective-mode Row-RIP constant from a full SVD of every k-row block.
inline double rip_delta(const Matrix& h, int k) {
  const int n = static_cast<int>(h.cols());
  double best = 0.0;
  for_each_subset(static_cast<int>(h.rows()), k, [&](const std::vector<int>& t) {
    Eigen::JacobiSVD<Matrix> svd(rows_of(h, t));
    const Vector sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv.size() < n ? 0.0 : sv(sv.size() - 1);
    best = std::max({best, smax * smax - 1.0, 1.0 - smin * smin});
  });
  return best;
}

// min c'x subject to a x <= b by enumerating every vertex: each choice of n
// tight rows that determines a point, kept when feasible. Requires a bounded
// feasible region (encode box bounds as rows). Returns +inf when infeasible.
inline double lp_vertex_min(const Vector& c, const Matrix& a, const Vector& b) {
  const int n = static_cast<int>(c.size());
  double best = kInf;
  for_each_subset(static_cast<int>(a.rows()), n, [&](const std::vector<int>& tight) {
    const Matrix at = rows_of(a, tight);
    Eigen::FullPivLU<Matrix> lu(at);
    if (!lu.isInvertible()) return;
    Vector bt(n);
    for (int i = 0; i < n; ++i) bt(i) = b(tight[i]);
    const Vector x = lu.solve(bt);
    if (((a * x - b).array() > 1e-9 * (1.0 + b.cwiseAbs().maxCoeff())).any()) return;
    best = std::min(best, c.dot(x));
  });
  return best;
}

}  // namespace oracle
