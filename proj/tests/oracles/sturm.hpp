#pragma once

// Eigenvalues by inertia counting: Householder reduction to tridiagonal
// form in long double, then Sturm-sequence bisection.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

struct Tridiagonal {
  std::vector<long double> diag;
  std::vector<long double> off;  // off[i] couples i and i+1
};

inline Tridiagonal householder_tridiagonal(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<std::vector<long double>> a(n, std::vector<long double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = m(i, j);
  for (int k = 0; k + 2 < n; ++k) {
    long double alpha = 0.0L;
    for (int i = k + 1; i < n; ++i) alpha += a[i][k] * a[i][k];
    alpha = std::sqrt(alpha);
    if (alpha == 0.0L) continue;
    if (a[k + 1][k] > 0) alpha = -alpha;
    std::vector<long double> v(n, 0.0L);
    v[k + 1] = a[k + 1][k] - alpha;
    for (int i = k + 2; i < n; ++i) v[i] = a[i][k];
    long double vv = 0.0L;
    for (int i = k + 1; i < n; ++i) vv += v[i] * v[i];
    if (vv == 0.0L) continue;
    // A <- P A P with P = I - 2 v v^T / v^T v
    std::vector<long double> p(n, 0.0L);
    for (int i = 0; i < n; ++i)
      for (int j = k + 1; j < n; ++j) p[i] += a[i][j] * v[j];
    for (auto& x : p) x *= 2.0L / vv;
    long double kk = 0.0L;
    for (int i = k + 1; i < n; ++i) kk += v[i] * p[i];
    kk /= vv;
    for (int i = 0; i < n; ++i) p[i] -= kk * v[i];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a[i][j] -= v[i] * p[j] + p[i] * v[j];
  }
  Tridiagonal t;
  for (int i = 0; i < n; ++i) t.diag.push_back(a[i][i]);
  for (int i = 0; i + 1 < n; ++i) t.off.push_back(a[i + 1][i]);
  return t;
}

/// Number of eigenvalues strictly below x.
inline int count_below(const Tridiagonal& t, long double x) {
  int count = 0;
  long double q = 1.0L;
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    const long double b2 = i ? t.off[i - 1] * t.off[i - 1] : 0.0L;
    q = t.diag[i] - x - (i ? b2 / q : 0.0L);
    if (q == 0.0L) q = -1e-300L;
    if (q < 0) ++count;
  }
  return count;
}

/// k-th smallest eigenvalue (0-based).
inline double kth_eigenvalue(const Tridiagonal& t, int k) {
  long double lo = 0, hi = 0;
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    long double r = (i ? std::abs(t.off[i - 1]) : 0.0L) + (i < t.off.size() ? std::abs(t.off[i]) : 0.0L);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  for (int it = 0; it < 200; ++it) {
    const long double mid = 0.5L * (lo + hi);
    if (count_below(t, mid) > k) hi = mid;
    else lo = mid;
  }
  return static_cast<double>(0.5L * (lo + hi));
}

inline std::vector<double> sturm_eigenvalues(const Eigen::MatrixXd& m, int count) {
  const auto t = householder_tridiagonal(m);
  std::vector<double> out;
  for (int k = 0; k < count && k < static_cast<int>(m.rows()); ++k) out.push_back(kth_eigenvalue(t, k));
  return out;
}

}  // namespace oracle
