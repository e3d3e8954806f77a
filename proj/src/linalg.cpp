#include "pem/linalg.hpp"

#include <algorithm>

namespace pem {

std::vector<double> symmetric_eigenvalues(Mat<double> a) {
  const int n = a.n();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-26) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::pair<int, int> inertia(const Mat<double>& a, double tol) {
  auto ev = symmetric_eigenvalues(a);
  int pos = 0, neg = 0;
  for (double v : ev) {
    if (v > tol) pos++;
    else if (v < -tol) neg++;
  }
  return {pos, neg};
}

int numeric_rank(const std::vector<std::vector<double>>& rows, double rel_tol) {
  if (rows.empty()) return 0;
  const int m = static_cast<int>(rows.size());
  Mat<double> gram(m, 0.0);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < rows[i].size(); ++k) s += rows[i][k] * rows[j][k];
      gram(i, j) = gram(j, i) = s;
    }
  }
  auto ev = symmetric_eigenvalues(gram);
  const double top = std::max(std::abs(ev.front()), std::abs(ev.back()));
  if (top <= 0.0) return 0;
  int rank = 0;
  for (double v : ev) {
    if (v > rel_tol * rel_tol * top) rank++;
  }
  return rank;
}

}  // namespace pem
