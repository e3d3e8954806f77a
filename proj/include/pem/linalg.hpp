#pragma once

#include <cmath>
#include <vector>

#include "pem/errors.hpp"
#include "pem/jet.hpp"

namespace pem {

inline double scalar_value(double x) { return x; }
inline double scalar_value(const Jet& x) { return x.value(); }

// Small dense square matrix over double or Jet.
template <typename T>
class Mat {
public:
  Mat() : n_(0) {}
  Mat(int n, const T& zero) : n_(n), a_(static_cast<std::size_t>(n) * n, zero) {}

  int n() const { return n_; }
  T& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  const T& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

private:
  int n_;
  std::vector<T> a_;
};

template <typename T>
class Tensor3 {
public:
  Tensor3() : n_(0) {}
  Tensor3(int n, const T& zero) : n_(n), a_(static_cast<std::size_t>(n) * n * n, zero) {}
  int n() const { return n_; }
  T& operator()(int i, int j, int k) {
    return a_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k];
  }
  const T& operator()(int i, int j, int k) const {
    return a_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k];
  }

private:
  int n_;
  std::vector<T> a_;
};

template <typename T>
class Tensor4 {
public:
  Tensor4() : n_(0) {}
  Tensor4(int n, const T& zero)
      : n_(n), a_(static_cast<std::size_t>(n) * n * n * n, zero) {}
  int n() const { return n_; }
  T& operator()(int i, int j, int k, int l) {
    return a_[((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l];
  }
  const T& operator()(int i, int j, int k, int l) const {
    return a_[((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l];
  }

private:
  int n_;
  std::vector<T> a_;
};

inline double recip_entry(double x) { return 1.0 / x; }
inline Jet recip_entry(const Jet& x) { return recip(x); }

// Gauss-Jordan inverse with partial pivoting on the scalar part.
// Works for double and Jet entries alike; throws SingularMetric when the
// pivot magnitude falls below `min_pivot`.
template <typename T>
Mat<T> matrix_inverse(const Mat<T>& m, const T& zero, const T& one,
                      double min_pivot = 1e-300) {
  const int n = m.n();
  Mat<T> a = m;
  Mat<T> inv(n, zero);
  for (int i = 0; i < n; ++i) inv(i, i) = one;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(scalar_value(a(col, col)));
    for (int r = col + 1; r < n; ++r) {
      const double v = std::abs(scalar_value(a(r, col)));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best < min_pivot) throw SingularMetric("matrix inverse: pivot too small");
    if (piv != col) {
      for (int c = 0; c < n; ++c) {
        std::swap(a(piv, c), a(col, c));
        std::swap(inv(piv, c), inv(col, c));
      }
    }
    const T d = recip_entry(a(col, col));
    for (int c = 0; c < n; ++c) {
      a(col, c) = a(col, c) * d;
      inv(col, c) = inv(col, c) * d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const T f = a(r, col);
      if (scalar_value(f) == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        a(r, c) = a(r, c) - f * a(col, c);
        inv(r, c) = inv(r, c) - f * inv(col, c);
      }
    }
  }
  return inv;
}

// Determinant by LU elimination with partial pivoting on the scalar part.
template <typename T>
T matrix_determinant(const Mat<T>& m, const T& one) {
  const int n = m.n();
  Mat<T> a = m;
  T det = one;
  int sign = 1;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(scalar_value(a(col, col)));
    for (int r = col + 1; r < n; ++r) {
      const double v = std::abs(scalar_value(a(r, col)));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(a(piv, c), a(col, c));
      sign = -sign;
    }
    if (scalar_value(a(col, col)) == 0.0) return det * 0.0;
    det = det * a(col, col);
    const T d = recip_entry(a(col, col));
    for (int r = col + 1; r < n; ++r) {
      const T f = a(r, col) * d;
      for (int c = col; c < n; ++c) a(r, c) = a(r, c) - f * a(col, c);
    }
  }
  if (sign < 0) det = det * (-1.0);
  return det;
}

// Eigenvalues of a symmetric double matrix by cyclic Jacobi rotations.
std::vector<double> symmetric_eigenvalues(Mat<double> a);

// Counts of (positive, negative) eigenvalues with |lambda| > tol.
std::pair<int, int> inertia(const Mat<double>& a, double tol = 1e-10);

// Rank of a set of row vectors via Gram-matrix eigenvalues.
int numeric_rank(const std::vector<std::vector<double>>& rows, double rel_tol = 1e-7);

}  // namespace pem
