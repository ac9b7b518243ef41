#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "ccsub/error.hpp"
#include "ccsub/jet.hpp"

// Small dense linear algebra (dimension <= kMaxVars), generic over the scalar
// type so jets flow through solves and orthonormalizations.

namespace ccsub {

template <class T>
using Vec = std::vector<T>;

template <class T>
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows * cols), T(0.0)) {}

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1.0);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  T& operator()(int i, int j) { return a_[static_cast<size_t>(i * cols_ + j)]; }
  const T& operator()(int i, int j) const { return a_[static_cast<size_t>(i * cols_ + j)]; }

  Vec<T> col(int j) const {
    Vec<T> c(static_cast<size_t>(rows_));
    for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> a_;
};

template <class T>
Vec<T> zeros(int n) {
  return Vec<T>(static_cast<size_t>(n), T(0.0));
}

inline Vec<double> unit_vector(int n, int i) {
  Vec<double> e(static_cast<size_t>(n), 0.0);
  e[i] = 1.0;
  return e;
}

template <class T>
Vec<T> operator+(Vec<T> a, const Vec<T>& b) {
  for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}
template <class T>
Vec<T> operator-(Vec<T> a, const Vec<T>& b) {
  for (size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}
template <class T>
Vec<T> operator-(Vec<T> a) {
  for (auto& x : a) x = -x;
  return a;
}
template <class T, class S>
Vec<T> operator*(const S& s, Vec<T> a) {
  for (auto& x : a) x = x * s;
  return a;
}

template <class T>
T dot(const Vec<T>& a, const Vec<T>& b) {
  T s(0.0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec<double>& a) { return std::sqrt(dot(a, a)); }
inline double max_abs(const Vec<double>& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

template <class T>
Vec<T> matvec(const Mat<T>& m, const Vec<T>& x) {
  Vec<T> y = zeros<T>(m.rows());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) y[i] += m(i, j) * x[j];
  return y;
}

template <class T>
Mat<T> matmul(const Mat<T>& a, const Mat<T>& b) {
  Mat<T> c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k)
      for (int j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
  return c;
}

template <class T>
Mat<T> transpose(const Mat<T>& a) {
  Mat<T> t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

/// Bilinear pairing X^T G Y.
template <class T>
T inner(const Mat<T>& G, const Vec<T>& x, const Vec<T>& y) {
  T s(0.0);
  for (int i = 0; i < G.rows(); ++i) {
    T row(0.0);
    for (int j = 0; j < G.cols(); ++j) row += G(i, j) * y[j];
    s += x[i] * row;
  }
  return s;
}

template <class To, class From>
Vec<To> truncate_vec(const Vec<From>& v) {
  Vec<To> r;
  r.reserve(v.size());
  for (const auto& x : v) r.push_back(truncate_to<To>(x));
  return r;
}

template <class To, class From>
Mat<To> truncate_mat(const Mat<From>& m) {
  Mat<To> r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = truncate_to<To>(m(i, j));
  return r;
}

inline Vec<double> values(const Vec<double>& v) { return v; }
template <int K>
Vec<double> values(const Vec<Jet<K>>& v) {
  return truncate_vec<double>(v);
}

/// Lower Cholesky factor of a symmetric positive definite matrix; throws NotSPD.
template <class T>
Mat<T> cholesky(const Mat<T>& a) {
  const int n = a.rows();
  Mat<T> l(n, n);
  for (int j = 0; j < n; ++j) {
    T d = a(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(value_of(d) > 0.0) || !std::isfinite(value_of(d)))
      throw GeometryError(ErrorKind::NotSPD, "cholesky pivot is not positive");
    l(j, j) = sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      T s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

template <class T>
Vec<T> cholesky_solve(const Mat<T>& l, Vec<T> b) {
  const int n = l.rows();
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < i; ++k) b[i] -= l(i, k) * b[k];
    b[i] = b[i] / l(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int k = i + 1; k < n; ++k) b[i] -= l(k, i) * b[k];
    b[i] = b[i] / l(i, i);
  }
  return b;
}

template <class T>
Vec<T> spd_solve(const Mat<T>& a, const Vec<T>& b) {
  return cholesky_solve(cholesky(a), b);
}

template <class T>
Mat<T> spd_inverse(const Mat<T>& a) {
  const int n = a.rows();
  const Mat<T> l = cholesky(a);
  Mat<T> inv(n, n);
  for (int j = 0; j < n; ++j) {
    Vec<T> e = zeros<T>(n);
    e[j] = T(1.0);
    Vec<T> c = cholesky_solve(l, e);
    for (int i = 0; i < n; ++i) inv(i, j) = c[i];
  }
  // Exact symmetry of the inverse.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      T s = (inv(i, j) + inv(j, i)) * 0.5;
      inv(i, j) = s;
      inv(j, i) = s;
    }
  return inv;
}

/**
 * Orthonormalize `vectors` with respect to the bilinear form G, two passes
 * of classical Gram-Schmidt per vector. Throws DegenerateInput when a pivot
 * norm falls below `pivot_tol` times the input norm.
 */
template <class T>
std::vector<Vec<T>> gram_schmidt(const Mat<T>& G, const std::vector<Vec<T>>& vectors, double pivot_tol = 1e-12) {
  std::vector<Vec<T>> out;
  for (const auto& v0 : vectors) {
    const double n0 = std::sqrt(std::abs(value_of(inner(G, v0, v0))));
    Vec<T> v = v0;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& e : out) v = v - inner(G, v, e) * e;
    T nrm2 = inner(G, v, v);
    if (!(value_of(nrm2) > 0.0) || std::sqrt(value_of(nrm2)) <= pivot_tol * std::max(n0, 1e-300))
      throw GeometryError(ErrorKind::DegenerateInput, "Gram-Schmidt pivot below tolerance");
    const T inv = 1.0 / sqrt(nrm2);
    out.push_back(inv * v);
  }
  return out;
}

struct SvdResult {
  Mat<double> u;            // m x n, columns are left singular vectors
  std::vector<double> s;    // n singular values (unsorted)
  Mat<double> v;            // n x n, columns are right singular vectors
};

/// One-sided Jacobi SVD of an m x n real matrix (m may be smaller than n).
inline SvdResult jacobi_svd(const Mat<double>& a) {
  const int m = a.rows(), n = a.cols();
  Mat<double> u = a;
  Mat<double> v = Mat<double>::identity(n);
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (int i = 0; i < m; ++i) {
          alpha += u(i, p) * u(i, p);
          beta += u(i, q) * u(i, q);
          gamma += u(i, p) * u(i, q);
        }
        if (gamma == 0.0) continue;
        const double denom = std::sqrt(alpha * beta);
        if (denom > 0.0) off = std::max(off, std::abs(gamma) / denom);
        if (std::abs(gamma) <= 1e-15 * denom) continue;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t), s = c * t;
        for (int i = 0; i < m; ++i) {
          const double up = u(i, p), uq = u(i, q);
          u(i, p) = c * up - s * uq;
          u(i, q) = s * up + c * uq;
        }
        for (int i = 0; i < n; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (off <= 1e-15) break;
  }
  SvdResult r{Mat<double>(m, n), std::vector<double>(static_cast<size_t>(n)), v};
  for (int j = 0; j < n; ++j) {
    double nrm = 0.0;
    for (int i = 0; i < m; ++i) nrm += u(i, j) * u(i, j);
    nrm = std::sqrt(nrm);
    r.s[j] = nrm;
    for (int i = 0; i < m; ++i) r.u(i, j) = nrm > 0.0 ? u(i, j) / nrm : 0.0;
  }
  return r;
}

inline double spectral_norm(const Mat<double>& a) {
  const auto svd = jacobi_svd(a);
  double s = 0.0;
  for (double x : svd.s) s = std::max(s, x);
  return s;
}

/**
 * Euclidean-orthonormal basis of the kernel of `a`. Singular values at or
 * below tol (relative to the largest, or absolute when `a` is zero) define
 * the kernel.
 */
inline std::vector<Vec<double>> nullspace(const Mat<double>& a, double tol) {
  const auto svd = jacobi_svd(a);
  double smax = 0.0;
  for (double x : svd.s) smax = std::max(smax, x);
  const double cut = smax > 0.0 ? tol * smax : tol;
  std::vector<Vec<double>> basis;
  for (int j = 0; j < a.cols(); ++j)
    if (svd.s[j] <= cut) basis.push_back(svd.v.col(j));
  return basis;
}

}  // namespace ccsub
