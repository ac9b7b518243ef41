#pragma once

#include <span>
#include <vector>

#include "ccsub/chart.hpp"
#include "ccsub/error.hpp"
#include "ccsub/field.hpp"
#include "ccsub/frame.hpp"
#include "ccsub/linalg.hpp"
#include "ccsub/structures.hpp"

namespace ccsub {

/// Christoffel symbols Gamma^k_ij at one point, at scalar type T.
template <class T>
struct Christoffel {
  int n = 0;
  std::vector<T> c;  // index (k * n + i) * n + j

  const T& operator()(int k, int i, int j) const { return c[static_cast<size_t>((k * n + i) * n + j)]; }
  T& operator()(int k, int i, int j) { return c[static_cast<size_t>((k * n + i) * n + j)]; }
};

/**
 * Levi-Civita symbols one derivative order below the metric jet:
 * Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij). Only i <= j is
 * computed; the other half is copied, so the symmetry is exact.
 */
template <class T>
Christoffel<lower_t<T>> christoffel_of(const Mat<T>& g) {
  using L = lower_t<T>;
  const int n = g.rows();
  const Mat<L> ginv = spd_inverse(truncate_mat<L>(g));
  std::vector<Mat<L>> dg;
  dg.reserve(static_cast<size_t>(n));
  for (int l = 0; l < n; ++l) {
    Mat<L> d(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d(i, j) = partial(g(i, j), l);
    dg.push_back(std::move(d));
  }
  Christoffel<L> G{n, std::vector<L>(static_cast<size_t>(n * n * n), L(0.0))};
  std::vector<L> first(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      for (int l = 0; l < n; ++l) first[l] = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
      for (int k = 0; k < n; ++k) {
        L s(0.0);
        for (int l = 0; l < n; ++l) s += ginv(k, l) * first[l];
        G(k, i, j) = s;
        G(k, j, i) = s;
      }
    }
  }
  return G;
}

/// Coordinates, metric and connection at a point, at derivative order T.
template <class T>
struct MetricJets {
  Vec<T> x;
  Mat<T> g;
  Christoffel<lower_t<T>> gamma;
};

template <class T>
MetricJets<T> metric_jets(const ChartPatch& patch, std::span<const double> p) {
  require_in_domain(patch, p);
  MetricJets<T> m;
  m.x = seed<T>(p);
  m.g = patch.metric(m.x);
  if constexpr (!std::is_same_v<T, double>) m.gamma = christoffel_of(m.g);
  return m;
}

/// Drop one derivative order from every jet.
inline MetricJets<Jet<1>> truncate(const MetricJets<Jet<2>>& m) {
  MetricJets<Jet<1>> r;
  r.x = truncate_vec<Jet<1>>(m.x);
  r.g = truncate_mat<Jet<1>>(m.g);
  r.gamma.n = m.gamma.n;
  for (const auto& c : m.gamma.c) r.gamma.c.push_back(truncate(c));
  return r;
}

/// nabla_X Y where Y is a jet of one order higher than X and the result.
template <class T>
Vec<lower_t<T>> covd(const Christoffel<lower_t<T>>& G, const Vec<lower_t<T>>& X, const Vec<T>& Y) {
  using L = lower_t<T>;
  const int n = G.n;
  Vec<L> out = zeros<L>(n);
  Vec<L> y = truncate_vec<L>(Y);
  for (int k = 0; k < n; ++k) {
    L s(0.0);
    for (int i = 0; i < n; ++i) {
      L t = partial(Y[k], i);
      for (int j = 0; j < n; ++j) t += G(k, i, j) * y[j];
      s += X[i] * t;
    }
    out[k] = s;
  }
  return out;
}

/// X(f): directional derivative of a scalar jet.
template <class T>
lower_t<T> directional(const Vec<lower_t<T>>& X, const T& f) {
  lower_t<T> s(0.0);
  for (size_t i = 0; i < X.size(); ++i) s += X[i] * partial(f, static_cast<int>(i));
  return s;
}

/// [X, Y]^k = X^i d_i Y^k - Y^i d_i X^k.
template <class T>
Vec<lower_t<T>> bracket(const Vec<T>& X, const Vec<T>& Y) {
  using L = lower_t<T>;
  const int n = static_cast<int>(X.size());
  const Vec<L> x = truncate_vec<L>(X), y = truncate_vec<L>(Y);
  Vec<L> out = zeros<L>(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) out[k] += x[i] * partial(Y[k], i) - y[i] * partial(X[k], i);
  return out;
}

/// (nabla_X E) for an endomorphism jet E one order above X.
template <class T>
Mat<lower_t<T>> covd_endo(const Christoffel<lower_t<T>>& G, const Vec<lower_t<T>>& X, const Mat<T>& E) {
  using L = lower_t<T>;
  const int n = G.n;
  const Mat<L> e = truncate_mat<L>(E);
  Mat<L> out(n, n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      L s(0.0);
      for (int i = 0; i < n; ++i) {
        L t = partial(E(k, j), i);
        for (int l = 0; l < n; ++l) t += G(k, i, l) * e(l, j) - G(l, i, j) * e(k, l);
        s += X[i] * t;
      }
      out(k, j) = s;
    }
  }
  return out;
}

inline Christoffel<double> christoffel(const ChartPatch& patch, std::span<const double> p) {
  (void)eval_metric(patch, p);
  return metric_jets<Jet<1>>(patch, p).gamma;
}

/// nabla_X Y at p for a pointwise X and a vector field Y.
inline Vec<double> cov_deriv_vec(const ChartPatch& patch, std::span<const double> p, const Vec<double>& X,
                                 const VectorField& Y) {
  const auto m = metric_jets<Jet<1>>(patch, p);
  return covd(m.gamma, X, Y(m.x));
}

inline Vec<double> lie_bracket(const VectorField& X, const VectorField& Y, std::span<const double> p) {
  const auto x = seed<Jet<1>>(p);
  return bracket(X(x), Y(x));
}

inline Vec<double> lie_bracket(const ChartPatch& patch, const VectorField& X, const VectorField& Y,
                               std::span<const double> p) {
  require_in_domain(patch, p);
  return lie_bracket(X, Y, p);
}

/**
 * Riemann 4-tensor at a point with R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z
 * - nabla_[X,Y] Z and R(X,Y,Z,W) = g(R(X,Y)Z, W). The round unit sphere gives
 * R(X,Y,Y,X) = +1 for orthonormal X, Y.
 */
class RiemannAt {
 public:
  RiemannAt() = default;
  RiemannAt(int n, std::vector<double> r, Mat<double> g) : n_(n), r_(std::move(r)), g_(std::move(g)) {}

  int dim() const { return n_; }
  const Mat<double>& metric() const { return g_; }

  double component(int a, int b, int c, int d) const { return r_[static_cast<size_t>(((a * n_ + b) * n_ + c) * n_ + d)]; }

  double operator()(const Vec<double>& X, const Vec<double>& Y, const Vec<double>& Z, const Vec<double>& W) const {
    double s = 0.0;
    for (int a = 0; a < n_; ++a) {
      if (X[a] == 0.0) continue;
      for (int b = 0; b < n_; ++b) {
        if (Y[b] == 0.0) continue;
        for (int c = 0; c < n_; ++c) {
          if (Z[c] == 0.0) continue;
          double t = 0.0;
          for (int d = 0; d < n_; ++d) t += component(a, b, c, d) * W[d];
          s += X[a] * Y[b] * Z[c] * t;
        }
      }
    }
    return s;
  }

  /// The ordering R(X,Y,Z,W) = g(R(Z,W)Y, X), equal to -operator()(X,Y,Z,W).
  double kn(const Vec<double>& X, const Vec<double>& Y, const Vec<double>& Z, const Vec<double>& W) const {
    return -(*this)(X, Y, Z, W);
  }

 private:
  int n_ = 0;
  std::vector<double> r_;
  Mat<double> g_;
};

inline RiemannAt riemann_at(const ChartPatch& patch, std::span<const double> p) {
  const auto m = metric_jets<Jet<2>>(patch, p);
  const int n = patch.dim;
  const Mat<double> g = truncate_mat<double>(m.g);
  auto G = [&](int k, int i, int j) { return m.gamma(k, i, j).value(); };
  auto dG = [&](int l, int k, int i, int j) { return m.gamma(k, i, j).grad(l); };
  // R^l_{k i j}: R(d_i, d_j) d_k = R^l_{kij} d_l
  std::vector<double> up(static_cast<size_t>(n * n * n * n), 0.0);
  auto U = [&](int l, int k, int i, int j) -> double& { return up[static_cast<size_t>(((l * n + k) * n + i) * n + j)]; };
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = dG(i, l, j, k) - dG(j, l, i, k);
          for (int q = 0; q < n; ++q) s += G(l, i, q) * G(q, j, k) - G(l, j, q) * G(q, i, k);
          U(l, k, i, j) = s;
        }
  std::vector<double> low(static_cast<size_t>(n * n * n * n), 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) s += U(l, c, a, b) * g(l, d);
          low[static_cast<size_t>(((a * n + b) * n + c) * n + d)] = s;
        }
  return RiemannAt(n, std::move(low), g);
}

inline double riemann4(const ChartPatch& patch, std::span<const double> p, const Vec<double>& X, const Vec<double>& Y,
                       const Vec<double>& Z, const Vec<double>& W) {
  return riemann_at(patch, p)(X, Y, Z, W);
}

/// d eta(X, Y) = X eta(Y) - Y eta(X) - eta([X, Y]) in components: X^i Y^j (d_i eta_j - d_j eta_i).
inline double ext_deriv_1form(const CovectorField& eta, std::span<const double> p, const Vec<double>& X,
                              const Vec<double>& Y) {
  const Vec<Jet<1>> e = eta(seed<Jet<1>>(p));
  const int n = static_cast<int>(e.size());
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += X[i] * Y[j] * (partial(e[j], i) - partial(e[i], j));
  return s;
}

/// d Phi(X, Y, Z) = X^i Y^j Z^k (d_i Phi_jk + d_j Phi_ki + d_k Phi_ij).
inline double ext_deriv_2form(const TwoFormField& Phi, std::span<const double> p, const Vec<double>& X,
                              const Vec<double>& Y, const Vec<double>& Z) {
  const Mat<Jet<1>> f = Phi(seed<Jet<1>>(p));
  const int n = f.rows();
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double w = X[i] * Y[j] * Z[k];
        if (w == 0.0) continue;
        s += w * (partial(f(j, k), i) + partial(f(k, i), j) + partial(f(i, j), k));
      }
  return s;
}

/// Structure tensors plus metric jets at one point.
template <class T>
struct ContactJets {
  MetricJets<T> m;
  Mat<T> phi;
  Vec<T> xi;
  Vec<T> eta;
};

template <class T>
ContactJets<T> contact_jets(const AlmostContactMetricStructure& s, std::span<const double> p) {
  ContactJets<T> c;
  c.m = metric_jets<T>(s.patch, p);
  c.phi = s.phi(c.m.x);
  c.xi = s.xi(c.m.x);
  c.eta = s.eta(c.m.x);
  return c;
}

/// (nabla_X phi) as a matrix at p.
inline Mat<double> nabla_phi(const ContactJets<Jet<1>>& c, const Vec<double>& X) {
  return covd_endo(c.m.gamma, X, c.phi);
}

/**
 * (nabla_X phi) Y = nabla_X(phi Y) - phi(nabla_X Y) with Y extended by
 * constant components around p.
 */
inline Vec<double> cov_deriv_phi(const AlmostContactMetricStructure& s, std::span<const double> p,
                                 const Vec<double>& X, const Vec<double>& Y) {
  const auto c = contact_jets<Jet<1>>(s, p);
  const Vec<Jet<1>> y = constant_vec<Jet<1>>(Y);
  const Vec<double> a = covd(c.m.gamma, X, matvec(c.phi, y));
  const Vec<double> b = matvec(truncate_mat<double>(c.phi), covd(c.m.gamma, X, y));
  return a - b;
}

/**
 * delta Phi(X) = -sum_a (nabla_{e_a} Phi)(e_a, X) over an orthonormal frame,
 * with (nabla_E Phi)(Y, Z) = -g((nabla_E phi) Y, Z). Throws FrameMismatch when
 * the frame lives at another point.
 */
inline double codiff_2form(const AlmostContactMetricStructure& s, std::span<const double> p, const OrthoFrame& frame,
                           const Vec<double>& X) {
  for (size_t i = 0; i < p.size(); ++i)
    if (frame.base_point.size() != p.size() || std::abs(frame.base_point[i] - p[i]) > 1e-12)
      throw GeometryError(ErrorKind::FrameMismatch, "frame base point differs from evaluation point");
  const auto c = contact_jets<Jet<1>>(s, p);
  const Mat<double> g = truncate_mat<double>(c.m.g);
  double sum = 0.0;
  for (const auto& e : frame.vectors) sum += inner(g, matvec(nabla_phi(c, e), e), X);
  return sum;
}

}  // namespace ccsub
