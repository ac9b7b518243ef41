#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ccsub/chart.hpp"
#include "ccsub/connection.hpp"
#include "ccsub/contact.hpp"
#include "ccsub/frame.hpp"
#include "ccsub/structures.hpp"

namespace ccsub {

/**
 * A Riemannian submersion between two chart patches. The vertical frame is
 * given in closed form so that the projections v and h are smooth in the
 * coordinates and can be differentiated through.
 */
struct SubmersionInstance {
  std::string name;
  ChartPatch total;
  std::optional<AlmostContactMetricStructure> contact;
  ChartPatch base;
  std::optional<AlmostHermitianStructure> hermitian;
  MapField pi;
  std::vector<VectorField> vertical_frame;

  int vertical_dim() const { return static_cast<int>(vertical_frame.size()); }
  int horizontal_dim() const { return base.dim; }
  bool contact_complex() const { return contact.has_value() && hermitian.has_value(); }
};

inline void require_contact_complex(const SubmersionInstance& sub) {
  if (!sub.contact_complex())
    throw GeometryError(ErrorKind::MissingStructure, sub.name + " lacks an almost contact or almost Hermitian structure");
}

template <class T>
struct raise;
template <>
struct raise<double> {
  using type = Jet<1>;
};
template <>
struct raise<Jet<1>> {
  using type = Jet<2>;
};
template <class T>
using raise_t = typename raise<T>::type;

/// d pi as a matrix (rows: base coordinates) one order below the map jets.
template <class T>
Mat<lower_t<T>> jacobian_of(const Vec<T>& pix, int total_dim) {
  const int m = static_cast<int>(pix.size());
  Mat<lower_t<T>> d(m, total_dim);
  for (int a = 0; a < m; ++a)
    for (int i = 0; i < total_dim; ++i) d(a, i) = partial(pix[a], i);
  return d;
}

/// Horizontal preimage of a base vector: g^-1 dpi^T (dpi g^-1 dpi^T)^-1 xb.
template <class T>
Vec<T> lift_of(const Mat<T>& g, const Mat<T>& dpi, const Vec<T>& xb) {
  const int n = g.rows(), m = dpi.rows();
  const Mat<T> ginv = spd_inverse(g);
  const Mat<T> w = matmul(ginv, transpose(dpi));  // n x m, columns horizontal
  Mat<T> gram(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      T s(0.0);
      for (int i = 0; i < n; ++i) s += dpi(a, i) * w(i, b);
      gram(a, b) = s;
    }
  Vec<T> c;
  try {
    c = spd_solve(gram, xb);
  } catch (const GeometryError&) {
    throw GeometryError(ErrorKind::RankDeficient, "d pi is not surjective");
  }
  return matvec(w, c);
}

/**
 * Submersion data at one point at derivative order T: metric, connection, a
 * g-orthonormal vertical basis and (when present) phi.
 */
template <class T>
struct SubmersionJets {
  MetricJets<T> m;
  std::vector<Vec<T>> vbasis;
  std::optional<Mat<T>> phi;

  Vec<T> v(const Vec<T>& y) const {
    Vec<T> r = zeros<T>(static_cast<int>(y.size()));
    for (const auto& e : vbasis) r = r + inner(m.g, y, e) * e;
    return r;
  }
  Vec<T> h(const Vec<T>& y) const { return y - v(y); }
  Vec<T> phi_of(const Vec<T>& y) const {
    if (!phi) throw GeometryError(ErrorKind::MissingStructure, "phi is not defined on this instance");
    return matvec(*phi, y);
  }
};

template <class T>
SubmersionJets<T> submersion_jets(const SubmersionInstance& sub, std::span<const double> p) {
  SubmersionJets<T> s;
  s.m = metric_jets<T>(sub.total, p);
  std::vector<Vec<T>> raw;
  for (const auto& V : sub.vertical_frame) raw.push_back(V(s.m.x));
  s.vbasis = gram_schmidt(s.m.g, raw, 1e-10);
  if (sub.contact) s.phi = sub.contact->phi(s.m.x);
  return s;
}

inline SubmersionJets<double> truncate(const SubmersionJets<Jet<1>>& s) {
  SubmersionJets<double> r;
  r.m.x = truncate_vec<double>(s.m.x);
  r.m.g = truncate_mat<double>(s.m.g);
  for (const auto& e : s.vbasis) r.vbasis.push_back(truncate_vec<double>(e));
  if (s.phi) r.phi = truncate_mat<double>(*s.phi);
  return r;
}

inline SubmersionJets<Jet<1>> truncate(const SubmersionJets<Jet<2>>& s) {
  SubmersionJets<Jet<1>> r;
  r.m = truncate(s.m);
  for (const auto& e : s.vbasis) r.vbasis.push_back(truncate_vec<Jet<1>>(e));
  if (s.phi) r.phi = truncate_mat<Jet<1>>(*s.phi);
  return r;
}

/// Paired order-T and order-(T-1) submersion data at one point.
template <class T>
struct SubmersionLocal {
  SubmersionJets<T> hi;
  SubmersionJets<lower_t<T>> lo;

  const Christoffel<lower_t<T>>& gamma() const { return hi.m.gamma; }
};

template <class T>
SubmersionLocal<T> submersion_local(const SubmersionInstance& sub, std::span<const double> p) {
  SubmersionLocal<T> L;
  L.hi = submersion_jets<T>(sub, p);
  L.lo = truncate(L.hi);
  return L;
}

using FirstOrderLocal = SubmersionLocal<Jet<1>>;

// Jet-level O'Neill tensors and B. Field arguments are order-T jets, results one order lower.

/// T_X Y = h nabla_{vX} vY + v nabla_{vX} hY.
template <class T>
Vec<lower_t<T>> oneill_T_jet(const SubmersionLocal<T>& L, const Vec<T>& X, const Vec<T>& Y) {
  using Lo = lower_t<T>;
  const Vec<Lo> vX = L.lo.v(truncate_vec<Lo>(X));
  return L.lo.h(covd(L.gamma(), vX, L.hi.v(Y))) + L.lo.v(covd(L.gamma(), vX, L.hi.h(Y)));
}

/// A_X Y = v nabla_{hX} hY + h nabla_{hX} vY.
template <class T>
Vec<lower_t<T>> oneill_A_jet(const SubmersionLocal<T>& L, const Vec<T>& X, const Vec<T>& Y) {
  using Lo = lower_t<T>;
  const Vec<Lo> hX = L.lo.h(truncate_vec<Lo>(X));
  return L.lo.v(covd(L.gamma(), hX, L.hi.h(Y))) + L.lo.h(covd(L.gamma(), hX, L.hi.v(Y)));
}

/// B(X,Y) = v nabla_{hX} phi hY - v nabla_{phi hX} hY + h nabla_{hX} phi vY - h nabla_{phi hX} vY.
template <class T>
Vec<lower_t<T>> tensor_B_jet(const SubmersionLocal<T>& L, const Vec<T>& X, const Vec<T>& Y) {
  using Lo = lower_t<T>;
  const Vec<Lo> hX = L.lo.h(truncate_vec<Lo>(X));
  const Vec<Lo> phX = L.lo.phi_of(hX);
  const Vec<T> hY = L.hi.h(Y), vY = L.hi.v(Y);
  const auto& G = L.gamma();
  return L.lo.v(covd(G, hX, L.hi.phi_of(hY))) - L.lo.v(covd(G, phX, hY)) + L.lo.h(covd(G, hX, L.hi.phi_of(vY))) -
         L.lo.h(covd(G, phX, vY));
}

// Point-level operations.

/// d pi at p; throws RankDeficient when the numerical rank is below dim N.
inline Mat<double> jacobian(const SubmersionInstance& sub, std::span<const double> p) {
  require_in_domain(sub.total, p);
  const Mat<double> d = jacobian_of(sub.pi(seed<Jet<1>>(p)), sub.total.dim);
  const auto svd = jacobi_svd(transpose(d));
  double smax = 0.0, smin = INFINITY;
  for (double s : svd.s) {
    smax = std::max(smax, s);
    smin = std::min(smin, s);
  }
  if (!(smin > 1e-10 * std::max(smax, 1.0))) throw GeometryError(ErrorKind::RankDeficient, "d pi rank below base dimension");
  return d;
}

inline Vec<double> project_to_base(const SubmersionInstance& sub, std::span<const double> p) {
  require_in_domain(sub.total, p);
  return sub.pi(Vec<double>(p.begin(), p.end()));
}

inline Vec<double> v_project(const SubmersionInstance& sub, std::span<const double> p, const Vec<double>& X) {
  return submersion_jets<double>(sub, p).v(X);
}

inline Vec<double> h_project(const SubmersionInstance& sub, std::span<const double> p, const Vec<double>& X) {
  return submersion_jets<double>(sub, p).h(X);
}

/// Horizontal lift of a base tangent vector at pi(p).
inline Vec<double> horizontal_lift(const SubmersionInstance& sub, std::span<const double> p, const Vec<double>& Xb) {
  const Mat<double> g = eval_metric(sub.total, p);
  return lift_of(g, jacobian(sub, p), Xb);
}

/// Jets (order T) of the basic lift of a base vector field around p.
template <class T>
Vec<T> basic_lift_jet(const SubmersionInstance& sub, std::span<const double> p, const VectorField& base_field) {
  using U = raise_t<T>;
  require_in_domain(sub.total, p);
  const Vec<U> xu = seed<U>(p);
  const Vec<U> pix = sub.pi(xu);
  const Mat<T> dpi = jacobian_of(pix, sub.total.dim);
  const Vec<T> x = truncate_vec<T>(xu);
  const Mat<T> g = sub.total.metric(x);
  const Vec<T> xb = base_field(truncate_vec<T>(pix));
  return lift_of(g, dpi, xb);
}

inline Vec<double> oneill_T(const SubmersionInstance& sub, std::span<const double> p, const VectorField& X,
                            const VectorField& Y) {
  const auto L = submersion_local<Jet<1>>(sub, p);
  return oneill_T_jet(L, X(L.hi.m.x), Y(L.hi.m.x));
}
inline Vec<double> oneill_T(const SubmersionInstance& sub, std::span<const double> p, const Vec<double>& X,
                            const Vec<double>& Y) {
  return oneill_T(sub, p, constant_field(X), constant_field(Y));
}

inline Vec<double> oneill_A(const SubmersionInstance& sub, std::span<const double> p, const VectorField& X,
                            const VectorField& Y) {
  const auto L = submersion_local<Jet<1>>(sub, p);
  return oneill_A_jet(L, X(L.hi.m.x), Y(L.hi.m.x));
}
inline Vec<double> oneill_A(const SubmersionInstance& sub, std::span<const double> p, const Vec<double>& X,
                            const Vec<double>& Y) {
  return oneill_A(sub, p, constant_field(X), constant_field(Y));
}

inline Vec<double> tensor_B(const SubmersionInstance& sub, std::span<const double> p, const VectorField& X,
                            const VectorField& Y) {
  require_contact_complex(sub);
  const auto L = submersion_local<Jet<1>>(sub, p);
  return tensor_B_jet(L, X(L.hi.m.x), Y(L.hi.m.x));
}
inline Vec<double> tensor_B(const SubmersionInstance& sub, std::span<const double> p, const Vec<double>& X,
                            const Vec<double>& Y) {
  return tensor_B(sub, p, constant_field(X), constant_field(Y));
}

/// phi-adapted frame whose horizontal pairs are lifts of base coordinate directions.
inline OrthoFrame submersion_frame(const SubmersionInstance& sub, std::span<const double> p, int start = 0) {
  require_contact_complex(sub);
  if (sub.base.dim % 2 != 0 || (sub.total.dim - sub.base.dim) % 2 != 1 ||
      sub.vertical_dim() != sub.total.dim - sub.base.dim)
    throw GeometryError(ErrorKind::DimensionMismatch, "expected dim M = 2n + 2(m - n) + 1 with dim N = 2n");
  const Vec<double> x(p.begin(), p.end());
  std::vector<Vec<double>> vb, hb;
  for (const auto& V : sub.vertical_frame) vb.push_back(V(x));
  const int m = sub.base.dim;
  for (int k = 0; k < m; ++k) hb.push_back(horizontal_lift(sub, p, unit_vector(m, (start + k) % m)));
  if (start % 2 == 1) std::reverse(vb.begin(), vb.end());
  return phi_adapted_frame(*sub.contact, p, vb, hb);
}

/// g-orthonormal vertical and horizontal bases at p (no structure needed).
struct SplitBasis {
  std::vector<Vec<double>> vertical;
  std::vector<Vec<double>> horizontal;
};

inline SplitBasis split_basis(const SubmersionInstance& sub, std::span<const double> p) {
  const auto s = submersion_jets<double>(sub, p);
  SplitBasis b;
  b.vertical = s.vbasis;
  const int m = sub.base.dim;
  std::vector<Vec<double>> lifts;
  for (int k = 0; k < m; ++k) lifts.push_back(horizontal_lift(sub, p, unit_vector(m, k)));
  b.horizontal = gram_schmidt(s.m.g, lifts);
  return b;
}

/// H = sum_a h nabla_{E_a} E_a over a vertical orthonormal frame (unnormalized trace).
inline Vec<double> mean_curvature(const SubmersionInstance& sub, std::span<const double> p) {
  const auto L = submersion_local<Jet<1>>(sub, p);
  Vec<double> H = zeros<double>(sub.total.dim);
  for (const auto& e : L.lo.vbasis) {
    const Vec<Jet<1>> E = constant_vec<Jet<1>>(e);
    H = H + oneill_T_jet(L, E, E);
  }
  return H;
}

/// sum over a horizontal orthonormal frame {X_i, phi X_i} of B(E, E).
inline Vec<double> trace_B_h(const SubmersionInstance& sub, std::span<const double> p) {
  require_contact_complex(sub);
  const OrthoFrame f = submersion_frame(sub, p);
  const auto L = submersion_local<Jet<1>>(sub, p);
  Vec<double> t = zeros<double>(sub.total.dim);
  for (const auto& e : f.horizontal()) {
    const Vec<Jet<1>> E = constant_vec<Jet<1>>(e);
    t = t + tensor_B_jet(L, E, E);
  }
  return t;
}

/**
 * Fibre codifferential of the induced fundamental form, evaluated with
 * ambient objects through the Gauss formula nabla^_U W = v nabla_U W:
 * sum over the vertical frame {V_j, phi V_j, xi} of g(nabla^_E(phi E) - phi nabla^_E E, V).
 */
inline double fibre_codiff(const SubmersionInstance& sub, std::span<const double> p, const Vec<double>& V) {
  require_contact_complex(sub);
  const auto L = submersion_local<Jet<1>>(sub, p);
  if (detail::gnorm_or_zero(L.lo.m.g, L.lo.h(V)) > 1e-9)
    throw GeometryError(ErrorKind::NotVertical, "argument of the fibre codifferential is not vertical");
  const OrthoFrame f = submersion_frame(sub, p);
  double s = 0.0;
  for (const auto& e : f.vertical()) {
    const Vec<Jet<1>> E = L.hi.v(constant_vec<Jet<1>>(e));
    const Vec<double> a = L.lo.v(covd(L.gamma(), e, L.hi.phi_of(E)));
    const Vec<double> b = L.lo.phi_of(L.lo.v(covd(L.gamma(), e, E)));
    s += inner(L.lo.m.g, a - b, V);
  }
  return s;
}

/// delta' Omega(X) = sum_a g'((nabla'_{E_a} J) E_a, X) on an almost Hermitian chart.
inline double codiff_hermitian(const AlmostHermitianStructure& s, std::span<const double> p, const OrthoFrame& frame,
                               const Vec<double>& X) {
  const auto m = metric_jets<Jet<1>>(s.patch, p);
  const Mat<Jet<1>> J = s.J(m.x);
  const Mat<double> g = truncate_mat<double>(m.g);
  double sum = 0.0;
  for (const auto& e : frame.vectors) sum += inner(g, matvec(covd_endo(m.gamma, e, J), e), X);
  return sum;
}

/// Base codifferential at a base point with a J-adapted frame.
inline double base_codiff(const SubmersionInstance& sub, std::span<const double> pb, const Vec<double>& Xb) {
  if (!sub.hermitian) throw GeometryError(ErrorKind::MissingStructure, sub.name + " has no base structure");
  return codiff_hermitian(*sub.hermitian, pb, j_adapted_frame(*sub.hermitian, pb), Xb);
}

/// Residuals of the submersion invariants at one point.
struct SubmersionAxiomResiduals {
  double vertical_kernel = 0;  // |d pi V| for the closed-form vertical frame
  double isometry = 0;         // g'(d pi E_a, d pi E_b) - delta_ab on a horizontal orthonormal basis
  double holomorphy = 0;       // J d pi - d pi phi
};

inline SubmersionAxiomResiduals submersion_axioms(const SubmersionInstance& sub, std::span<const double> p) {
  SubmersionAxiomResiduals r;
  const Vec<double> x(p.begin(), p.end());
  const Mat<double> dpi = jacobian(sub, p);
  for (const auto& V : sub.vertical_frame) r.vertical_kernel = std::max(r.vertical_kernel, max_abs(matvec(dpi, V(x))));
  const Vec<double> pb = project_to_base(sub, p);
  const Mat<double> gb = eval_metric(sub.base, pb);
  const SplitBasis sb = split_basis(sub, p);
  for (size_t a = 0; a < sb.horizontal.size(); ++a)
    for (size_t b = 0; b < sb.horizontal.size(); ++b) {
      const double gab = inner(gb, matvec(dpi, sb.horizontal[a]), matvec(dpi, sb.horizontal[b]));
      r.isometry = std::max(r.isometry, std::abs(gab - (a == b ? 1.0 : 0.0)));
    }
  if (sub.contact_complex()) {
    const Mat<double> J = sub.hermitian->J(pb);
    const Mat<double> phi = sub.contact->phi(x);
    const Mat<double> lhs = matmul(J, dpi), rhs = matmul(dpi, phi);
    for (int i = 0; i < lhs.rows(); ++i)
      for (int j = 0; j < lhs.cols(); ++j) r.holomorphy = std::max(r.holomorphy, std::abs(lhs(i, j) - rhs(i, j)));
  }
  return r;
}

}  // namespace ccsub
