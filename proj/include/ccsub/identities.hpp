#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ccsub/connection.hpp"
#include "ccsub/contact.hpp"
#include "ccsub/error.hpp"
#include "ccsub/frame.hpp"
#include "ccsub/submersion.hpp"

namespace ccsub {

/// Residual summary of one identity over a set of sample points.
struct IdentityCheck {
  std::string name;
  double residual_max = 0;
  double residual_mean = 0;
  int points_used = 0;
  double tolerance = 0;
  bool passed = true;
};

/// Folds per-point residuals into an IdentityCheck. A NaN residual poisons the maximum.
class CheckAccumulator {
 public:
  CheckAccumulator(std::string name, double tol) : name_(std::move(name)), tol_(tol) {}

  void add(double r) {
    if (std::isnan(r)) nan_ = true;
    else if (r > max_) max_ = r;
    sum_ += r;
    ++n_;
  }

  IdentityCheck result() const {
    IdentityCheck c;
    c.name = name_;
    c.residual_max = nan_ ? std::numeric_limits<double>::quiet_NaN() : max_;
    c.residual_mean = n_ > 0 ? sum_ / n_ : 0.0;
    c.points_used = n_;
    c.tolerance = tol_;
    c.passed = c.residual_max <= tol_;
    return c;
  }

 private:
  std::string name_;
  double tol_;
  double max_ = 0, sum_ = 0;
  int n_ = 0;
  bool nan_ = false;
};

template <class F>
IdentityCheck check_over_points(const std::string& name, const std::vector<std::vector<double>>& points, double tol,
                                F per_point) {
  CheckAccumulator acc(name, tol);
  for (const auto& p : points) acc.add(per_point(std::span<const double>(p)));
  return acc.result();
}

/**
 * Residual of "a vanishes iff b vanishes": 0 when both sides are clearly
 * nonzero (above `gap`), otherwise the larger side. Passing at tolerance tol
 * therefore means either both vanish or both are bounded away from zero.
 */
inline double equivalence_residual(double a, double b, double gap = 1e-4) {
  if (a > gap && b > gap) return 0.0;
  return std::max(a, b);
}

namespace detail {

inline double gn(const Mat<double>& g, const Vec<double>& v) { return gnorm_or_zero(g, v); }

/// Base vector fields used as basic-field seeds: coordinate fields plus one non-constant field.
inline std::vector<VectorField> base_test_fields(int m) {
  std::vector<VectorField> fs;
  for (int a = 0; a < m; ++a) fs.push_back(coordinate_field(m, a));
  fs.push_back(VectorField([m](const auto& x) {
    using T = scalar_of<decltype(x)>;
    Vec<T> v(static_cast<size_t>(m));
    for (int a = 0; a < m; ++a) v[a] = 1.0 + 0.5 * sin(x[(a + 1) % m]) + 0.25 * x[a] * x[a];
    return v;
  }));
  return fs;
}

/// Total-space vector fields for torsion and compatibility tests.
inline std::vector<VectorField> total_test_fields(int n) {
  std::vector<VectorField> fs;
  for (int a = 0; a < n; ++a) fs.push_back(coordinate_field(n, a));
  fs.push_back(VectorField([n](const auto& x) {
    using T = scalar_of<decltype(x)>;
    Vec<T> v(static_cast<size_t>(n));
    for (int a = 0; a < n; ++a) v[a] = sin(x[(a + 1) % n]) + 0.5 * x[a] * x[(a + 2) % n];
    return v;
  }));
  fs.push_back(VectorField([n](const auto& x) {
    using T = scalar_of<decltype(x)>;
    Vec<T> v(static_cast<size_t>(n));
    for (int a = 0; a < n; ++a) v[a] = 1.0 + cos(0.7 * x[a]) * x[(a + n - 1) % n];
    return v;
  }));
  return fs;
}

/// Components R(e_a, e_b, e_c, e_d) in the ordering g(R(Z,W)Y, X), index ((a*k+b)*k+c)*k+d.
inline std::vector<double> frame_components_kn(const RiemannAt& R, const std::vector<Vec<double>>& e) {
  const int k = static_cast<int>(e.size());
  std::vector<double> r(static_cast<size_t>(k * k * k * k));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c)
        for (int d = 0; d < k; ++d) r[static_cast<size_t>(((a * k + b) * k + c) * k + d)] = R.kn(e[a], e[b], e[c], e[d]);
  return r;
}

/// Matrix m(b, a) = g(e_b, M e_a) of an endomorphism in an orthonormal frame.
inline Mat<double> frame_matrix(const Mat<double>& g, const Mat<double>& M, const std::vector<Vec<double>>& e) {
  const int k = static_cast<int>(e.size());
  Mat<double> m(k, k);
  for (int a = 0; a < k; ++a) {
    const Vec<double> Me = matvec(M, e[a]);
    for (int b = 0; b < k; ++b) m(b, a) = inner(g, e[b], Me);
  }
  return m;
}

/// Replace slot s of a frame 4-tensor by its M-twist: R(.., M e, ..).
inline std::vector<double> twist(const std::vector<double>& r, const Mat<double>& m, int slot) {
  const int k = m.rows();
  std::vector<double> out(r.size(), 0.0);
  int idx[4];
  for (idx[0] = 0; idx[0] < k; ++idx[0])
    for (idx[1] = 0; idx[1] < k; ++idx[1])
      for (idx[2] = 0; idx[2] < k; ++idx[2])
        for (idx[3] = 0; idx[3] < k; ++idx[3]) {
          double s = 0.0;
          int j[4] = {idx[0], idx[1], idx[2], idx[3]};
          for (int x = 0; x < k; ++x) {
            j[slot] = x;
            s += m(x, idx[slot]) * r[static_cast<size_t>(((j[0] * k + j[1]) * k + j[2]) * k + j[3])];
          }
          out[static_cast<size_t>(((idx[0] * k + idx[1]) * k + idx[2]) * k + idx[3])] = s;
        }
  return out;
}

inline double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double r = 0.0;
  for (size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

}  // namespace detail

enum class GrayKind { K1, K2, K3 };

inline const char* to_string(GrayKind k) {
  switch (k) {
    case GrayKind::K1:
      return "K1";
    case GrayKind::K2:
      return "K2";
    case GrayKind::K3:
      return "K3";
  }
  return "?";
}

/**
 * Max |LHS - RHS| of a Gray-type identity over all 4-tuples of an orthonormal
 * frame, with M = J (K1..K3) or M = phi (K1phi..K3phi):
 *   K1: R(X,Y,Z,W) = R(X,Y,MZ,MW)
 *   K2: R(X,Y,Z,W) = R(MX,Y,Z,MW) + R(X,MY,Z,MW) + R(X,Y,MZ,MW)
 *   K3: R(X,Y,Z,W) = R(MX,MY,MZ,MW)
 */
inline double gray_residual(GrayKind kind, const RiemannAt& R, const Mat<double>& M,
                            const std::vector<Vec<double>>& frame) {
  const std::vector<double> r = detail::frame_components_kn(R, frame);
  const Mat<double> m = detail::frame_matrix(R.metric(), M, frame);
  using detail::twist;
  switch (kind) {
    case GrayKind::K1:
      return detail::max_diff(r, twist(twist(r, m, 2), m, 3));
    case GrayKind::K2: {
      const auto w = twist(r, m, 3);
      const auto a = twist(w, m, 0), b = twist(w, m, 1), c = twist(w, m, 2);
      std::vector<double> rhs(r.size());
      for (size_t i = 0; i < r.size(); ++i) rhs[i] = a[i] + b[i] + c[i];
      return detail::max_diff(r, rhs);
    }
    case GrayKind::K3:
      return detail::max_diff(r, twist(twist(twist(twist(r, m, 0), m, 1), m, 2), m, 3));
  }
  return 0.0;
}

/// Gray condition K_i phi on an almost contact metric manifold.
inline IdentityCheck gray_check(const AlmostContactMetricStructure& s, GrayKind kind,
                                const std::vector<std::vector<double>>& points, double tol) {
  return check_over_points(std::string("gray_") + to_string(kind) + "phi", points, tol, [&](std::span<const double> p) {
    const ContactAt c = contact_at(s, p);
    return gray_residual(kind, riemann_at(s.patch, p), c.phi, phi_adapted_frame(s, p).vectors);
  });
}

/// Gray condition K_i on an almost Hermitian manifold; points are chart points of that manifold.
inline IdentityCheck gray_check(const AlmostHermitianStructure& s, GrayKind kind,
                                const std::vector<std::vector<double>>& points, double tol) {
  return check_over_points(std::string("gray_") + to_string(kind), points, tol, [&](std::span<const double> p) {
    const Mat<double> J = s.J(Vec<double>(p.begin(), p.end()));
    return gray_residual(kind, riemann_at(s.patch, p), J, j_adapted_frame(s, p).vectors);
  });
}

/// The four terms of the structure equation for one test vector.
struct StructureTerms {
  double lhs = 0;          // delta Phi(E)
  double base = 0;         // delta' Omega(d pi h E) at pi(p)
  double fibre = 0;        // fibre codifferential at v E
  double mean_curv = 0;    // g(H, phi h E)
  double half_trace = 0;   // 1/2 g(Tr B^h, v E)
  double rhs() const { return base + fibre + mean_curv + half_trace; }
};

inline StructureTerms structure_terms(const SubmersionInstance& sub, std::span<const double> p, const OrthoFrame& frame,
                                      const Vec<double>& E) {
  require_contact_complex(sub);
  const auto s = submersion_jets<double>(sub, p);
  const Vec<double> hE = s.h(E), vE = s.v(E);
  StructureTerms t;
  t.lhs = codiff_2form(*sub.contact, p, frame, E);
  t.base = base_codiff(sub, project_to_base(sub, p), matvec(jacobian(sub, p), hE));
  t.fibre = fibre_codiff(sub, p, vE);
  t.mean_curv = inner(s.m.g, mean_curvature(sub, p), s.phi_of(hE));
  t.half_trace = 0.5 * inner(s.m.g, trace_B_h(sub, p), vE);
  return t;
}

/// delta Phi(E) = delta' Omega(E') + fibre delta(vE) + g(H, phi hE) + 1/2 g(Tr B^h, vE) over a full frame.
inline IdentityCheck structure_equation_check(const SubmersionInstance& sub,
                                              const std::vector<std::vector<double>>& points, double tol) {
  return check_over_points("structure_equation", points, tol, [&](std::span<const double> p) {
    const OrthoFrame f = submersion_frame(sub, p);
    double r = 0.0;
    for (const auto& E : f.vectors) {
      const StructureTerms t = structure_terms(sub, p, f, E);
      r = std::max(r, std::abs(t.lhs - t.rhs()));
    }
    return r;
  });
}

/// Horizontal part: delta Phi(X) = g(H, phi X) + delta' Omega(X').
inline IdentityCheck codif3_check(const SubmersionInstance& sub, const std::vector<std::vector<double>>& points,
                                  double tol) {
  return check_over_points("codif3", points, tol, [&](std::span<const double> p) {
    const OrthoFrame f = submersion_frame(sub, p);
    double r = 0.0;
    for (const auto& X : f.horizontal()) {
      const StructureTerms t = structure_terms(sub, p, f, X);
      r = std::max(r, std::abs(t.lhs - t.mean_curv - t.base));
    }
    return r;
  });
}

/// Vertical part: delta Phi(V) = fibre delta(V) + 1/2 g(Tr B^h, V).
inline IdentityCheck codif4_check(const SubmersionInstance& sub, const std::vector<std::vector<double>>& points,
                                  double tol) {
  return check_over_points("codif4", points, tol, [&](std::span<const double> p) {
    const OrthoFrame f = submersion_frame(sub, p);
    double r = 0.0;
    for (const auto& V : f.vertical()) {
      const StructureTerms t = structure_terms(sub, p, f, V);
      r = std::max(r, std::abs(t.lhs - t.fibre - t.half_trace));
    }
    return r;
  });
}

/**
 * Fibre curvature from the induced connection nabla^_U W = v nabla_U W, as a
 * 4-tensor in the vertical orthonormal basis, ordering g(R^(Z,W)Y, X).
 */
inline std::vector<double> fibre_curvature_kn(const SubmersionInstance& sub, std::span<const double> p) {
  const auto s2 = submersion_jets<Jet<2>>(sub, p);
  const auto s1 = truncate(s2);
  const auto s0 = truncate(s1);
  const int k = static_cast<int>(s2.vbasis.size());
  // D[b][c] = nabla^_{E_b} E_c as a first order jet
  std::vector<std::vector<Vec<Jet<1>>>> D(static_cast<size_t>(k));
  for (int b = 0; b < k; ++b)
    for (int c = 0; c < k; ++c) D[b].push_back(s1.v(covd(s2.m.gamma, s1.vbasis[b], s2.vbasis[c])));
  const auto& G0 = s1.m.gamma;
  std::vector<double> r(static_cast<size_t>(k * k * k * k));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      const Vec<double> br = bracket(s1.vbasis[a], s1.vbasis[b]);
      for (int c = 0; c < k; ++c) {
        const Vec<double> Rabc = s0.v(covd(G0, s0.vbasis[a], D[b][c])) - s0.v(covd(G0, s0.vbasis[b], D[a][c])) -
                                 s0.v(covd(G0, br, s1.vbasis[c]));
        for (int d = 0; d < k; ++d) {
          // pinned R(E_a,E_b,E_c,E_d) = g(R(E_a,E_b)E_c, E_d); the other ordering is its negative
          r[static_cast<size_t>(((a * k + b) * k + c) * k + d)] = -inner(s0.m.g, Rabc, s0.vbasis[d]);
        }
      }
    }
  return r;
}

enum class CurvatureSide { Vertical, Horizontal };

/**
 * Submersion curvature equations with R(X,Y,Z,W) read as g(R(Z,W)Y, X):
 *   R(U,V,F,W) = R^(U,V,F,W) + g(T_U W, T_V F) - g(T_V W, T_U F)
 *   R(X,Y,Z,H) = R*(X,Y,Z,H) - 2g(A_X Y, A_Z H) + g(A_Y Z, A_X H) - g(A_X Z, A_Y H)
 * with R* = R' o d pi, over all tuples of an orthonormal vertical / horizontal basis.
 */
inline double curvature_submersion_residual(const SubmersionInstance& sub, std::span<const double> p, CurvatureSide side) {
  const RiemannAt R = riemann_at(sub.total, p);
  const auto L = submersion_local<Jet<1>>(sub, p);
  const Mat<double>& g = L.lo.m.g;
  double res = 0.0;
  if (side == CurvatureSide::Vertical) {
    const auto& e = L.lo.vbasis;
    const int k = static_cast<int>(e.size());
    const std::vector<double> Rhat = fibre_curvature_kn(sub, p);
    std::vector<std::vector<Vec<double>>> T(static_cast<size_t>(k));
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) T[a].push_back(oneill_T_jet(L, constant_vec<Jet<1>>(e[a]), constant_vec<Jet<1>>(e[b])));
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        for (int c = 0; c < k; ++c)
          for (int d = 0; d < k; ++d) {
            const double rhs = Rhat[static_cast<size_t>(((a * k + b) * k + c) * k + d)] + inner(g, T[a][d], T[b][c]) -
                               inner(g, T[b][d], T[a][c]);
            res = std::max(res, std::abs(R.kn(e[a], e[b], e[c], e[d]) - rhs));
          }
  } else {
    const auto e = split_basis(sub, p).horizontal;
    const int k = static_cast<int>(e.size());
    const Vec<double> pb = project_to_base(sub, p);
    const RiemannAt Rb = riemann_at(sub.base, pb);
    const Mat<double> dpi = jacobian(sub, p);
    std::vector<Vec<double>> de;
    for (const auto& v : e) de.push_back(matvec(dpi, v));
    std::vector<std::vector<Vec<double>>> A(static_cast<size_t>(k));
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) A[a].push_back(oneill_A_jet(L, constant_vec<Jet<1>>(e[a]), constant_vec<Jet<1>>(e[b])));
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        for (int c = 0; c < k; ++c)
          for (int d = 0; d < k; ++d) {
            const double rhs = Rb.kn(de[a], de[b], de[c], de[d]) - 2.0 * inner(g, A[a][b], A[c][d]) +
                               inner(g, A[b][c], A[a][d]) - inner(g, A[a][c], A[b][d]);
            res = std::max(res, std::abs(R.kn(e[a], e[b], e[c], e[d]) - rhs));
          }
  }
  return res;
}

inline IdentityCheck curvature_submersion_check(const SubmersionInstance& sub,
                                                const std::vector<std::vector<double>>& points, CurvatureSide side,
                                                double tol) {
  const char* name = side == CurvatureSide::Vertical ? "curvature_vertical" : "curvature_horizontal";
  return check_over_points(name, points, tol,
                           [&](std::span<const double> p) { return curvature_submersion_residual(sub, p, side); });
}

/// max |v[X,Y]| = 2|A_X Y| over an orthonormal horizontal basis; zero iff H is integrable.
inline IdentityCheck horizontal_integrability_check(const SubmersionInstance& sub,
                                                    const std::vector<std::vector<double>>& points, double tol) {
  return check_over_points("horizontal_integrability", points, tol, [&](std::span<const double> p) {
    const auto L = submersion_local<Jet<1>>(sub, p);
    const auto e = split_basis(sub, p).horizontal;
    double r = 0.0;
    for (const auto& X : e)
      for (const auto& Y : e)
        r = std::max(r, 2.0 * detail::gn(L.lo.m.g, oneill_A_jet(L, constant_vec<Jet<1>>(X), constant_vec<Jet<1>>(Y))));
    return r;
  });
}

/// Nijenhuis tensor of J on coordinate fields plus |nabla' J| over a J-adapted frame, at a base point.
inline double kahler_defect(const AlmostHermitianStructure& h, std::span<const double> pb) {
  const auto m = metric_jets<Jet<1>>(h.patch, pb);
  const Mat<Jet<1>> J = h.J(m.x);
  const Mat<double> J0 = truncate_mat<double>(J), g = truncate_mat<double>(m.g);
  const int n = h.patch.dim;
  double nij = 0.0, dj = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Vec<Jet<1>> X = constant_vec<Jet<1>>(unit_vector(n, a)), Y = constant_vec<Jet<1>>(unit_vector(n, b));
      const Vec<Jet<1>> JX = matvec(J, X), JY = matvec(J, Y);
      const Vec<double> N = matvec(J0, matvec(J0, bracket(X, Y))) + bracket(JX, JY) - matvec(J0, bracket(JX, Y)) -
                            matvec(J0, bracket(X, JY));
      nij = std::max(nij, detail::gn(g, N));
    }
  for (const auto& e : j_adapted_frame(h, pb).vectors) {
    const Mat<double> d = covd_endo(m.gamma, e, J);
    for (const auto& f : j_adapted_frame(h, pb).vectors) dj = std::max(dj, detail::gn(g, matvec(d, f)));
  }
  return nij + dj;
}

/**
 * For an almost cosymplectic total space: A_X xi = 0 on H holds iff the base is
 * Kahler. Per point residual is equivalence_residual(max|A_X xi|, kahler_defect).
 * Throws PreconditionNotMet if the total space is not almost cosymplectic.
 */
inline IdentityCheck kahler_base_criterion_check(const SubmersionInstance& sub,
                                                 const std::vector<std::vector<double>>& points, double tol) {
  require_contact_complex(sub);
  if (classify(*sub.contact, points).almost_cosymplectic > 1e-8)
    throw GeometryError(ErrorKind::PreconditionNotMet, sub.name + " is not almost cosymplectic");
  return check_over_points("kahler_base", points, tol, [&](std::span<const double> p) {
    const auto L = submersion_local<Jet<1>>(sub, p);
    const Vec<Jet<1>> xi = constant_vec<Jet<1>>(sub.contact->xi(L.lo.m.x));
    double a = 0.0;
    for (const auto& X : split_basis(sub, p).horizontal)
      a = std::max(a, detail::gn(L.lo.m.g, oneill_A_jet(L, constant_vec<Jet<1>>(X), xi)));
    return equivalence_residual(a, kahler_defect(*sub.hermitian, project_to_base(sub, p)));
  });
}

/// |T_U V + (1/2f) g(U,V) grad f| over an orthonormal vertical basis, for a warped product with warping f.
inline IdentityCheck warped_T_check(const SubmersionInstance& sub, const ScalarField& f,
                                    const std::vector<std::vector<double>>& points, double tol) {
  return check_over_points("warped_T", points, tol, [&](std::span<const double> p) {
    const auto L = submersion_local<Jet<1>>(sub, p);
    const Mat<double>& g = L.lo.m.g;
    const Jet<1> fj = f(L.hi.m.x);
    Vec<double> df(static_cast<size_t>(sub.total.dim));
    for (int i = 0; i < sub.total.dim; ++i) df[i] = fj.grad(i);
    const Vec<double> grad = spd_solve(g, df);
    double r = 0.0;
    for (const auto& U : L.lo.vbasis)
      for (const auto& V : L.lo.vbasis) {
        const Vec<double> T = oneill_T_jet(L, constant_vec<Jet<1>>(U), constant_vec<Jet<1>>(V));
        r = std::max(r, detail::gn(g, T + (inner(g, U, V) / (2.0 * fj.value())) * grad));
      }
    return r;
  });
}

// O'Neill tensor properties.

/// |T_U W - T_W U| for vertical U, W.
inline double oneill_T_symmetry_residual(const SubmersionInstance& sub, std::span<const double> p) {
  const auto L = submersion_local<Jet<1>>(sub, p);
  double r = 0.0;
  for (const auto& U : L.lo.vbasis)
    for (const auto& W : L.lo.vbasis) {
      const Vec<Jet<1>> u = constant_vec<Jet<1>>(U), w = constant_vec<Jet<1>>(W);
      r = std::max(r, detail::gn(L.lo.m.g, oneill_T_jet(L, u, w) - oneill_T_jet(L, w, u)));
    }
  return r;
}

/// max(|A_X Y + A_Y X|, |A_X Y - 1/2 v[X,Y]|) over basic lifts of base test fields.
inline double oneill_A_symmetry_residual(const SubmersionInstance& sub, std::span<const double> p) {
  const auto L = submersion_local<Jet<1>>(sub, p);
  std::vector<Vec<Jet<1>>> lifts;
  for (const auto& F : detail::base_test_fields(sub.base.dim)) lifts.push_back(basic_lift_jet<Jet<1>>(sub, p, F));
  double r = 0.0;
  for (const auto& X : lifts)
    for (const auto& Y : lifts) {
      const Vec<double> axy = oneill_A_jet(L, X, Y);
      r = std::max({r, detail::gn(L.lo.m.g, axy + oneill_A_jet(L, Y, X)),
                    detail::gn(L.lo.m.g, axy - 0.5 * L.lo.v(bracket(X, Y)))});
    }
  return r;
}

/// |d pi (h nabla_X Y) - nabla'_{X'} Y'| for basic lifts of base test fields.
inline double basic_connection_residual(const SubmersionInstance& sub, std::span<const double> p) {
  const auto L = submersion_local<Jet<1>>(sub, p);
  const Vec<double> pb = project_to_base(sub, p);
  const auto mb = metric_jets<Jet<1>>(sub.base, pb);
  const Mat<double> gb = truncate_mat<double>(mb.g);
  const Mat<double> dpi = jacobian(sub, p);
  const auto fields = detail::base_test_fields(sub.base.dim);
  double r = 0.0;
  for (const auto& Fx : fields)
    for (const auto& Fy : fields) {
      const Vec<double> X = values(basic_lift_jet<Jet<1>>(sub, p, Fx));
      const Vec<Jet<1>> Y = basic_lift_jet<Jet<1>>(sub, p, Fy);
      const Vec<double> lhs = matvec(dpi, L.lo.h(covd(L.gamma(), X, Y)));
      const Vec<double> rhs = covd(mb.gamma, Fx(pb), Fy(mb.x));
      r = std::max(r, detail::gn(gb, lhs - rhs));
    }
  return r;
}

/// |Phi(X, Y) - Omega(d pi X, d pi Y)| for X horizontal and Y arbitrary, over the adapted frame.
inline double pullback_omega_residual(const SubmersionInstance& sub, std::span<const double> p) {
  require_contact_complex(sub);
  const OrthoFrame f = submersion_frame(sub, p);
  const Mat<double> dpi = jacobian(sub, p);
  const Vec<double> pb = project_to_base(sub, p);
  const Mat<double> gb = eval_metric(sub.base, pb), J = sub.hermitian->J(pb);
  double r = 0.0;
  for (const auto& X : f.horizontal())
    for (const auto& Y : f.vectors) {
      const double omega = inner(gb, matvec(dpi, X), matvec(J, matvec(dpi, Y)));
      r = std::max({r, std::abs(fundamental_form(*sub.contact, p, X, Y) - omega),
                    std::abs(fundamental_form(*sub.contact, p, Y, X) + omega)});
    }
  return r;
}

/// |d pi (h (nabla_X phi) Y) - (nabla'_{X'} J) Y'| over horizontal lifts of base coordinate vectors.
inline double basic_phi_residual(const SubmersionInstance& sub, std::span<const double> p) {
  require_contact_complex(sub);
  const auto c = contact_jets<Jet<1>>(*sub.contact, p);
  const auto s = submersion_jets<double>(sub, p);
  const Vec<double> pb = project_to_base(sub, p);
  const auto mb = metric_jets<Jet<1>>(sub.base, pb);
  const Mat<Jet<1>> J = sub.hermitian->J(mb.x);
  const Mat<double> gb = truncate_mat<double>(mb.g), dpi = jacobian(sub, p);
  const int m = sub.base.dim;
  double r = 0.0;
  for (int a = 0; a < m; ++a) {
    const Vec<double> Xb = unit_vector(m, a), X = horizontal_lift(sub, p, Xb);
    const Mat<double> dphi = nabla_phi(c, X), dJ = covd_endo(mb.gamma, Xb, J);
    for (int b = 0; b < m; ++b) {
      const Vec<double> Yb = unit_vector(m, b), Y = horizontal_lift(sub, p, Yb);
      r = std::max(r, detail::gn(gb, matvec(dpi, s.h(matvec(dphi, Y))) - matvec(dJ, Yb)));
    }
  }
  return r;
}

/// xi vertical, phi H in H and phi V in V.
inline double phi_invariance_residual(const SubmersionInstance& sub, std::span<const double> p) {
  require_contact_complex(sub);
  const auto s = submersion_jets<double>(sub, p);
  const SplitBasis b = split_basis(sub, p);
  const Vec<double> xi = sub.contact->xi(s.m.x);
  double r = detail::gn(s.m.g, s.h(xi));
  for (const auto& X : b.horizontal) r = std::max(r, detail::gn(s.m.g, s.v(s.phi_of(X))));
  for (const auto& V : b.vertical) r = std::max(r, detail::gn(s.m.g, s.h(s.phi_of(V))));
  return r;
}

// Tensor B.

/// |B(V, E)| for vertical V and every frame vector E.
inline double b_vertical_zero_residual(const SubmersionInstance& sub, std::span<const double> p) {
  const OrthoFrame f = submersion_frame(sub, p);
  const auto L = submersion_local<Jet<1>>(sub, p);
  double r = 0.0;
  for (const auto& V : f.vertical())
    for (const auto& E : f.vectors)
      r = std::max(r, detail::gn(L.lo.m.g, tensor_B_jet(L, constant_vec<Jet<1>>(V), constant_vec<Jet<1>>(E))));
  return r;
}

/// max(|B(X,Y) - B(Y,X)|, |B(X,Y) - A_X phi Y + A_{phi X} Y|) on horizontal pairs.
inline double b_symmetry_residual(const SubmersionInstance& sub, std::span<const double> p) {
  const OrthoFrame f = submersion_frame(sub, p);
  const auto L = submersion_local<Jet<1>>(sub, p);
  const auto& g = L.lo.m.g;
  auto c = [](const Vec<double>& v) { return constant_vec<Jet<1>>(v); };
  double r = 0.0;
  for (const auto& X : f.horizontal())
    for (const auto& Y : f.horizontal()) {
      const Vec<double> bxy = tensor_B_jet(L, c(X), c(Y));
      const Vec<double> a = oneill_A_jet(L, c(X), c(L.lo.phi_of(Y))) - oneill_A_jet(L, c(L.lo.phi_of(X)), c(Y));
      r = std::max({r, detail::gn(g, bxy - tensor_B_jet(L, c(Y), c(X))), detail::gn(g, bxy - a)});
    }
  return r;
}

/// |B(phi X, phi Y) - B(X, Y)| on horizontal pairs.
inline double b_j_invariance_residual(const SubmersionInstance& sub, std::span<const double> p) {
  const OrthoFrame f = submersion_frame(sub, p);
  const auto L = submersion_local<Jet<1>>(sub, p);
  auto c = [](const Vec<double>& v) { return constant_vec<Jet<1>>(v); };
  double r = 0.0;
  for (const auto& X : f.horizontal())
    for (const auto& Y : f.horizontal()) {
      const Vec<double> d = tensor_B_jet(L, c(L.lo.phi_of(X)), c(L.lo.phi_of(Y))) - tensor_B_jet(L, c(X), c(Y));
      r = std::max(r, detail::gn(L.lo.m.g, d));
    }
  return r;
}

/// Horizontal pairs map to V, (horizontal, vertical) pairs map to H.
inline double b_type_residual(const SubmersionInstance& sub, std::span<const double> p) {
  const OrthoFrame f = submersion_frame(sub, p);
  const auto L = submersion_local<Jet<1>>(sub, p);
  const auto& g = L.lo.m.g;
  auto c = [](const Vec<double>& v) { return constant_vec<Jet<1>>(v); };
  double r = 0.0;
  for (const auto& X : f.horizontal()) {
    for (const auto& Y : f.horizontal()) r = std::max(r, detail::gn(g, L.lo.h(tensor_B_jet(L, c(X), c(Y)))));
    for (const auto& V : f.vertical()) r = std::max(r, detail::gn(g, L.lo.v(tensor_B_jet(L, c(X), c(V)))));
  }
  return r;
}

/// |B(phi X, xi) - h nabla_X xi| for horizontal X.
inline double b_phi_xi_residual(const SubmersionInstance& sub, std::span<const double> p) {
  const OrthoFrame f = submersion_frame(sub, p);
  const auto L = submersion_local<Jet<1>>(sub, p);
  const Vec<Jet<1>> xi = sub.contact->xi(L.hi.m.x);
  double r = 0.0;
  for (const auto& X : f.horizontal()) {
    const Vec<double> lhs = tensor_B_jet(L, constant_vec<Jet<1>>(L.lo.phi_of(X)), xi);
    r = std::max(r, detail::gn(L.lo.m.g, lhs - L.lo.h(covd(L.gamma(), X, xi))));
  }
  return r;
}

/// g(B(X,Y),V) - g(nabla_V phi Y + phi nabla_V Y, X) - 2 V g(phi X, Y) for basic X, Y and vertical V.
inline double b_inner_product_residual(const SubmersionInstance& sub, std::span<const double> p) {
  require_contact_complex(sub);
  const auto L = submersion_local<Jet<1>>(sub, p);
  const Mat<Jet<1>>& phi = *L.hi.phi;
  const Mat<double>& g = L.lo.m.g;
  std::vector<Vec<Jet<1>>> lifts;
  for (const auto& F : detail::base_test_fields(sub.base.dim)) lifts.push_back(basic_lift_jet<Jet<1>>(sub, p, F));
  double r = 0.0;
  for (const auto& X : lifts)
    for (const auto& Y : lifts) {
      const Vec<double> x0 = values(X);
      const Vec<double> bxy = tensor_B_jet(L, X, Y);
      const Jet<1> gpxy = inner(L.hi.m.g, matvec(phi, X), Y);
      for (const auto& V : L.lo.vbasis) {
        const Vec<double> t = covd(L.gamma(), V, matvec(phi, Y)) + L.lo.phi_of(covd(L.gamma(), V, Y));
        const double rhs = inner(g, t, x0) + 2.0 * directional(V, gpxy);
        r = std::max(r, std::abs(inner(g, bxy, V) - rhs));
      }
    }
  return r;
}

// Riemannian substrate.

/// |nabla_X Y - nabla_Y X - [X,Y]| over pairs of test fields.
inline double torsion_residual(const ChartPatch& patch, std::span<const double> p) {
  const auto m = metric_jets<Jet<1>>(patch, p);
  const Mat<double> g = truncate_mat<double>(m.g);
  const auto fields = detail::total_test_fields(patch.dim);
  double r = 0.0;
  for (const auto& Fx : fields)
    for (const auto& Fy : fields) {
      const Vec<Jet<1>> X = Fx(m.x), Y = Fy(m.x);
      const Vec<double> t = covd(m.gamma, values(X), Y) - covd(m.gamma, values(Y), X) - bracket(X, Y);
      r = std::max(r, detail::gn(g, t));
    }
  return r;
}

/// |X g(Y,Z) - g(nabla_X Y, Z) - g(Y, nabla_X Z)| over test fields.
inline double metric_compat_residual(const ChartPatch& patch, std::span<const double> p) {
  const auto m = metric_jets<Jet<1>>(patch, p);
  const Mat<double> g = truncate_mat<double>(m.g);
  const auto fields = detail::total_test_fields(patch.dim);
  std::vector<Vec<Jet<1>>> F;
  for (const auto& f : fields) F.push_back(f(m.x));
  double r = 0.0;
  for (const auto& X : F) {
    const Vec<double> x = values(X);
    for (const auto& Y : F)
      for (const auto& Z : F) {
        const double lhs = directional(x, inner(m.g, Y, Z));
        const double rhs = inner(g, covd(m.gamma, x, Y), values(Z)) + inner(g, values(Y), covd(m.gamma, x, Z));
        r = std::max(r, std::abs(lhs - rhs));
      }
  }
  return r;
}

/// Antisymmetries, pair symmetry and first Bianchi identity in an orthonormal frame.
inline double riemann_symmetry_residual(const ChartPatch& patch, std::span<const double> p) {
  const RiemannAt R = riemann_at(patch, p);
  const Mat<double> g = R.metric();
  std::vector<Vec<double>> e;
  for (int i = 0; i < patch.dim; ++i) e.push_back(unit_vector(patch.dim, i));
  e = gram_schmidt(g, e);
  const int k = patch.dim;
  const std::vector<double> r = detail::frame_components_kn(R, e);
  auto at = [&](int a, int b, int c, int d) { return r[static_cast<size_t>(((a * k + b) * k + c) * k + d)]; };
  double res = 0.0;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c)
        for (int d = 0; d < k; ++d)
          res = std::max({res, std::abs(at(a, b, c, d) + at(b, a, c, d)), std::abs(at(a, b, c, d) + at(a, b, d, c)),
                          std::abs(at(a, b, c, d) - at(c, d, a, b)),
                          std::abs(at(a, b, c, d) + at(b, c, a, d) + at(c, a, b, d))});
  return res;
}

/// |delta Phi(E)| difference between two independently built adapted frames.
inline double frame_independence_residual(const AlmostContactMetricStructure& s, std::span<const double> p,
                                          const OrthoFrame& f0, const OrthoFrame& f1) {
  double r = 0.0;
  for (const auto& E : f0.vectors) r = std::max(r, std::abs(codiff_2form(s, p, f0, E) - codiff_2form(s, p, f1, E)));
  return r;
}

}  // namespace ccsub
