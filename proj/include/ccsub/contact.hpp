#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "ccsub/connection.hpp"
#include "ccsub/frame.hpp"
#include "ccsub/structures.hpp"

namespace ccsub {

namespace detail {

inline double max_abs(const Mat<double>& m) {
  double r = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r = std::max(r, std::abs(m(i, j)));
  return r;
}

inline double gnorm_or_zero(const Mat<double>& g, const Vec<double>& v) { return std::sqrt(std::max(0.0, inner(g, v, v))); }

}  // namespace detail

/// Pointwise residuals of the almost contact metric axioms and their consequences.
struct ContactAxiomResiduals {
  double phi_squared = 0;    // phi^2 + I - eta (x) xi
  double eta_of_xi = 0;      // eta(xi) - 1
  double compatibility = 0;  // g(phi X, phi Y) - g(X, Y) + eta(X) eta(Y)
  double phi_xi = 0;         // phi xi
  double eta_phi = 0;        // eta o phi
  double eta_is_dual = 0;    // eta(X) - g(X, xi)

  double max() const { return std::max({phi_squared, eta_of_xi, compatibility, phi_xi, eta_phi, eta_is_dual}); }
};

inline ContactAxiomResiduals contact_axioms(const AlmostContactMetricStructure& s, std::span<const double> p) {
  const ContactAt c = contact_at(s, p);
  const int n = s.patch.dim;
  ContactAxiomResiduals r;
  Mat<double> a = matmul(c.phi, c.phi);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) += (i == j ? 1.0 : 0.0) - c.xi[i] * c.eta[j];
  r.phi_squared = detail::max_abs(a);
  r.eta_of_xi = std::abs(dot(c.eta, c.xi) - 1.0);
  Mat<double> b = matmul(transpose(c.phi), matmul(c.g, c.phi));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) += c.eta[i] * c.eta[j] - c.g(i, j);
  r.compatibility = detail::max_abs(b);
  r.phi_xi = max_abs(matvec(c.phi, c.xi));
  r.eta_phi = max_abs(matvec(transpose(c.phi), c.eta));
  r.eta_is_dual = max_abs(c.eta - matvec(c.g, c.xi));
  return r;
}

/// max of |J^2 + I| and |g(JX, JY) - g(X, Y)| entries.
inline double hermitian_axioms(const AlmostHermitianStructure& s, std::span<const double> p) {
  require_in_domain(s.patch, p);
  const Vec<double> x(p.begin(), p.end());
  const Mat<double> g = s.patch.metric(x), J = s.J(x);
  const int n = s.patch.dim;
  Mat<double> a = matmul(J, J), b = matmul(transpose(J), matmul(g, J));
  for (int i = 0; i < n; ++i) {
    a(i, i) += 1.0;
    for (int j = 0; j < n; ++j) b(i, j) -= g(i, j);
  }
  return std::max(detail::max_abs(a), detail::max_abs(b));
}

/// Phi(X, Y) = g(X, phi Y).
inline double fundamental_form(const AlmostContactMetricStructure& s, std::span<const double> p, const Vec<double>& X,
                               const Vec<double>& Y) {
  const ContactAt c = contact_at(s, p);
  return inner(c.g, X, matvec(c.phi, Y));
}

struct ClassResiduals {
  double sasakian = 0;              // (nabla_X phi) Y - g(X, Y) xi + eta(Y) X
  double cosymplectic = 0;          // nabla phi
  double almost_cosymplectic = 0;   // max(|d Phi|, |d eta|)
};

/// Class residuals at one point, over a phi-adapted orthonormal frame.
inline ClassResiduals classify_at(const AlmostContactMetricStructure& s, std::span<const double> p) {
  const OrthoFrame f = phi_adapted_frame(s, p);
  const auto c = contact_jets<Jet<1>>(s, p);
  const Mat<double> g = truncate_mat<double>(c.m.g);
  const Vec<double> xi = values(c.xi), eta = values(c.eta);
  const TwoFormField Phi = fundamental_form_field(s);
  ClassResiduals r;
  for (const auto& X : f.vectors) {
    const Mat<double> dphi = nabla_phi(c, X);
    for (const auto& Y : f.vectors) {
      const Vec<double> d = matvec(dphi, Y);
      r.cosymplectic = std::max(r.cosymplectic, detail::gnorm_or_zero(g, d));
      const Vec<double> sas = d - inner(g, X, Y) * xi + dot(eta, Y) * X;
      r.sasakian = std::max(r.sasakian, detail::gnorm_or_zero(g, sas));
      r.almost_cosymplectic = std::max(r.almost_cosymplectic, std::abs(ext_deriv_1form(s.eta, p, X, Y)));
    }
  }
  for (int a = 0; a < f.size(); ++a)
    for (int b = a + 1; b < f.size(); ++b)
      for (int d = b + 1; d < f.size(); ++d)
        r.almost_cosymplectic =
            std::max(r.almost_cosymplectic, std::abs(ext_deriv_2form(Phi, p, f.vectors[a], f.vectors[b], f.vectors[d])));
  return r;
}

/// Maximum class residuals over sample points.
inline ClassResiduals classify(const AlmostContactMetricStructure& s, const std::vector<std::vector<double>>& points) {
  ClassResiduals r;
  for (const auto& p : points) {
    const ClassResiduals q = classify_at(s, p);
    r.sasakian = std::max(r.sasakian, q.sasakian);
    r.cosymplectic = std::max(r.cosymplectic, q.cosymplectic);
    r.almost_cosymplectic = std::max(r.almost_cosymplectic, q.almost_cosymplectic);
  }
  return r;
}

/// A* X = -nabla_X xi.
inline Vec<double> a_star(const AlmostContactMetricStructure& s, std::span<const double> p, const Vec<double>& X) {
  const auto c = contact_jets<Jet<1>>(s, p);
  return -covd(c.m.gamma, X, c.xi);
}

struct AStarResiduals {
  double e1 = 0;  // g(A*X, Y) - g(X, A*Y)
  double e2 = 0;  // A* phi + phi A*, A* xi, eta o A*
  double e3 = 0;  // (nabla_X phi) Y + g(phi A* X, Y) xi - eta(Y) phi A* X
};

inline AStarResiduals a_star_residuals_at(const AlmostContactMetricStructure& s, std::span<const double> p) {
  const OrthoFrame f = phi_adapted_frame(s, p);
  const auto c = contact_jets<Jet<1>>(s, p);
  const Mat<double> g = truncate_mat<double>(c.m.g), phi = truncate_mat<double>(c.phi);
  const Vec<double> xi = values(c.xi), eta = values(c.eta);
  auto astar = [&](const Vec<double>& X) { return -covd(c.m.gamma, X, c.xi); };
  AStarResiduals r;
  for (const auto& X : f.vectors) {
    const Vec<double> aX = astar(X);
    const Vec<double> anti = astar(matvec(phi, X)) + matvec(phi, aX);
    r.e2 = std::max({r.e2, detail::gnorm_or_zero(g, anti), std::abs(dot(eta, aX))});
    const Vec<double> phiaX = matvec(phi, aX);
    const Mat<double> dphi = nabla_phi(c, X);
    for (const auto& Y : f.vectors) {
      r.e1 = std::max(r.e1, std::abs(inner(g, aX, Y) - inner(g, X, astar(Y))));
      const Vec<double> e3 = matvec(dphi, Y) + inner(g, phiaX, Y) * xi - dot(eta, Y) * phiaX;
      r.e3 = std::max(r.e3, detail::gnorm_or_zero(g, e3));
    }
  }
  r.e2 = std::max(r.e2, detail::gnorm_or_zero(g, astar(xi)));
  return r;
}

inline AStarResiduals check_a_star_identities(const AlmostContactMetricStructure& s,
                                              const std::vector<std::vector<double>>& points) {
  AStarResiduals r;
  for (const auto& p : points) {
    const AStarResiduals q = a_star_residuals_at(s, p);
    r.e1 = std::max(r.e1, q.e1);
    r.e2 = std::max(r.e2, q.e2);
    r.e3 = std::max(r.e3, q.e3);
  }
  return r;
}

struct NTensors {
  Vec<double> n1;
  double n2 = 0;
  Vec<double> n3;
  double n4 = 0;
};

/**
 * Normality tensors for vector fields X, Y:
 *   N1(X,Y) = [phi,phi](X,Y) + 2 d eta(X,Y) xi   (d eta with the 1/2 normalization)
 *   N2(X,Y) = (L_{phi X} eta) Y - (L_{phi Y} eta) X
 *   N3(X)   = (L_xi phi) X
 *   N4(X)   = (L_xi eta) X
 * with [phi,phi](X,Y) = phi^2[X,Y] + [phi X, phi Y] - phi[phi X, Y] - phi[X, phi Y].
 * N1 is tensorial; N2..N4 depend on the fields supplied.
 */
inline NTensors n_tensors(const AlmostContactMetricStructure& s, std::span<const double> p, const VectorField& X,
                          const VectorField& Y) {
  require_in_domain(s.patch, p);
  using J1 = Jet<1>;
  const Vec<J1> x = seed<J1>(p);
  const Mat<J1> phi = s.phi(x);
  const Vec<J1> xi = s.xi(x), eta = s.eta(x);
  const Vec<J1> Xj = X(x), Yj = Y(x);
  const Vec<J1> pX = matvec(phi, Xj), pY = matvec(phi, Yj);
  const Mat<double> phi0 = truncate_mat<double>(phi);
  const Vec<double> xi0 = values(xi), eta0 = values(eta);
  const Vec<double> X0 = values(Xj), Y0 = values(Yj);

  NTensors r;
  const Vec<double> nij = matvec(phi0, matvec(phi0, bracket(Xj, Yj))) + bracket(pX, pY) -
                          matvec(phi0, bracket(pX, Yj)) - matvec(phi0, bracket(Xj, pY));
  const double deta_full = ext_deriv_1form(s.eta, p, X0, Y0);
  r.n1 = nij + deta_full * xi0;

  auto lie_eta = [&](const Vec<J1>& Z, const Vec<J1>& W) {
    return directional(values(Z), dot(eta, W)) - dot(eta0, bracket(Z, W));
  };
  r.n2 = lie_eta(pX, Yj) - lie_eta(pY, Xj);
  r.n3 = bracket(xi, pX) - matvec(phi0, bracket(xi, Xj));
  r.n4 = lie_eta(xi, Xj);
  return r;
}

struct HarmonicityResiduals {
  double d_phi = 0;
  double delta_phi = 0;
};

/// Max |d Phi| over frame triples and |delta Phi| over frame vectors.
inline HarmonicityResiduals harmonicity_residual(const AlmostContactMetricStructure& s,
                                                 const std::vector<std::vector<double>>& points) {
  const TwoFormField Phi = fundamental_form_field(s);
  HarmonicityResiduals r;
  for (const auto& p : points) {
    const OrthoFrame f = phi_adapted_frame(s, p);
    for (int a = 0; a < f.size(); ++a) {
      r.delta_phi = std::max(r.delta_phi, std::abs(codiff_2form(s, p, f, f.vectors[a])));
      for (int b = a + 1; b < f.size(); ++b)
        for (int d = b + 1; d < f.size(); ++d)
          r.d_phi = std::max(r.d_phi, std::abs(ext_deriv_2form(Phi, p, f.vectors[a], f.vectors[b], f.vectors[d])));
    }
  }
  return r;
}

}  // namespace ccsub
