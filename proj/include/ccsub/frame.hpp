#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "ccsub/error.hpp"
#include "ccsub/linalg.hpp"
#include "ccsub/structures.hpp"

namespace ccsub {

enum class FrameRole { Basic, PhiBasic, Vertical, PhiVertical, Reeb, Plain };

/**
 * Orthonormal frame at a point, ordered {X_i, phi X_i; V_j, phi V_j; xi} for
 * almost contact frames and {E_i, J E_i} for almost Hermitian ones.
 */
struct OrthoFrame {
  std::vector<double> base_point;
  std::vector<Vec<double>> vectors;
  std::vector<FrameRole> roles;

  int size() const { return static_cast<int>(vectors.size()); }

  std::vector<Vec<double>> with_roles(std::initializer_list<FrameRole> wanted) const {
    std::vector<Vec<double>> out;
    for (int a = 0; a < size(); ++a)
      for (FrameRole r : wanted)
        if (roles[a] == r) out.push_back(vectors[a]);
    return out;
  }
  std::vector<Vec<double>> horizontal() const { return with_roles({FrameRole::Basic, FrameRole::PhiBasic}); }
  std::vector<Vec<double>> vertical() const {
    return with_roles({FrameRole::Vertical, FrameRole::PhiVertical, FrameRole::Reeb});
  }
};

namespace detail {

inline double gnorm(const Mat<double>& g, const Vec<double>& v) { return std::sqrt(std::max(inner(g, v, v), 0.0)); }

inline Vec<double> project_out(const Mat<double>& g, Vec<double> v, const std::vector<Vec<double>>& ortho) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& e : ortho) v = v - inner(g, v, e) * e;
  return v;
}

/// Throws DegenerateInput if the vectors are not linearly independent.
inline void require_independent(const Mat<double>& g, const std::vector<Vec<double>>& vs, const char* what) {
  try {
    (void)gram_schmidt(g, vs, 1e-12);
  } catch (const GeometryError&) {
    throw GeometryError(ErrorKind::DegenerateInput, std::string(what) + " basis is rank deficient");
  }
}

/// Extend `chosen` with unit pairs (e, J e) built from `inputs`, skipping inputs already spanned.
inline void adjoin_pairs(const Mat<double>& g, const Mat<double>& J, const std::vector<Vec<double>>& inputs,
                         std::vector<Vec<double>>& chosen, std::vector<Vec<double>>& out) {
  for (const auto& in : inputs) {
    const double n0 = gnorm(g, in);
    Vec<double> v = project_out(g, in, chosen);
    const double nv = gnorm(g, v);
    if (nv <= 1e-8 * n0) continue;
    v = (1.0 / nv) * v;
    Vec<double> jv = matvec(J, v);
    chosen.push_back(v);
    chosen.push_back(jv);
    out.push_back(v);
    out.push_back(jv);
  }
}

}  // namespace detail

/**
 * Build a phi-orthonormal frame {X_i, phi X_i; V_j, phi V_j; xi} at p from a
 * vertical basis (whose span contains xi) and a complementary horizontal basis.
 * Each pair is made by normalizing the projected input X and adjoining phi X,
 * which is unit and orthogonal to X whenever X is orthogonal to xi.
 */
inline OrthoFrame phi_adapted_frame(const AlmostContactMetricStructure& s, std::span<const double> p,
                                    const std::vector<Vec<double>>& vertical_basis,
                                    const std::vector<Vec<double>>& horizontal_basis) {
  const ContactAt c = contact_at(s, p);
  const int nv = static_cast<int>(vertical_basis.size());
  const int nh = static_cast<int>(horizontal_basis.size());
  if (nh % 2 != 0 || nv % 2 != 1)
    throw GeometryError(ErrorKind::OddDimensionMismatch, "subspace dimensions must be (even, even + 1)");
  if (nh + nv != s.patch.dim)
    throw GeometryError(ErrorKind::DimensionMismatch, "bases do not span the tangent space");
  detail::require_independent(c.g, vertical_basis, "vertical");
  detail::require_independent(c.g, horizontal_basis, "horizontal");

  const double xi_norm = detail::gnorm(c.g, c.xi);
  const Vec<double> xi = (1.0 / xi_norm) * c.xi;
  {
    const auto vortho = gram_schmidt(c.g, vertical_basis);
    const Vec<double> rest = detail::project_out(c.g, xi, vortho);
    if (detail::gnorm(c.g, rest) > 1e-9)
      throw GeometryError(ErrorKind::DegenerateInput, "xi is not in the span of the vertical basis");
  }

  std::vector<Vec<double>> chosen{xi};
  std::vector<Vec<double>> horiz, vert;
  detail::adjoin_pairs(c.g, c.phi, horizontal_basis, chosen, horiz);
  detail::adjoin_pairs(c.g, c.phi, vertical_basis, chosen, vert);
  if (static_cast<int>(horiz.size()) != nh || static_cast<int>(vert.size()) != nv - 1)
    throw GeometryError(ErrorKind::DegenerateInput, "bases are not phi-invariant complementary subspaces");

  OrthoFrame f;
  f.base_point.assign(p.begin(), p.end());
  for (size_t a = 0; a < horiz.size(); ++a) {
    f.vectors.push_back(horiz[a]);
    f.roles.push_back(a % 2 == 0 ? FrameRole::Basic : FrameRole::PhiBasic);
  }
  for (size_t a = 0; a < vert.size(); ++a) {
    f.vectors.push_back(vert[a]);
    f.roles.push_back(a % 2 == 0 ? FrameRole::Vertical : FrameRole::PhiVertical);
  }
  f.vectors.push_back(xi);
  f.roles.push_back(FrameRole::Reeb);
  return f;
}

/**
 * Frame for a bare almost contact structure: xi as the only vertical vector,
 * and the g-complement of xi built from coordinate directions starting at
 * index `start` (varying `start` yields a different adapted frame).
 */
inline OrthoFrame phi_adapted_frame(const AlmostContactMetricStructure& s, std::span<const double> p, int start = 0) {
  const ContactAt c = contact_at(s, p);
  const int n = s.patch.dim;
  const Vec<double> xi = (1.0 / detail::gnorm(c.g, c.xi)) * c.xi;
  std::vector<Vec<double>> complement;
  std::vector<Vec<double>> ortho{xi};
  for (int k = 0; k < n && static_cast<int>(complement.size()) < n - 1; ++k) {
    const int i = (start + k) % n;
    Vec<double> e = detail::project_out(c.g, unit_vector(n, i), ortho);
    const double ne = detail::gnorm(c.g, e);
    if (ne <= 1e-6) continue;
    e = (1.0 / ne) * e;
    complement.push_back(e);
    ortho.push_back(e);
  }
  return phi_adapted_frame(s, p, {c.xi}, complement);
}

/// Orthonormal {E_i, J E_i} frame on an almost Hermitian chart.
inline OrthoFrame j_adapted_frame(const AlmostHermitianStructure& s, std::span<const double> p, int start = 0) {
  require_in_domain(s.patch, p);
  const Vec<double> x(p.begin(), p.end());
  const Mat<double> g = s.patch.metric(x);
  const Mat<double> J = s.J(x);
  const int n = s.patch.dim;
  std::vector<Vec<double>> inputs;
  for (int k = 0; k < n; ++k) inputs.push_back(unit_vector(n, (start + k) % n));
  std::vector<Vec<double>> chosen, out;
  detail::adjoin_pairs(g, J, inputs, chosen, out);
  if (static_cast<int>(out.size()) != n) throw GeometryError(ErrorKind::DegenerateInput, "J-adapted frame incomplete");
  OrthoFrame f;
  f.base_point.assign(p.begin(), p.end());
  f.vectors = out;
  f.roles.assign(out.size(), FrameRole::Plain);
  return f;
}

}  // namespace ccsub
