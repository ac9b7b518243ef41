#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "ccsub/error.hpp"
#include "ccsub/field.hpp"
#include "ccsub/linalg.hpp"

namespace ccsub {

/// Closed coordinate interval box.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  int dim() const { return static_cast<int>(lo.size()); }

  bool contains(std::span<const double> p, double slack = 1e-12) const {
    if (static_cast<int>(p.size()) != dim()) return false;
    for (int i = 0; i < dim(); ++i) {
      const double pad = slack * (1.0 + std::abs(hi[i] - lo[i]));
      if (!(p[i] >= lo[i] - pad && p[i] <= hi[i] + pad)) return false;
    }
    return true;
  }

  std::vector<double> center() const {
    std::vector<double> c(lo.size());
    for (int i = 0; i < dim(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
    return c;
  }
};

/// A coordinate domain with a Riemannian metric field.
struct ChartPatch {
  std::string name;
  int dim = 0;
  Box domain;
  SymmetricField metric;
};

inline void require_in_domain(const ChartPatch& patch, std::span<const double> p) {
  if (!patch.domain.contains(p)) throw GeometryError(ErrorKind::OutOfDomain, "point outside chart " + patch.name);
}

/// Metric matrix at p (symmetric, positive definite) or throws OutOfDomain / NotSPD.
inline Mat<double> eval_metric(const ChartPatch& patch, std::span<const double> p) {
  require_in_domain(patch, p);
  Vec<double> x(p.begin(), p.end());
  Mat<double> g = patch.metric(x);
  (void)cholesky(g);
  return g;
}

/// g(X, Y) at p.
inline double inner(const ChartPatch& patch, std::span<const double> p, const Vec<double>& X, const Vec<double>& Y) {
  require_in_domain(patch, p);
  return inner(patch.metric(Vec<double>(p.begin(), p.end())), X, Y);
}

/// Second-order jets of a field's components at p.
template <template <class> class Out>
Out<D2Scalar> d2_eval(const Field<Out>& field, std::span<const double> p) {
  return field(seed<D2Scalar>(p));
}

/// Same as above with a domain check.
template <template <class> class Out>
Out<D2Scalar> d2_eval(const ChartPatch& patch, const Field<Out>& field, std::span<const double> p) {
  require_in_domain(patch, p);
  return d2_eval(field, p);
}

}  // namespace ccsub
