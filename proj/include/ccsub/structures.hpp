#pragma once

#include <span>

#include "ccsub/chart.hpp"
#include "ccsub/field.hpp"

namespace ccsub {

/// (phi, xi, eta) on a chart carrying the metric g.
struct AlmostContactMetricStructure {
  ChartPatch patch;
  EndoField phi;
  VectorField xi;
  CovectorField eta;
};

/// Almost complex structure J compatible with the chart metric.
struct AlmostHermitianStructure {
  ChartPatch patch;
  EndoField J;
};

/// The structure tensors evaluated at one point as plain numbers.
struct ContactAt {
  Mat<double> g;
  Mat<double> phi;
  Vec<double> xi;
  Vec<double> eta;
};

inline ContactAt contact_at(const AlmostContactMetricStructure& s, std::span<const double> p) {
  require_in_domain(s.patch, p);
  const Vec<double> x(p.begin(), p.end());
  return {s.patch.metric(x), s.phi(x), s.xi(x), s.eta(x)};
}

/// Fundamental 2-form Phi(X, Y) = g(X, phi Y) as a component field.
inline TwoFormField fundamental_form_field(const AlmostContactMetricStructure& s) {
  return TwoFormField([metric = s.patch.metric, phi = s.phi](const auto& x) {
    using T = scalar_of<decltype(x)>;
    const Mat<T> g = metric(x);
    const Mat<T> f = phi(x);
    return matmul(g, f);
  });
}

/// Fundamental 2-form Omega(X, Y) = g'(X, J Y) as a component field.
inline TwoFormField fundamental_form_field(const AlmostHermitianStructure& s) {
  return TwoFormField([metric = s.patch.metric, J = s.J](const auto& x) {
    using T = scalar_of<decltype(x)>;
    const Mat<T> g = metric(x);
    const Mat<T> j = J(x);
    return matmul(g, j);
  });
}

}  // namespace ccsub
