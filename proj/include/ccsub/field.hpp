#pragma once

#include <functional>
#include <span>
#include <utility>

#include "ccsub/jet.hpp"
#include "ccsub/linalg.hpp"

namespace ccsub {

template <class T>
using Scalar = T;

/// Scalar type of a coordinate vector argument inside a generic field lambda.
template <class V>
using scalar_of = typename std::decay_t<V>::value_type;

/**
 * A smooth map of chart coordinates, evaluable on plain doubles and on first
 * and second order jets. Constructed from a generic callable; the callable is
 * instantiated once per scalar type, so every field is a pure function of its
 * coordinates.
 *
 * Out is the output container template: Scalar, Vec or Mat.
 */
template <template <class> class Out>
class Field {
 public:
  Field() = default;

  template <class F>
    requires(!std::is_same_v<std::decay_t<F>, Field>)
  explicit Field(F f) : f0_(f), f1_(f), f2_(std::move(f)) {}

  explicit operator bool() const { return static_cast<bool>(f0_); }

  template <class T>
  Out<T> operator()(const Vec<T>& x) const {
    if constexpr (std::is_same_v<T, double>) {
      return f0_(x);
    } else if constexpr (std::is_same_v<T, Jet<1>>) {
      return f1_(x);
    } else {
      static_assert(std::is_same_v<T, Jet<2>>, "unsupported scalar type");
      return f2_(x);
    }
  }

 private:
  std::function<Out<double>(const Vec<double>&)> f0_;
  std::function<Out<Jet<1>>(const Vec<Jet<1>>&)> f1_;
  std::function<Out<Jet<2>>(const Vec<Jet<2>>&)> f2_;
};

using ScalarField = Field<Scalar>;
/// Vector field components X^i.
using VectorField = Field<Vec>;
/// One-form components w_i.
using CovectorField = Field<Vec>;
/// (1,1)-tensor components E^i_j (row i, column j), acting on column vectors.
using EndoField = Field<Mat>;
/// Antisymmetric (0,2)-tensor components w_ij.
using TwoFormField = Field<Mat>;
/// Symmetric (0,2)-tensor components, used for metrics.
using SymmetricField = Field<Mat>;
/// Smooth map between charts.
using MapField = Field<Vec>;

/// Seed chart coordinates as independent variables of scalar type T.
template <class T>
Vec<T> seed(std::span<const double> p) {
  const int n = static_cast<int>(p.size());
  Vec<T> x;
  x.reserve(p.size());
  for (int i = 0; i < n; ++i) {
    if constexpr (std::is_same_v<T, double>) {
      x.push_back(p[i]);
    } else {
      x.push_back(T::variable(p[i], i, n));
    }
  }
  return x;
}

/// Constant extension of a pointwise vector at scalar type T.
template <class T>
Vec<T> constant_vec(const Vec<double>& v) {
  Vec<T> r;
  r.reserve(v.size());
  for (double x : v) r.push_back(T(x));
  return r;
}

template <class T>
Mat<T> constant_mat(const Mat<double>& m) {
  Mat<T> r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = T(m(i, j));
  return r;
}

/// Field with the same components everywhere.
inline VectorField constant_field(Vec<double> v) {
  return VectorField([v](const auto& x) { return constant_vec<scalar_of<decltype(x)>>(v); });
}

inline VectorField coordinate_field(int dim, int i) { return constant_field(unit_vector(dim, i)); }

}  // namespace ccsub
