#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <concepts>
#include <type_traits>

namespace ccsub {

/// Upper bound on the number of chart coordinates a jet can carry derivatives for.
inline constexpr int kMaxVars = 8;

/**
 * Truncated multivariate Taylor jet of order 1 or 2 at a fixed base point.
 *
 * A Jet<2> carries the value, the gradient and the (symmetric) Hessian of a
 * quantity with respect to the active chart coordinates; Jet<1> drops the
 * Hessian. Arithmetic follows the chain rule exactly, so derivatives carry no
 * truncation error. `partial(u, i)` maps a Jet<K> to the Jet<K-1> of the i-th
 * partial derivative, which is what lets covariant derivatives of composite
 * fields (projections, lifts, structure tensors) be taken without any step size.
 */
template <int Order>
class Jet {
  static_assert(Order == 1 || Order == 2, "only first and second order jets are supported");

 public:
  static constexpr int order = Order;

  constexpr Jet() = default;
  // NOLINTNEXTLINE(google-explicit-constructor): constants mix freely with jets
  constexpr Jet(double value) : v_(value) {}

  static Jet variable(double value, int index, int nvars) {
    assert(index >= 0 && index < nvars && nvars <= kMaxVars);
    Jet j(value);
    j.n_ = nvars;
    j.g_[index] = 1.0;
    return j;
  }

  double value() const { return v_; }
  int nvars() const { return n_; }
  double grad(int i) const { return g_[i]; }
  double hess(int i, int j) const {
    static_assert(Order == 2, "hessian requires a second order jet");
    return h_[i * kMaxVars + j];
  }

  double& raw_value() { return v_; }
  double& raw_grad(int i) { return g_[i]; }
  double& raw_hess(int i, int j) {
    static_assert(Order == 2, "hessian requires a second order jet");
    return h_[i * kMaxVars + j];
  }
  void set_nvars(int n) { n_ = n; }

  /// Apply a scalar function given its value and first two derivatives at value().
  Jet chain(double f0, double f1, double f2) const {
    Jet r(f0);
    r.n_ = n_;
    for (int i = 0; i < n_; ++i) r.g_[i] = f1 * g_[i];
    if constexpr (Order == 2) {
      for (int i = 0; i < n_; ++i) {
        for (int j = i; j < n_; ++j) {
          double hij = f1 * h_[i * kMaxVars + j] + f2 * g_[i] * g_[j];
          r.h_[i * kMaxVars + j] = hij;
          r.h_[j * kMaxVars + i] = hij;
        }
      }
    }
    (void)f2;
    return r;
  }

  Jet& operator+=(const Jet& o) {
    v_ += o.v_;
    n_ = n_ > o.n_ ? n_ : o.n_;
    for (int i = 0; i < n_; ++i) g_[i] += o.g_[i];
    if constexpr (Order == 2) {
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) h_[i * kMaxVars + j] += o.h_[i * kMaxVars + j];
    }
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v_ -= o.v_;
    n_ = n_ > o.n_ ? n_ : o.n_;
    for (int i = 0; i < n_; ++i) g_[i] -= o.g_[i];
    if constexpr (Order == 2) {
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) h_[i * kMaxVars + j] -= o.h_[i * kMaxVars + j];
    }
    return *this;
  }
  Jet& operator*=(double s) {
    v_ *= s;
    for (int i = 0; i < n_; ++i) g_[i] *= s;
    if constexpr (Order == 2) {
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) h_[i * kMaxVars + j] *= s;
    }
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    *this = *this * o;
    return *this;
  }
  Jet& operator/=(const Jet& o) {
    *this = *this / o;
    return *this;
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r(a.v_ * b.v_);
    r.n_ = a.n_ > b.n_ ? a.n_ : b.n_;
    const int n = r.n_;
    for (int i = 0; i < n; ++i) r.g_[i] = a.v_ * b.g_[i] + b.v_ * a.g_[i];
    if constexpr (Order == 2) {
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          const int ij = i * kMaxVars + j;
          double hij = a.v_ * b.h_[ij] + b.v_ * a.h_[ij] + a.g_[i] * b.g_[j] + b.g_[i] * a.g_[j];
          r.h_[ij] = hij;
          r.h_[j * kMaxVars + i] = hij;
        }
      }
    }
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    const double inv = 1.0 / b.v_;
    return a * b.chain(inv, -inv * inv, 2.0 * inv * inv * inv);
  }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) { return a *= -1.0; }
  friend Jet operator+(Jet a, double s) { a.v_ += s; return a; }
  friend Jet operator+(double s, Jet a) { a.v_ += s; return a; }
  friend Jet operator-(Jet a, double s) { a.v_ -= s; return a; }
  friend Jet operator-(double s, Jet a) { a *= -1.0; a.v_ += s; return a; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a *= 1.0 / s; }
  friend Jet operator/(double s, const Jet& b) { return Jet(s) / b; }

  friend bool operator<(const Jet& a, const Jet& b) { return a.v_ < b.v_; }
  friend bool operator>(const Jet& a, const Jet& b) { return a.v_ > b.v_; }

 private:
  template <int K>
  friend Jet<K - 1> partial_jet(const Jet<K>& u, int i);

  double v_ = 0.0;
  int n_ = 0;
  std::array<double, kMaxVars> g_{};
  struct NoHessian {};
  [[no_unique_address]] std::conditional_t<Order == 2, std::array<double, kMaxVars * kMaxVars>, NoHessian> h_{};
};

using D1Scalar = Jet<1>;
using D2Scalar = Jet<2>;

template <class T>
struct is_jet : std::false_type {};
template <int K>
struct is_jet<Jet<K>> : std::true_type {};
template <class T>
inline constexpr bool is_jet_v = is_jet<T>::value;

/// The scalar type one derivative order below T.
/// Placeholder below order 0: a plain double carries no derivative.
struct NoDerivative {
  NoDerivative() = default;
  explicit NoDerivative(double) {}
};

template <class T>
struct lower;
template <>
struct lower<double> {
  using type = NoDerivative;
};
template <>
struct lower<Jet<1>> {
  using type = double;
};
template <>
struct lower<Jet<2>> {
  using type = Jet<1>;
};
template <class T>
using lower_t = typename lower<T>::type;

template <int K>
Jet<K - 1> partial_jet(const Jet<K>& u, int i) {
  Jet<K - 1> r(u.g_[i]);
  r.set_nvars(u.n_);
  for (int j = 0; j < u.n_; ++j) r.raw_grad(j) = u.h_[i * kMaxVars + j];
  return r;
}

/// Partial derivative along chart coordinate i, one order lower.
inline double partial(const Jet<1>& u, int i) { return u.grad(i); }
inline Jet<1> partial(const Jet<2>& u, int i) { return partial_jet(u, i); }

inline double value_of(double x) { return x; }
template <int K>
double value_of(const Jet<K>& x) {
  return x.value();
}

/// Drop the highest derivative order.
inline double truncate(const Jet<1>& u) { return u.value(); }
inline Jet<1> truncate(const Jet<2>& u) {
  Jet<1> r(u.value());
  r.set_nvars(u.nvars());
  for (int i = 0; i < u.nvars(); ++i) r.raw_grad(i) = u.grad(i);
  return r;
}

/// Convert a jet of order >= To down to order To (To = 0 means double).
template <class To, class From>
To truncate_to(const From& u) {
  if constexpr (std::is_same_v<To, From>) {
    return u;
  } else {
    return truncate_to<To>(truncate(u));
  }
}

// Elementary functions. The floating-point versions live here too so generic
// field code can call sin(x) unqualified for every scalar type; they are
// templates so the C library overloads still win outside this namespace.
template <std::floating_point F> F sin(F x) { return std::sin(x); }
template <std::floating_point F> F cos(F x) { return std::cos(x); }
template <std::floating_point F> F tan(F x) { return std::tan(x); }
template <std::floating_point F> F exp(F x) { return std::exp(x); }
template <std::floating_point F> F log(F x) { return std::log(x); }
template <std::floating_point F> F sqrt(F x) { return std::sqrt(x); }
template <std::floating_point F> F pow(F x, double p) { return std::pow(x, p); }

template <int K>
Jet<K> sin(const Jet<K>& u) {
  const double s = std::sin(u.value()), c = std::cos(u.value());
  return u.chain(s, c, -s);
}
template <int K>
Jet<K> cos(const Jet<K>& u) {
  const double s = std::sin(u.value()), c = std::cos(u.value());
  return u.chain(c, -s, -c);
}
template <int K>
Jet<K> tan(const Jet<K>& u) {
  const double t = std::tan(u.value());
  const double sec2 = 1.0 + t * t;
  return u.chain(t, sec2, 2.0 * t * sec2);
}
template <int K>
Jet<K> exp(const Jet<K>& u) {
  const double e = std::exp(u.value());
  return u.chain(e, e, e);
}
template <int K>
Jet<K> log(const Jet<K>& u) {
  const double x = u.value();
  return u.chain(std::log(x), 1.0 / x, -1.0 / (x * x));
}
template <int K>
Jet<K> sqrt(const Jet<K>& u) {
  const double r = std::sqrt(u.value());
  return u.chain(r, 0.5 / r, -0.25 / (r * u.value()));
}
template <int K>
Jet<K> pow(const Jet<K>& u, double p) {
  const double x = u.value();
  return u.chain(std::pow(x, p), p * std::pow(x, p - 1.0), p * (p - 1.0) * std::pow(x, p - 2.0));
}

}  // namespace ccsub
