#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ccsub/chart.hpp"
#include "ccsub/connection.hpp"
#include "ccsub/contact.hpp"
#include "ccsub/error.hpp"
#include "ccsub/sampling.hpp"
#include "ccsub/structures.hpp"
#include "ccsub/submersion.hpp"

namespace ccsub {

enum class BaseKind { FlatR2, RoundS2 };
enum class WarpKind { Quadratic, Exponential, Constant };
enum class OlszakKind { Exponential, Constant };

namespace detail {

inline constexpr double kHalfPi = std::numbers::pi / 2;

template <class T>
Mat<T> diag(std::initializer_list<T> d) {
  const int n = static_cast<int>(d.size());
  Mat<T> m(n, n);
  int i = 0;
  for (const T& v : d) {
    m(i, i) = v;
    ++i;
  }
  return m;
}

template <class T>
T warp_value(WarpKind kind, const T& x) {
  switch (kind) {
    case WarpKind::Quadratic:
      return 1.0 + x * x;
    case WarpKind::Exponential:
      return exp(x);
    case WarpKind::Constant:
      break;
  }
  return T(1.0);
}

template <class T>
T olszak_f(OlszakKind kind, const T& z) {
  return kind == OlszakKind::Exponential ? exp(2.0 * z) : T(1.0);
}

inline void verify_or_throw(bool ok, const std::string& what) {
  if (!ok) throw GeometryError(ErrorKind::ConstructionInvalid, what);
}

/// Metric SPD, structure axioms and submersion residuals at seeded points.
inline void verify_submersion(const SubmersionInstance& sub, int points = 100) {
  for (const auto& p : sample_points(sub.total.domain, points)) {
    (void)eval_metric(sub.total, p);
    const Vec<double> pb = project_to_base(sub, p);
    verify_or_throw(sub.base.domain.contains(pb), sub.name + ": projection leaves the base chart");
    (void)eval_metric(sub.base, pb);
    if (sub.contact) verify_or_throw(contact_axioms(*sub.contact, p).max() <= 1e-10, sub.name + ": contact axioms");
    if (sub.hermitian) verify_or_throw(hermitian_axioms(*sub.hermitian, pb) <= 1e-10, sub.name + ": hermitian axioms");
    const auto r = submersion_axioms(sub, p);
    verify_or_throw(r.vertical_kernel <= 1e-10, sub.name + ": vertical frame not in ker d pi");
    verify_or_throw(r.isometry <= 1e-9, sub.name + ": d pi is not isometric on the horizontal space");
    verify_or_throw(r.holomorphy <= 1e-9, sub.name + ": J d pi != d pi phi");
  }
}

/// Flat R2 or unit round S2 with a compatible J, as a chart patch plus J.
inline AlmostHermitianStructure kahler_surface(BaseKind kind) {
  AlmostHermitianStructure h;
  if (kind == BaseKind::FlatR2) {
    h.patch = {"flat_R2", 2, {{-1.0, -1.0}, {1.0, 1.0}}, SymmetricField([](const auto& x) {
                 using T = scalar_of<decltype(x)>;
                 return diag<T>({T(1.0), T(1.0)});
               })};
    h.J = EndoField([](const auto& x) {
      using T = scalar_of<decltype(x)>;
      Mat<T> j(2, 2);
      j(1, 0) = T(1.0);
      j(0, 1) = T(-1.0);
      return j;
    });
  } else {
    h.patch = {"round_S2", 2, {{0.2, -std::numbers::pi}, {std::numbers::pi - 0.2, std::numbers::pi}},
               SymmetricField([](const auto& x) {
                 using T = scalar_of<decltype(x)>;
                 const T s = sin(x[0]);
                 return diag<T>({T(1.0), s * s});
               })};
    h.J = EndoField([](const auto& x) {
      using T = scalar_of<decltype(x)>;
      const T s = sin(x[0]);
      Mat<T> j(2, 2);
      j(1, 0) = 1.0 / s;
      j(0, 1) = -s;
      return j;
    });
  }
  return h;
}

}  // namespace detail

/**
 * Hopf fibration S3 -> S2(1/2). Total chart (theta, phi1, phi2) with the round
 * metric; base chart (vartheta, psi) with a quarter of the round metric, so
 * d pi is isometric on the horizontal space. The sign of phi is the one making
 * the structure Sasakian.
 */
inline SubmersionInstance build_hopf_s3() {
  using std::numbers::pi;
  SubmersionInstance sub;
  sub.name = "hopf_s3";
  sub.total = {"hopf_S3", 3, {{0.1, -pi, -pi}, {detail::kHalfPi - 0.1, pi, pi}}, SymmetricField([](const auto& x) {
                 using T = scalar_of<decltype(x)>;
                 const T c = cos(x[0]), s = sin(x[0]);
                 return detail::diag<T>({T(1.0), c * c, s * s});
               })};
  AlmostContactMetricStructure s;
  s.patch = sub.total;
  s.phi = EndoField([](const auto& x) {
    using T = scalar_of<decltype(x)>;
    const T c = cos(x[0]), sn = sin(x[0]);
    Mat<T> f(3, 3);
    f(1, 0) = sn / c;
    f(2, 0) = -(c / sn);
    f(0, 1) = -(sn * c);
    f(0, 2) = sn * c;
    return f;
  });
  s.xi = VectorField([](const auto& x) {
    using T = scalar_of<decltype(x)>;
    return Vec<T>{T(0.0), T(1.0), T(1.0)};
  });
  s.eta = CovectorField([](const auto& x) {
    using T = scalar_of<decltype(x)>;
    const T c = cos(x[0]), sn = sin(x[0]);
    return Vec<T>{T(0.0), c * c, sn * sn};
  });
  sub.contact = s;

  sub.base = {"S2_half", 2, {{0.2, -2 * pi}, {pi - 0.2, 2 * pi}}, SymmetricField([](const auto& x) {
                using T = scalar_of<decltype(x)>;
                const T sn = sin(x[0]);
                return detail::diag<T>({T(0.25), 0.25 * sn * sn});
              })};
  AlmostHermitianStructure h;
  h.patch = sub.base;
  h.J = EndoField([](const auto& x) {
    using T = scalar_of<decltype(x)>;
    const T sn = sin(x[0]);
    Mat<T> j(2, 2);
    j(1, 0) = -(1.0 / sn);
    j(0, 1) = sn;
    return j;
  });
  sub.hermitian = h;
  sub.pi = MapField([](const auto& x) {
    using T = scalar_of<decltype(x)>;
    return Vec<T>{2.0 * x[0], x[2] - x[1]};
  });
  sub.vertical_frame = {s.xi};
  detail::verify_submersion(sub);
  return sub;
}

/// N x R -> N with xi = d/dt, eta = dt and phi = J on TN.
inline SubmersionInstance build_cosymplectic_product(BaseKind kind) {
  const AlmostHermitianStructure h = detail::kahler_surface(kind);
  SubmersionInstance sub;
  sub.name = kind == BaseKind::FlatR2 ? "product_flat_r2" : "product_round_s2";
  Box box = h.patch.domain;
  box.lo.push_back(-1.0);
  box.hi.push_back(1.0);
  sub.total = {h.patch.name + "_x_R", 3, box, SymmetricField([bm = h.patch.metric](const auto& x) {
                 using T = scalar_of<decltype(x)>;
                 const Mat<T> gb = bm(Vec<T>{x[0], x[1]});
                 Mat<T> g(3, 3);
                 for (int i = 0; i < 2; ++i)
                   for (int j = 0; j < 2; ++j) g(i, j) = gb(i, j);
                 g(2, 2) = T(1.0);
                 return g;
               })};
  AlmostContactMetricStructure s;
  s.patch = sub.total;
  s.phi = EndoField([J = h.J](const auto& x) {
    using T = scalar_of<decltype(x)>;
    const Mat<T> jb = J(Vec<T>{x[0], x[1]});
    Mat<T> f(3, 3);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) f(i, j) = jb(i, j);
    return f;
  });
  s.xi = coordinate_field(3, 2);
  s.eta = coordinate_field(3, 2);
  sub.contact = s;
  sub.base = h.patch;
  sub.hermitian = h;
  sub.pi = MapField([](const auto& x) {
    using T = scalar_of<decltype(x)>;
    return Vec<T>{x[0], x[1]};
  });
  sub.vertical_frame = {s.xi};
  detail::verify_submersion(sub);
  return sub;
}

/// R x_f R^k -> (R, dx^2) with g = dx^2 + f(x) (dy_1^2 + ... + dy_k^2).
inline SubmersionInstance build_warped(WarpKind kind, int fibre_dim = 1) {
  if (fibre_dim < 1 || fibre_dim > 3) throw GeometryError(ErrorKind::DimensionMismatch, "warped fibre dimension must be 1..3");
  static const char* names[] = {"quadratic", "exponential", "constant"};
  const int n = 1 + fibre_dim;
  SubmersionInstance sub;
  sub.name = std::string("warped_") + names[static_cast<int>(kind)] + (fibre_dim == 1 ? "" : "_dim" + std::to_string(fibre_dim));
  Box box{{-1.5}, {1.5}};
  for (int k = 0; k < fibre_dim; ++k) {
    box.lo.push_back(-1.0);
    box.hi.push_back(1.0);
  }
  sub.total = {sub.name, n, box, SymmetricField([kind, n](const auto& x) {
                 using T = scalar_of<decltype(x)>;
                 const T f = detail::warp_value(kind, x[0]);
                 Mat<T> g(n, n);
                 g(0, 0) = T(1.0);
                 for (int i = 1; i < n; ++i) g(i, i) = f;
                 return g;
               })};
  sub.base = {"line", 1, {{-1.5}, {1.5}}, SymmetricField([](const auto& x) {
                using T = scalar_of<decltype(x)>;
                return detail::diag<T>({T(1.0)});
              })};
  sub.pi = MapField([](const auto& x) {
    using T = scalar_of<decltype(x)>;
    return Vec<T>{x[0]};
  });
  for (int k = 1; k < n; ++k) sub.vertical_frame.push_back(coordinate_field(n, k));
  detail::verify_submersion(sub);
  return sub;
}

/// The warping function of build_warped as a scalar field on the total chart.
inline ScalarField warp_function(WarpKind kind) {
  return ScalarField([kind](const auto& x) { return detail::warp_value(kind, x[0]); });
}

namespace detail {

/**
 * Almost contact metric structure on coordinates (.., x, y, z) starting at
 * index k: g = f dx^2 + f^-1 dy^2 + dz^2, phi d_x = f d_y, phi d_y = -f^-1 d_x,
 * xi = d_z, eta = dz. The first k coordinates carry the Kahler factor `prefix`.
 */
inline AlmostContactMetricStructure olszak_structure(OlszakKind kind, ChartPatch patch, int k,
                                                     std::optional<AlmostHermitianStructure> prefix) {
  const int n = k + 3;
  patch.metric = SymmetricField([kind, k, n, prefix](const auto& x) {
    using T = scalar_of<decltype(x)>;
    Mat<T> g(n, n);
    if (prefix) {
      const Mat<T> gb = prefix->patch.metric(Vec<T>(x.begin(), x.begin() + k));
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) g(i, j) = gb(i, j);
    }
    const T f = olszak_f(kind, x[k + 2]);
    g(k, k) = f;
    g(k + 1, k + 1) = 1.0 / f;
    g(k + 2, k + 2) = T(1.0);
    return g;
  });
  AlmostContactMetricStructure s;
  s.patch = patch;
  s.phi = EndoField([kind, k, n, prefix](const auto& x) {
    using T = scalar_of<decltype(x)>;
    Mat<T> m(n, n);
    if (prefix) {
      const Mat<T> jb = prefix->J(Vec<T>(x.begin(), x.begin() + k));
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) m(i, j) = jb(i, j);
    }
    const T f = olszak_f(kind, x[k + 2]);
    m(k + 1, k) = f;
    m(k, k + 1) = -(1.0 / f);
    return m;
  });
  s.xi = coordinate_field(n, k + 2);
  s.eta = coordinate_field(n, k + 2);
  return s;
}

}  // namespace detail

/**
 * Almost cosymplectic R3 with Kahler leaves. Verifies d Phi = d eta = 0 and
 * the A* characterization of Kahler leaves at seeded points before returning.
 */
inline AlmostContactMetricStructure build_olszak_r3(OlszakKind kind) {
  ChartPatch patch{kind == OlszakKind::Exponential ? "olszak_exp" : "olszak_constant", 3,
                   {{-1.0, -1.0, -0.5}, {1.0, 1.0, 0.5}}, {}};
  AlmostContactMetricStructure s = detail::olszak_structure(kind, patch, 0, std::nullopt);
  const auto pts = sample_points(s.patch.domain, 100);
  for (const auto& p : pts) {
    (void)eval_metric(s.patch, p);
    detail::verify_or_throw(contact_axioms(s, p).max() <= 1e-10, s.patch.name + ": contact axioms");
  }
  const ClassResiduals c = classify(s, pts);
  detail::verify_or_throw(c.almost_cosymplectic <= 1e-8, s.patch.name + ": d Phi or d eta does not vanish");
  detail::verify_or_throw(check_a_star_identities(s, pts).e3 <= 1e-8, s.patch.name + ": leaves are not Kahler");
  return s;
}

/// (R2, J) x (Olszak R3) -> R2: a contact-complex submersion with 3-dimensional fibres.
inline SubmersionInstance build_olszak_fibred(OlszakKind kind) {
  const AlmostHermitianStructure h = detail::kahler_surface(BaseKind::FlatR2);
  SubmersionInstance sub;
  sub.name = kind == OlszakKind::Exponential ? "olszak_fibred" : "flat_fibred";
  ChartPatch patch{sub.name, 5, {{-1.0, -1.0, -1.0, -1.0, -0.5}, {1.0, 1.0, 1.0, 1.0, 0.5}}, {}};
  AlmostContactMetricStructure s = detail::olszak_structure(kind, patch, 2, h);
  sub.total = s.patch;
  sub.contact = s;
  sub.base = h.patch;
  sub.hermitian = h;
  sub.pi = MapField([](const auto& x) {
    using T = scalar_of<decltype(x)>;
    return Vec<T>{x[0], x[1]};
  });
  for (int k = 2; k < 5; ++k) sub.vertical_frame.push_back(coordinate_field(5, k));
  detail::verify_submersion(sub);
  return sub;
}

/// A catalog entry: a submersion or a bare almost contact metric structure.
struct Example {
  std::string name;
  std::map<std::string, double> parameters;
  std::variant<SubmersionInstance, AlmostContactMetricStructure> instance;
  std::optional<ScalarField> warp;  // warped products only

  bool is_submersion() const { return std::holds_alternative<SubmersionInstance>(instance); }
  const SubmersionInstance& submersion() const { return std::get<SubmersionInstance>(instance); }
  const AlmostContactMetricStructure* contact() const {
    if (is_submersion()) return submersion().contact ? &*submersion().contact : nullptr;
    return &std::get<AlmostContactMetricStructure>(instance);
  }
  const ChartPatch& total() const { return is_submersion() ? submersion().total : contact()->patch; }
};

struct ExampleSpec {
  std::string name;
  std::string description;
  std::map<std::string, double> parameters;
  std::function<Example()> build;
};

inline const std::vector<ExampleSpec>& example_specs() {
  static const std::vector<ExampleSpec> specs = [] {
    std::vector<ExampleSpec> v;
    auto sub = [&v](std::string name, std::string desc, std::map<std::string, double> params,
                    std::function<SubmersionInstance()> f, std::optional<WarpKind> warp = std::nullopt) {
      v.push_back({name, desc, params, [=] {
                     Example e{name, params, f(), std::nullopt};
                     if (warp) e.warp = warp_function(*warp);
                     return e;
                   }});
    };
    sub("hopf_s3", "Hopf fibration S3 -> S2(1/2), Sasakian total space", {{"n", 1}}, [] { return build_hopf_s3(); });
    sub("product_flat_r2", "cosymplectic product R2 x R -> R2", {{"base_curvature", 0}},
        [] { return build_cosymplectic_product(BaseKind::FlatR2); });
    sub("product_round_s2", "cosymplectic product S2 x R -> S2", {{"base_curvature", 1}},
        [] { return build_cosymplectic_product(BaseKind::RoundS2); });
    sub("warped_quadratic", "warped product R x_f R, f = 1 + x^2", {{"fibre_dim", 1}},
        [] { return build_warped(WarpKind::Quadratic); }, WarpKind::Quadratic);
    sub("warped_exponential", "warped product R x_f R, f = e^x", {{"fibre_dim", 1}},
        [] { return build_warped(WarpKind::Exponential); }, WarpKind::Exponential);
    sub("warped_constant", "warped product R x_f R, f = 1", {{"fibre_dim", 1}},
        [] { return build_warped(WarpKind::Constant); }, WarpKind::Constant);
    sub("warped_quadratic_plane", "warped product R x_f R2, f = 1 + x^2", {{"fibre_dim", 2}},
        [] { return build_warped(WarpKind::Quadratic, 2); }, WarpKind::Quadratic);
    sub("flat_fibred", "R2 x flat cosymplectic R3 -> R2", {{"olszak_rate", 0}},
        [] { return build_olszak_fibred(OlszakKind::Constant); });
    sub("olszak_fibred", "R2 x Olszak R3 (f = e^2z) -> R2", {{"olszak_rate", 2}},
        [] { return build_olszak_fibred(OlszakKind::Exponential); });
    auto st = [&v](std::string name, std::string desc, std::map<std::string, double> params, OlszakKind k) {
      v.push_back({name, desc, params, [=] { return Example{name, params, build_olszak_r3(k), std::nullopt}; }});
    };
    st("olszak_exp", "almost cosymplectic R3 with Kahler leaves, f = e^2z", {{"olszak_rate", 2}}, OlszakKind::Exponential);
    st("olszak_constant", "flat cosymplectic R3 (f = 1)", {{"olszak_rate", 0}}, OlszakKind::Constant);
    return v;
  }();
  return specs;
}

inline const ExampleSpec& find_example(const std::string& name) {
  for (const auto& s : example_specs())
    if (s.name == name) return s;
  throw GeometryError(ErrorKind::UnknownExample, "unknown example: " + name);
}

inline Example build_example(const std::string& name) { return find_example(name).build(); }

}  // namespace ccsub
