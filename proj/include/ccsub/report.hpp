#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ccsub/catalog.hpp"
#include "ccsub/contact.hpp"
#include "ccsub/error.hpp"
#include "ccsub/identities.hpp"
#include "ccsub/sampling.hpp"
#include "ccsub/submersion.hpp"

namespace ccsub {

using Points = std::vector<std::vector<double>>;

struct RunConfig {
  std::string example;
  std::vector<std::string> checks{"all"};
  int points = 100;
  std::uint64_t seed = kDefaultSeed;
  double tol = 1e-7;
  std::string format = "text";
};

struct Report {
  RunConfig config;
  std::vector<std::pair<std::string, std::string>> conventions;
  std::vector<IdentityCheck> checks;
  bool passed = true;
};

/// What a check needs from an example.
enum Needs : unsigned {
  kNone = 0,
  kSubmersion = 1u << 0,
  kContact = 1u << 1,
  kContactComplex = 1u << 2,
  kWarp = 1u << 3,
};

struct CheckSpec {
  std::string name;
  std::string description;
  unsigned needs = kNone;
  std::function<IdentityCheck(const Example&, const Points&, double)> run;
};

inline std::vector<std::pair<std::string, std::string>> convention_ledger() {
  return {
      {"curvature_sign",
       "R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z, R(X,Y,Z,W) = g(R(X,Y)Z,W); "
       "unit sphere gives R(X,Y,Y,X) = +1"},
      {"curvature_identities", "submersion curvature equations and Gray identities read R(X,Y,Z,W) as g(R(Z,W)Y,X)"},
      {"mean_curvature", "H = sum of h nabla_E E over a vertical orthonormal frame (unnormalized)"},
      {"codifferential", "delta Phi(X) = -sum_a (nabla_{e_a} Phi)(e_a, X) = sum_a g((nabla_{e_a} phi) e_a, X)"},
      {"exterior_derivative", "d eta(X,Y) = X eta(Y) - Y eta(X) - eta([X,Y]); N1 = [phi,phi] + d eta (x) xi"},
  };
}

namespace detail {

template <class F>
CheckSpec pointwise_sub(std::string name, std::string desc, unsigned needs, F f) {
  return {name, std::move(desc), needs | kSubmersion, [name, f](const Example& e, const Points& pts, double tol) {
            const SubmersionInstance& s = e.submersion();
            return check_over_points(name, pts, tol, [&](std::span<const double> p) { return f(s, p); });
          }};
}

template <class F>
CheckSpec pointwise_contact(std::string name, std::string desc, F f) {
  return {name, std::move(desc), kContact, [name, f](const Example& e, const Points& pts, double tol) {
            const AlmostContactMetricStructure& s = *e.contact();
            return check_over_points(name, pts, tol, [&](std::span<const double> p) { return f(s, p); });
          }};
}

inline Points base_points(const SubmersionInstance& s, const Points& pts) {
  Points out;
  for (const auto& p : pts) out.push_back(project_to_base(s, p));
  return out;
}

/// N1..N4 on pairs of coordinate fields.
inline NTensors worst_n_tensors(const AlmostContactMetricStructure& s, std::span<const double> p, Vec<double>& norms) {
  const int n = s.patch.dim;
  const Mat<double> g = eval_metric(s.patch, p);
  norms.assign(4, 0.0);
  NTensors last;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      last = n_tensors(s, p, coordinate_field(n, i), coordinate_field(n, j));
      norms[0] = std::max(norms[0], gnorm_or_zero(g, last.n1));
      norms[1] = std::max(norms[1], std::abs(last.n2));
      norms[2] = std::max(norms[2], gnorm_or_zero(g, last.n3));
      norms[3] = std::max(norms[3], std::abs(last.n4));
    }
  return last;
}

inline double n_norm(const AlmostContactMetricStructure& s, std::span<const double> p, int which) {
  Vec<double> norms;
  (void)worst_n_tensors(s, p, norms);
  return norms[static_cast<size_t>(which)];
}

inline OrthoFrame adapted_frame(const Example& e, std::span<const double> p, int start) {
  if (e.is_submersion() && e.submersion().contact_complex()) return submersion_frame(e.submersion(), p, start);
  return phi_adapted_frame(*e.contact(), p, start);
}

}  // namespace detail

inline const std::vector<CheckSpec>& check_specs() {
  static const std::vector<CheckSpec> specs = [] {
    using namespace detail;
    std::vector<CheckSpec> v;
    auto total_pointwise = [&v](std::string name, std::string desc, double (*f)(const ChartPatch&, std::span<const double>)) {
      v.push_back({name, std::move(desc), kNone, [name, f](const Example& e, const Points& pts, double tol) {
                     return check_over_points(name, pts, tol, [&](std::span<const double> p) { return f(e.total(), p); });
                   }});
    };
    total_pointwise("torsion_free", "nabla_X Y - nabla_Y X - [X,Y]", torsion_residual);
    total_pointwise("metric_compat", "X g(Y,Z) - g(nabla_X Y, Z) - g(Y, nabla_X Z)", metric_compat_residual);
    total_pointwise("riemann_symmetries", "antisymmetries, pair symmetry and first Bianchi identity",
                    riemann_symmetry_residual);

    v.push_back({"structure_axioms", "almost contact (and base almost Hermitian) axioms", kContact,
                 [](const Example& e, const Points& pts, double tol) {
                   return check_over_points("structure_axioms", pts, tol, [&](std::span<const double> p) {
                     double r = contact_axioms(*e.contact(), p).max();
                     if (e.is_submersion() && e.submersion().hermitian)
                       r = std::max(r, hermitian_axioms(*e.submersion().hermitian, project_to_base(e.submersion(), p)));
                     return r;
                   });
                 }});
    v.push_back({"frame_independence", "delta Phi over two independently built adapted frames", kContact,
                 [](const Example& e, const Points& pts, double tol) {
                   return check_over_points("frame_independence", pts, tol, [&](std::span<const double> p) {
                     return frame_independence_residual(*e.contact(), p, adapted_frame(e, p, 0), adapted_frame(e, p, 1));
                   });
                 }});
    v.push_back(pointwise_sub("submersion_axioms", "vertical frame in ker d pi, isometry on H, J d pi = d pi phi", kNone,
                              [](const SubmersionInstance& s, std::span<const double> p) {
                                const auto r = submersion_axioms(s, p);
                                return std::max({r.vertical_kernel, r.isometry, r.holomorphy});
                              }));
    v.push_back(pointwise_sub("phi_invariance", "xi vertical, H and V phi-invariant", kContactComplex,
                              phi_invariance_residual));
    v.push_back(pointwise_sub("oneill_T_symmetry", "T_U W - T_W U on vertical pairs", kNone, oneill_T_symmetry_residual));
    v.push_back(pointwise_sub("oneill_A_symmetry", "A_X Y + A_Y X and A_X Y - v[X,Y]/2 on basic fields", kNone,
                              oneill_A_symmetry_residual));
    v.push_back(pointwise_sub("basic_connection", "d pi (h nabla_X Y) - nabla'_X' Y' on basic fields", kNone,
                              basic_connection_residual));
    v.push_back(pointwise_sub("totally_geodesic", "max |T| over frame pairs", kNone,
                              [](const SubmersionInstance& s, std::span<const double> p) {
                                const auto L = submersion_local<Jet<1>>(s, p);
                                const SplitBasis b = split_basis(s, p);
                                std::vector<Vec<double>> all = b.vertical;
                                all.insert(all.end(), b.horizontal.begin(), b.horizontal.end());
                                double r = 0.0;
                                for (const auto& E : all)
                                  for (const auto& F : all)
                                    r = std::max(r, gnorm_or_zero(L.lo.m.g, oneill_T_jet(L, constant_vec<Jet<1>>(E),
                                                                                         constant_vec<Jet<1>>(F))));
                                return r;
                              }));
    v.push_back(pointwise_sub("pullback_omega", "Phi(X,Y) - Omega(d pi X, d pi Y) with X horizontal", kContactComplex,
                              pullback_omega_residual));
    v.push_back(pointwise_sub("basic_phi", "d pi h (nabla_X phi) Y - (nabla'_X' J) Y'", kContactComplex,
                              basic_phi_residual));
    v.push_back(pointwise_sub("b_vertical_zero", "B(V, E) for vertical V", kContactComplex, b_vertical_zero_residual));
    v.push_back(pointwise_sub("b_symmetry", "B(X,Y) - B(Y,X) and B(X,Y) - A_X phi Y + A_phiX Y", kContactComplex,
                              b_symmetry_residual));
    v.push_back(pointwise_sub("b_j_invariance", "B(phi X, phi Y) - B(X,Y)", kContactComplex, b_j_invariance_residual));
    v.push_back(pointwise_sub("b_type", "B(H,H) in V, B(H,V) in H", kContactComplex, b_type_residual));
    v.push_back(pointwise_sub("b_phi_xi", "B(phi X, xi) - h nabla_X xi", kContactComplex, b_phi_xi_residual));
    v.push_back(pointwise_sub("b_inner_product", "g(B(X,Y),V) - g(nabla_V phi Y + phi nabla_V Y, X) - 2V g(phi X,Y)",
                              kContactComplex, b_inner_product_residual));
    v.push_back(pointwise_sub("base_coclosed", "delta' Omega on the base", kContactComplex,
                              [](const SubmersionInstance& s, std::span<const double> p) {
                                const Vec<double> pb = project_to_base(s, p);
                                double r = 0.0;
                                for (int a = 0; a < s.base.dim; ++a)
                                  r = std::max(r, std::abs(base_codiff(s, pb, unit_vector(s.base.dim, a))));
                                return r;
                              }));
    auto sub_check = [&v](std::string name, std::string desc, unsigned needs,
                          IdentityCheck (*f)(const SubmersionInstance&, const Points&, double)) {
      v.push_back({name, std::move(desc), needs | kSubmersion,
                   [f](const Example& e, const Points& pts, double tol) { return f(e.submersion(), pts, tol); }});
    };
    sub_check("structure_equation", "delta Phi = delta' Omega + fibre delta + g(H, phi X) + g(Tr B^h, V)/2",
              kContactComplex, structure_equation_check);
    sub_check("codif3", "delta Phi(X) = g(H, phi X) + delta' Omega(X') for horizontal X", kContactComplex, codif3_check);
    sub_check("codif4", "delta Phi(V) = fibre delta(V) + g(Tr B^h, V)/2 for vertical V", kContactComplex, codif4_check);
    sub_check("horizontal_integrability", "2 |A_X Y| = |v[X,Y]| on H", kNone, horizontal_integrability_check);
    sub_check("kahler_base", "A_X xi = 0 iff the base is Kahler (almost cosymplectic total space)", kContactComplex,
              kahler_base_criterion_check);
    v.push_back({"curvature_vertical", "R(U,V,F,W) = R^ + g(T_U W, T_V F) - g(T_V W, T_U F)", kSubmersion,
                 [](const Example& e, const Points& pts, double tol) {
                   return curvature_submersion_check(e.submersion(), pts, CurvatureSide::Vertical, tol);
                 }});
    v.push_back({"curvature_horizontal", "R(X,Y,Z,H) = R* - 2g(A_X Y, A_Z H) + g(A_Y Z, A_X H) - g(A_X Z, A_Y H)",
                 kSubmersion, [](const Example& e, const Points& pts, double tol) {
                   return curvature_submersion_check(e.submersion(), pts, CurvatureSide::Horizontal, tol);
                 }});
    v.push_back({"warped_T", "T_U V + g(U,V) grad f / 2f", kSubmersion | kWarp,
                 [](const Example& e, const Points& pts, double tol) {
                   return warped_T_check(e.submersion(), *e.warp, pts, tol);
                 }});
    v.push_back(pointwise_sub("warped_umbilical", "T_U V - g(U,V) H / dim V", kWarp,
                              [](const SubmersionInstance& s, std::span<const double> p) {
                                const auto L = submersion_local<Jet<1>>(s, p);
                                const Vec<double> H = mean_curvature(s, p);
                                const double k = static_cast<double>(L.lo.vbasis.size());
                                double r = 0.0;
                                for (const auto& U : L.lo.vbasis)
                                  for (const auto& W : L.lo.vbasis) {
                                    const Vec<double> T =
                                        oneill_T_jet(L, constant_vec<Jet<1>>(U), constant_vec<Jet<1>>(W));
                                    r = std::max(r, gnorm_or_zero(L.lo.m.g, T - (inner(L.lo.m.g, U, W) / k) * H));
                                  }
                                return r;
                              }));
    for (GrayKind k : {GrayKind::K1, GrayKind::K2, GrayKind::K3}) {
      const std::string base_name = std::string("gray_") + to_string(k);
      v.push_back({base_name, std::string("Gray condition ") + to_string(k) + " on the base", kSubmersion | kContactComplex,
                   [k](const Example& e, const Points& pts, double tol) {
                     return gray_check(*e.submersion().hermitian, k, base_points(e.submersion(), pts), tol);
                   }});
      v.push_back({base_name + "phi", std::string("Gray condition ") + to_string(k) + "phi on the total space", kContact,
                   [k](const Example& e, const Points& pts, double tol) { return gray_check(*e.contact(), k, pts, tol); }});
    }
    v.push_back(pointwise_contact("almost_cosymplectic", "d Phi and d eta",
                                  [](const AlmostContactMetricStructure& s, std::span<const double> p) {
                                    return classify_at(s, p).almost_cosymplectic;
                                  }));
    v.push_back(pointwise_contact("cosymplectic", "nabla phi", [](const AlmostContactMetricStructure& s,
                                                                  std::span<const double> p) {
      return classify_at(s, p).cosymplectic;
    }));
    v.push_back(pointwise_contact("sasakian", "(nabla_X phi) Y - g(X,Y) xi + eta(Y) X",
                                  [](const AlmostContactMetricStructure& s, std::span<const double> p) {
                                    return classify_at(s, p).sasakian;
                                  }));
    v.push_back(pointwise_contact("a_star_e1", "g(A*X, Y) - g(X, A*Y)",
                                  [](const AlmostContactMetricStructure& s, std::span<const double> p) {
                                    return a_star_residuals_at(s, p).e1;
                                  }));
    v.push_back(pointwise_contact("a_star_e2", "A* phi + phi A*, A* xi, eta o A*",
                                  [](const AlmostContactMetricStructure& s, std::span<const double> p) {
                                    return a_star_residuals_at(s, p).e2;
                                  }));
    v.push_back(pointwise_contact("a_star_e3", "(nabla_X phi) Y + g(phi A* X, Y) xi - eta(Y) phi A* X",
                                  [](const AlmostContactMetricStructure& s, std::span<const double> p) {
                                    return a_star_residuals_at(s, p).e3;
                                  }));
    const char* n_names[] = {"n1_zero", "n2_zero", "n3_zero", "n4_zero"};
    for (int i = 0; i < 4; ++i)
      v.push_back(pointwise_contact(n_names[i], std::string("N") + std::to_string(i + 1) + " on coordinate fields",
                                    [i](const AlmostContactMetricStructure& s, std::span<const double> p) {
                                      return n_norm(s, p, i);
                                    }));
    v.push_back(pointwise_contact("n3_iff_cosymplectic", "N3 vanishes exactly when nabla phi does",
                                  [](const AlmostContactMetricStructure& s, std::span<const double> p) {
                                    return equivalence_residual(n_norm(s, p, 2), classify_at(s, p).cosymplectic);
                                  }));
    v.push_back({"harmonic", "d Phi and delta Phi", kContact, [](const Example& e, const Points& pts, double tol) {
                   return check_over_points("harmonic", pts, tol, [&](std::span<const double> p) {
                     const OrthoFrame f = adapted_frame(e, p, 0);
                     const AlmostContactMetricStructure& s = *e.contact();
                     const TwoFormField Phi = fundamental_form_field(s);
                     double r = 0.0;
                     for (int a = 0; a < f.size(); ++a) {
                       r = std::max(r, std::abs(codiff_2form(s, p, f, f.vectors[a])));
                       for (int b = a + 1; b < f.size(); ++b)
                         for (int c = b + 1; c < f.size(); ++c)
                           r = std::max(r, std::abs(ext_deriv_2form(Phi, p, f.vectors[a], f.vectors[b], f.vectors[c])));
                     }
                     return r;
                   });
                 }});
    return v;
  }();
  return specs;
}

inline const CheckSpec& find_check(const std::string& name) {
  for (const auto& c : check_specs())
    if (c.name == name) return c;
  throw GeometryError(ErrorKind::UnknownCheck, "unknown check: " + name);
}

/// The checks run by "all" for an example: those whose hypotheses hold on it.
inline std::vector<std::string> applicable_checks(const std::string& example) {
  const std::vector<std::string> substrate = {"torsion_free", "metric_compat", "riemann_symmetries"};
  const std::vector<std::string> contact = {"structure_axioms", "frame_independence"};
  const std::vector<std::string> submersion = {"submersion_axioms", "oneill_T_symmetry", "oneill_A_symmetry",
                                               "basic_connection", "curvature_vertical", "curvature_horizontal"};
  const std::vector<std::string> contact_complex = {
      "phi_invariance", "pullback_omega", "basic_phi",          "b_vertical_zero", "b_symmetry", "b_j_invariance",
      "b_type",         "b_phi_xi",       "b_inner_product",    "base_coclosed",   "structure_equation",
      "codif3",         "codif4",         "gray_K1",            "gray_K2",         "gray_K3",    "totally_geodesic"};
  const std::vector<std::string> kahler_leaves = {"almost_cosymplectic", "a_star_e1", "a_star_e2", "a_star_e3",
                                                  "n2_zero", "n4_zero", "n3_iff_cosymplectic", "harmonic"};
  const std::vector<std::string> cosymplectic = {"cosymplectic", "n1_zero", "n3_zero",
                                                 "gray_K1phi", "gray_K2phi", "gray_K3phi"};

  std::vector<std::string> out = substrate;
  auto add = [&out](const std::vector<std::string>& xs) { out.insert(out.end(), xs.begin(), xs.end()); };
  (void)find_example(example);
  if (example == "hopf_s3") {
    add(contact), add(submersion), add(contact_complex);
    add({"sasakian", "n1_zero", "n2_zero", "n3_zero", "n4_zero"});
  } else if (example == "product_flat_r2" || example == "product_round_s2" || example == "flat_fibred") {
    add(contact), add(submersion), add(contact_complex), add({"horizontal_integrability", "kahler_base"});
    add(kahler_leaves), add(cosymplectic);
  } else if (example == "olszak_fibred") {
    add(contact), add(submersion), add(contact_complex), add({"horizontal_integrability", "kahler_base"});
    add(kahler_leaves);
  } else if (example.rfind("warped_", 0) == 0) {
    add(submersion), add({"horizontal_integrability", "warped_T", "warped_umbilical"});
    if (example == "warped_constant") add({"totally_geodesic"});
  } else if (example == "olszak_exp") {
    add(contact), add(kahler_leaves);
  } else if (example == "olszak_constant") {
    add(contact), add(kahler_leaves), add(cosymplectic);
  }
  return out;
}

inline bool satisfies(const Example& e, unsigned needs) {
  if ((needs & kSubmersion) && !e.is_submersion()) return false;
  if ((needs & kContact) && e.contact() == nullptr) return false;
  if ((needs & kContactComplex) && !(e.is_submersion() && e.submersion().contact_complex())) return false;
  if ((needs & kWarp) && !e.warp) return false;
  return true;
}

/// Check names selected by a config, validated before any computation.
inline std::vector<std::string> resolve_checks(const RunConfig& cfg) {
  (void)find_example(cfg.example);
  std::vector<std::string> names;
  for (const auto& c : cfg.checks) {
    if (c == "all") {
      for (auto& n : applicable_checks(cfg.example))
        if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
    } else {
      (void)find_check(c);
      if (std::find(names.begin(), names.end(), c) == names.end()) names.push_back(c);
    }
  }
  return names;
}

/**
 * Runs the selected checks at seeded points of the example's total chart.
 * Residual failures are data; configuration problems (unknown names, a check
 * whose structure the example lacks, a failed theorem hypothesis) throw.
 */
inline Report run(const RunConfig& cfg) {
  if (cfg.points < 1) throw GeometryError(ErrorKind::PreconditionNotMet, "points must be positive");
  const std::vector<std::string> names = resolve_checks(cfg);
  const Example e = build_example(cfg.example);
  std::vector<const CheckSpec*> selected;
  for (const auto& n : names) {
    const CheckSpec& c = find_check(n);
    if (!satisfies(e, c.needs))
      throw GeometryError(ErrorKind::MissingStructure, "check " + n + " does not apply to example " + cfg.example);
    selected.push_back(&c);
  }
  const Points pts = sample_points(e.total().domain, cfg.points, cfg.seed);
  Report r;
  r.config = cfg;
  r.conventions = convention_ledger();
  for (const CheckSpec* c : selected) {
    r.checks.push_back(c->run(e, pts, cfg.tol));
    r.passed = r.passed && r.checks.back().passed;
  }
  return r;
}

inline nlohmann::ordered_json to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["config"] = {{"example", r.config.example}, {"checks", r.config.checks}, {"points", r.config.points},
                 {"seed", r.config.seed},       {"tol", r.config.tol},       {"format", r.config.format}};
  nlohmann::ordered_json conv = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.conventions) conv[k] = v;
  j["conventions"] = conv;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : r.checks)
    j["checks"].push_back({{"name", c.name},
                           {"residual_max", c.residual_max},
                           {"residual_mean", c.residual_mean},
                           {"points", c.points_used},
                           {"tolerance", c.tolerance},
                           {"passed", c.passed}});
  j["passed"] = r.passed;
  return j;
}

inline Report report_from_json(const nlohmann::ordered_json& j) {
  Report r;
  const auto& c = j.at("config");
  r.config.example = c.at("example").get<std::string>();
  r.config.checks = c.at("checks").get<std::vector<std::string>>();
  r.config.points = c.at("points").get<int>();
  r.config.seed = c.at("seed").get<std::uint64_t>();
  r.config.tol = c.at("tol").get<double>();
  r.config.format = c.at("format").get<std::string>();
  for (const auto& [k, v] : j.at("conventions").items()) r.conventions.emplace_back(k, v.get<std::string>());
  for (const auto& x : j.at("checks")) {
    IdentityCheck ic;
    ic.name = x.at("name").get<std::string>();
    ic.residual_max = x.at("residual_max").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                     : x.at("residual_max").get<double>();
    ic.residual_mean = x.at("residual_mean").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                       : x.at("residual_mean").get<double>();
    ic.points_used = x.at("points").get<int>();
    ic.tolerance = x.at("tolerance").get<double>();
    ic.passed = x.at("passed").get<bool>();
    r.checks.push_back(ic);
  }
  r.passed = j.at("passed").get<bool>();
  return r;
}

inline std::string emit_text(const Report& r) {
  std::ostringstream os;
  size_t w = 5;
  for (const auto& c : r.checks) w = std::max(w, c.name.size());
  os << "example: " << r.config.example << "  points: " << r.config.points << "  seed: " << r.config.seed
     << "  tol: " << r.config.tol << "\n";
  for (const auto& [k, v] : r.conventions) os << "convention " << k << ": " << v << "\n";
  os << std::left << std::setw(static_cast<int>(w)) << "check" << "  " << std::setw(12) << "max" << "  "
     << std::setw(12) << "mean" << "  " << std::setw(10) << "tolerance" << "  result\n";
  for (const auto& c : r.checks) {
    os << std::left << std::setw(static_cast<int>(w)) << c.name << "  " << std::scientific << std::setprecision(3)
       << std::setw(12) << c.residual_max << "  " << std::setw(12) << c.residual_mean << "  " << std::setw(10)
       << c.tolerance << "  " << (c.passed ? "PASS" : "FAIL") << "\n";
    os << std::defaultfloat;
  }
  os << "overall: " << (r.passed ? "PASS" : "FAIL") << "\n";
  return os.str();
}

inline std::string emit(const Report& r, const std::string& format) {
  if (format == "json") return to_json(r).dump(2) + "\n";
  return emit_text(r);
}

}  // namespace ccsub
