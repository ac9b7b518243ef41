#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ccsub/ccsub.hpp"
#include "oracles.hpp"

using namespace ccsub;

namespace {

const double kQuarter = std::numbers::pi / 4;

std::vector<ChartPatch> all_patches() {
  std::vector<ChartPatch> out;
  for (const auto& spec : example_specs()) {
    const Example e = spec.build();
    out.push_back(e.total());
    if (e.is_submersion()) out.push_back(e.submersion().base);
  }
  return out;
}

Vec<double> random_vec(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec<double> v(static_cast<size_t>(n));
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST(Christoffel, FlatChartVanishes) {
  const auto s = build_olszak_r3(OlszakKind::Constant);
  const auto G = christoffel(s.patch, std::vector<double>{0.3, -0.2, 0.1});
  for (double c : G.c) EXPECT_EQ(c, 0.0);
}

TEST(Christoffel, WarpedValuesAtOne) {
  const auto sub = build_warped(WarpKind::Quadratic);
  const auto G = christoffel(sub.total, std::vector<double>{1.0, 0.0});
  EXPECT_NEAR(G(0, 1, 1), -1.0, 1e-15);
  EXPECT_NEAR(G(1, 0, 1), 0.5, 1e-15);
  EXPECT_EQ(G(1, 0, 1), G(1, 1, 0));
  EXPECT_NEAR(G(0, 0, 0), 0.0, 1e-15);
}

TEST(Christoffel, HopfValue) {
  const auto sub = build_hopf_s3();
  const auto G = christoffel(sub.total, std::vector<double>{kQuarter, 0.0, 0.0});
  EXPECT_NEAR(G(0, 1, 1), 0.5, 1e-15);
  EXPECT_NEAR(G(0, 2, 2), -0.5, 1e-15);
}

TEST(CovariantDerivative, Examples) {
  const auto flat = build_olszak_r3(OlszakKind::Constant);
  const std::vector<double> q{0.1, 0.2, 0.3};
  EXPECT_LE(max_abs(cov_deriv_vec(flat.patch, q, {1, 2, 3}, constant_field({0.5, -1, 2}))), 1e-15);

  const auto warped = build_warped(WarpKind::Quadratic);
  const Vec<double> n = cov_deriv_vec(warped.total, std::vector<double>{1.0, 0.0}, {0, 1}, coordinate_field(2, 1));
  EXPECT_NEAR(n[0], -1.0, 1e-15);
  EXPECT_NEAR(n[1], 0.0, 1e-15);

  // Hopf: xi is geodesic, and nabla_{d theta} xi = (0, -tan, cot) by hand
  const auto hopf = build_hopf_s3();
  const std::vector<double> p{0.6, 0.2, -0.4};
  EXPECT_LE(max_abs(cov_deriv_vec(hopf.total, p, {0, 1, 1}, hopf.contact->xi)), 1e-15);
  const Vec<double> d = cov_deriv_vec(hopf.total, p, {1, 0, 0}, hopf.contact->xi);
  EXPECT_NEAR(d[0], 0.0, 1e-15);
  EXPECT_NEAR(d[1], -std::tan(0.6), 1e-14);
  EXPECT_NEAR(d[2], 1.0 / std::tan(0.6), 1e-14);
}

TEST(LieBracket, Examples) {
  const std::vector<double> p{0.7, -0.1};
  EXPECT_LE(max_abs(lie_bracket(coordinate_field(2, 0), coordinate_field(2, 1), p)), 0.0);
  const VectorField X([](const auto& x) {
    using T = scalar_of<decltype(x)>;
    return Vec<T>{T(0.0), x[0]};
  });
  const Vec<double> b = lie_bracket(X, coordinate_field(2, 0), p);
  EXPECT_EQ(b[0], 0.0);
  EXPECT_EQ(b[1], -1.0);
}

TEST(Riemann, FlatVanishes) {
  const auto s = build_olszak_r3(OlszakKind::Constant);
  const RiemannAt R = riemann_at(s.patch, std::vector<double>{0.2, 0.1, -0.3});
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) EXPECT_EQ(R.component(a, b, c, d), 0.0);
}

TEST(Riemann, RoundS3MatchesConstantCurvature) {
  const auto hopf = build_hopf_s3();
  std::mt19937_64 rng(5);
  for (const auto& p : sample_points(hopf.total.domain, 30)) {
    const RiemannAt R = riemann_at(hopf.total, p);
    const Mat<double> g = eval_metric(hopf.total, p);
    for (int trial = 0; trial < 5; ++trial) {
      const auto X = random_vec(rng, 3), Y = random_vec(rng, 3), Z = random_vec(rng, 3), W = random_vec(rng, 3);
      EXPECT_NEAR(R(X, Y, Z, W), oracle::constant_curvature(g, 1.0, X, Y, Z, W), 1e-10);
      EXPECT_EQ(R.kn(X, Y, Z, W), -R(X, Y, Z, W));
    }
    const auto e = gram_schmidt(g, {unit_vector(3, 0), unit_vector(3, 1), unit_vector(3, 2)});
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (a != b) {
          EXPECT_NEAR(R(e[a], e[b], e[b], e[a]), 1.0, 1e-10);
        }
  }
}

TEST(Riemann, RoundS2BaseHasCurvatureFour) {
  const auto hopf = build_hopf_s3();
  for (const auto& p : sample_points(hopf.base.domain, 20)) {
    const Mat<double> g = eval_metric(hopf.base, p);
    const auto e = gram_schmidt(g, {unit_vector(2, 0), unit_vector(2, 1)});
    EXPECT_NEAR(riemann4(hopf.base, p, e[0], e[1], e[1], e[0]), 4.0, 1e-10);
  }
}

TEST(Riemann, WarpedSectionalCurvature) {
  const auto q = build_warped(WarpKind::Quadratic);
  const std::vector<double> p{1.0, 0.0};
  EXPECT_NEAR(riemann4(q.total, p, {1, 0}, {0, 1 / std::sqrt(2.0)}, {0, 1 / std::sqrt(2.0)}, {1, 0}), -0.25, 1e-12);
  for (WarpKind k : {WarpKind::Quadratic, WarpKind::Exponential, WarpKind::Constant}) {
    const auto sub = build_warped(k);
    for (const auto& x : sample_points(sub.total.domain, 20)) {
      double f = 1, df = 0, ddf = 0;
      if (k == WarpKind::Quadratic) f = 1 + x[0] * x[0], df = 2 * x[0], ddf = 2;
      if (k == WarpKind::Exponential) f = df = ddf = std::exp(x[0]);
      const Vec<double> e1{1, 0}, e2{0, 1 / std::sqrt(f)};
      EXPECT_NEAR(riemann4(sub.total, x, e1, e2, e2, e1), oracle::warped_curvature(f, df, ddf), 1e-10);
    }
  }
}

TEST(Riemann, PropertySymmetriesOnAllPatches) {
  for (const auto& patch : all_patches())
    for (const auto& p : sample_points(patch.domain, 20))
      EXPECT_LE(riemann_symmetry_residual(patch, p), 1e-10) << patch.name;
}

TEST(Connection, PropertyTorsionFreeAndMetricOnAllPatches) {
  for (const auto& patch : all_patches())
    for (const auto& p : sample_points(patch.domain, 100)) {
      EXPECT_LE(torsion_residual(patch, p), 1e-9) << patch.name;
      EXPECT_LE(metric_compat_residual(patch, p), 1e-9) << patch.name;
    }
}

TEST(ExteriorDerivative, Examples) {
  const auto hopf = build_hopf_s3();
  const std::vector<double> p{kQuarter, 0.1, 0.2};
  EXPECT_NEAR(ext_deriv_1form(hopf.contact->eta, p, {1, 0, 0}, {0, 1, 0}), -1.0, 1e-14);
  EXPECT_NEAR(ext_deriv_1form(hopf.contact->eta, p, {0, 1, 0}, {1, 0, 0}), 1.0, 1e-14);
  const auto flat = build_olszak_r3(OlszakKind::Exponential);
  EXPECT_EQ(ext_deriv_1form(flat.eta, p, {1, 2, 3}, {-1, 0, 2}), 0.0);
}

TEST(ExteriorDerivative, SquareIsZero) {
  // eta = dh for h = y sin x + z^2, written out by hand
  const CovectorField dh([](const auto& x) {
    using T = scalar_of<decltype(x)>;
    return Vec<T>{x[1] * cos(x[0]), sin(x[0]), 2.0 * x[2]};
  });
  // Phi = d(yz, x^2, sin x): Phi_xy = 2x - z, Phi_xz = cos x - y, Phi_yz = 0
  const TwoFormField dw([](const auto& x) {
    using T = scalar_of<decltype(x)>;
    Mat<T> m(3, 3);
    m(0, 1) = 2.0 * x[0] - x[2];
    m(1, 0) = -m(0, 1);
    m(0, 2) = cos(x[0]) - x[1];
    m(2, 0) = -m(0, 2);
    return m;
  });
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_vec(rng, 3);
    const auto X = random_vec(rng, 3), Y = random_vec(rng, 3), Z = random_vec(rng, 3);
    EXPECT_LE(std::abs(ext_deriv_1form(dh, p, X, Y)), 1e-14);
    EXPECT_LE(std::abs(ext_deriv_2form(dw, p, X, Y, Z)), 1e-14);
    EXPECT_NEAR(ext_deriv_2form(dw, p, X, Y, Z), -ext_deriv_2form(dw, p, Y, X, Z), 1e-14);
  }
}

TEST(CovariantDerivativePhi, FlatAndSasakian) {
  const auto flat = build_olszak_r3(OlszakKind::Constant);
  EXPECT_LE(max_abs(cov_deriv_phi(flat, std::vector<double>{0.1, 0.2, 0.3}, {1, 2, 3}, {3, 2, 1})), 1e-15);
  const auto hopf = build_hopf_s3();
  std::mt19937_64 rng(13);
  for (const auto& p : sample_points(hopf.total.domain, 30)) {
    const ContactAt c = contact_at(*hopf.contact, p);
    const auto X = random_vec(rng, 3), Y = random_vec(rng, 3);
    const Vec<double> expect = inner(c.g, X, Y) * c.xi - dot(c.eta, Y) * X;
    EXPECT_LE(max_abs(cov_deriv_phi(*hopf.contact, p, X, Y) - expect), 1e-12);
  }
}

TEST(Codifferential, ExamplesAndErrors) {
  const auto hopf = build_hopf_s3();
  const std::vector<double> p{kQuarter, 0.1, 0.2};
  const OrthoFrame f = phi_adapted_frame(*hopf.contact, p);
  EXPECT_NEAR(codiff_2form(*hopf.contact, p, f, {0, 1, 1}), 2.0, 1e-12);
  EXPECT_NEAR(codiff_2form(*hopf.contact, p, f, {1, 0, 0}), 0.0, 1e-12);
  const auto olszak = build_olszak_r3(OlszakKind::Exponential);
  const std::vector<double> q{0.1, 0.2, 0.3};
  const OrthoFrame fo = phi_adapted_frame(olszak, q);
  for (const auto& E : fo.vectors) EXPECT_LE(std::abs(codiff_2form(olszak, q, fo, E)), 1e-12);
  try {
    (void)codiff_2form(*hopf.contact, std::vector<double>{0.5, 0.1, 0.2}, f, {0, 1, 1});
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::FrameMismatch);
  }
}

TEST(Codifferential, PropertyFrameIndependence) {
  for (const auto& name : {"hopf_s3", "olszak_exp", "olszak_fibred", "product_round_s2"}) {
    const Example e = build_example(name);
    for (const auto& p : sample_points(e.total().domain, 100)) {
      const OrthoFrame f0 = phi_adapted_frame(*e.contact(), p, 0);
      const OrthoFrame f1 = phi_adapted_frame(*e.contact(), p, 1);
      EXPECT_LE(frame_independence_residual(*e.contact(), p, f0, f1), 1e-9) << name;
    }
  }
}
