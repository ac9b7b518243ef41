#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ccsub/ccsub.hpp"
#include "oracles.hpp"

using namespace ccsub;

namespace {

template <class T>
T composite(const Vec<T>& x) {
  return sin(x[0]) * exp(x[1]) / (1.0 + x[0] * x[0]) + sqrt(x[2] * x[2] + 2.0) * log(1.5 + cos(x[1]));
}

double composite_d(const std::vector<double>& x) { return composite<double>(x); }

ChartPatch euclidean(int n) {
  return {"euclidean", n, {std::vector<double>(n, -10.0), std::vector<double>(n, 10.0)},
          SymmetricField([n](const auto& x) {
            using T = scalar_of<decltype(x)>;
            return constant_mat<T>(Mat<double>::identity(n));
          })};
}

}  // namespace

TEST(Jet, ProductHasExactDerivatives) {
  const auto x = seed<D2Scalar>(std::vector<double>{2.0, 3.0});
  const D2Scalar f = x[0] * x[1];
  EXPECT_EQ(f.value(), 6.0);
  EXPECT_EQ(f.grad(0), 3.0);
  EXPECT_EQ(f.grad(1), 2.0);
  EXPECT_EQ(f.hess(0, 1), 1.0);
  EXPECT_EQ(f.hess(1, 0), 1.0);
  EXPECT_EQ(f.hess(0, 0), 0.0);
}

TEST(Jet, ChainRuleMatchesHandDerivatives) {
  // f = sin(x) e^y
  const double a = 0.7, b = -0.3;
  const auto x = seed<D2Scalar>(std::vector<double>{a, b});
  const D2Scalar f = sin(x[0]) * exp(x[1]);
  EXPECT_NEAR(f.grad(0), std::cos(a) * std::exp(b), 1e-15);
  EXPECT_NEAR(f.grad(1), std::sin(a) * std::exp(b), 1e-15);
  EXPECT_NEAR(f.hess(0, 0), -std::sin(a) * std::exp(b), 1e-15);
  EXPECT_NEAR(f.hess(0, 1), std::cos(a) * std::exp(b), 1e-15);
  EXPECT_NEAR(f.hess(1, 1), std::sin(a) * std::exp(b), 1e-15);
}

TEST(Jet, CompositeMatchesFiniteDifferences) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<double> p{u(rng), u(rng), u(rng)};
    const D2Scalar f = composite(seed<D2Scalar>(p));
    for (int i = 0; i < 3; ++i) {
      const double fd = oracle::central_diff(composite_d, p, i, 1e-5);
      EXPECT_LE(std::abs(f.grad(i) - fd), 1e-6 * std::max(1.0, std::abs(fd)));
      for (int j = 0; j < 3; ++j) {
        const double fd2 = oracle::central_diff2(composite_d, p, i, j, 1e-4);
        EXPECT_LE(std::abs(f.hess(i, j) - fd2), 1e-6 * std::max(1.0, std::abs(fd2)));
        EXPECT_EQ(f.hess(i, j), f.hess(j, i));
      }
    }
  }
}

TEST(Jet, PartialLowersOrder) {
  const auto x = seed<D2Scalar>(std::vector<double>{0.4, 1.1});
  const D2Scalar f = x[0] * x[0] * x[1];
  const Jet<1> fx = partial(f, 0);
  EXPECT_NEAR(fx.value(), 2 * 0.4 * 1.1, 1e-15);
  EXPECT_NEAR(fx.grad(0), 2 * 1.1, 1e-15);
  EXPECT_NEAR(fx.grad(1), 2 * 0.4, 1e-15);
  const Jet<1> t = truncate(f);
  EXPECT_EQ(t.value(), f.value());
  EXPECT_EQ(t.grad(1), f.grad(1));
}

TEST(Jet, ConstantFieldHasZeroGradient) {
  const VectorField c = constant_field({1.0, 2.0});
  const auto v = c(seed<D2Scalar>(std::vector<double>{0.3, 0.5}));
  for (const auto& x : v)
    for (int i = 0; i < 2; ++i) EXPECT_EQ(x.grad(i), 0.0);
}

TEST(Linalg, CholeskyRejectsIndefinite) {
  Mat<double> a(2, 2);
  a(0, 0) = 1;
  a(1, 1) = -1;
  try {
    (void)cholesky(a);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotSPD);
  }
}

TEST(Linalg, InverseOfSpdMatrix) {
  Mat<double> a(3, 3);
  const double v[3][3] = {{4, 1, 0.5}, {1, 3, 0.2}, {0.5, 0.2, 2}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = v[i][j];
  const Mat<double> p = matmul(a, spd_inverse(a));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(p(i, j), i == j ? 1.0 : 0.0, 1e-14);
}

TEST(Linalg, GramSchmidtMatchesCholeskyOracle) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Mat<double> B(4, 4), G(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) B(i, j) = u(rng);
    G = matmul(transpose(B), B);
    for (int i = 0; i < 4; ++i) G(i, i) += 0.5;
    std::vector<Vec<double>> vs;
    for (int k = 0; k < 3; ++k) vs.push_back({u(rng), u(rng), u(rng), u(rng)});
    const auto e = gram_schmidt(G, vs);
    const auto o = oracle::gram_oracle(G, vs);
    ASSERT_EQ(e.size(), 3u);
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 4; ++i) EXPECT_NEAR(e[k][i], o[k][i], 1e-10);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) EXPECT_NEAR(inner(G, e[a], e[b]), a == b ? 1.0 : 0.0, 1e-12);
  }
}

TEST(Linalg, GramSchmidtRejectsDependentInput) {
  const Mat<double> I = Mat<double>::identity(3);
  try {
    (void)gram_schmidt(I, {{1, 0, 0}, {2, 0, 0}});
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateInput);
  }
}

TEST(Linalg, SvdReconstructs) {
  Mat<double> a(2, 3);
  const double v[2][3] = {{1, 2, 3}, {-1, 0.5, 4}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = v[i][j];
  const auto s = jacobi_svd(a);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) {
      double r = 0;
      for (int k = 0; k < 3; ++k) r += s.u(i, k) * s.s[k] * s.v(j, k);
      EXPECT_NEAR(r, a(i, j), 1e-13);
    }
}

TEST(Linalg, NullspaceOfRankDeficientMatrices) {
  EXPECT_EQ(nullspace(Mat<double>(2, 2), 1e-12).size(), 2u);
  EXPECT_TRUE(nullspace(Mat<double>::identity(3), 1e-12).empty());
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    // rank 2 map R4 -> R3 as a sum of two outer products
    Mat<double> a(3, 4);
    for (int r = 0; r < 2; ++r) {
      const double c[3] = {u(rng), u(rng), u(rng)}, d[4] = {u(rng), u(rng), u(rng), u(rng)};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) a(i, j) += c[i] * d[j];
    }
    const double tol = 1e-10;
    const auto ns = nullspace(a, tol);
    EXPECT_EQ(ns.size(), 2u);
    for (const auto& v : ns) {
      EXPECT_NEAR(norm(v), 1.0, 1e-12);
      EXPECT_LE(norm(matvec(a, v)), 10 * tol * spectral_norm(a));
    }
  }
}

TEST(Chart, EuclideanMetricIsIdentity) {
  const ChartPatch e = euclidean(3);
  const std::vector<double> p{0.1, 0.2, 0.3};
  const Mat<double> g = eval_metric(e, p);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_EQ(g(i, j), i == j ? 1.0 : 0.0);
  EXPECT_EQ(inner(e, p, {1, 2, 3}, {1, 0, -1}), -2.0);
}

TEST(Chart, HopfMetricMatchesEmbedding) {
  const auto sub = build_hopf_s3();
  for (const auto& p : sample_points(sub.total.domain, 50)) {
    const Mat<double> g = eval_metric(sub.total, p);
    const Mat<double> o = oracle::hopf_pullback_metric(p);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) EXPECT_NEAR(g(i, j), o(i, j), 1e-14);
  }
}

TEST(Chart, WarpedMetricAtOne) {
  const auto sub = build_warped(WarpKind::Quadratic);
  const Mat<double> g = eval_metric(sub.total, std::vector<double>{1.0, 0.0});
  EXPECT_EQ(g(0, 0), 1.0);
  EXPECT_EQ(g(1, 1), 2.0);
  EXPECT_EQ(g(0, 1), 0.0);
}

TEST(Chart, OutsideDomainThrows) {
  const auto sub = build_hopf_s3();
  try {
    (void)eval_metric(sub.total, std::vector<double>{0.0, 0.0, 0.0});
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutOfDomain);
  }
}

TEST(Chart, IndefiniteMetricThrows) {
  ChartPatch bad{"bad", 2, {{-1, -1}, {1, 1}}, SymmetricField([](const auto& x) {
                   using T = scalar_of<decltype(x)>;
                   Mat<T> g(2, 2);
                   g(0, 0) = T(1.0);
                   g(1, 1) = T(-1.0);
                   return g;
                 })};
  try {
    (void)eval_metric(bad, std::vector<double>{0.0, 0.0});
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotSPD);
  }
}

TEST(Frame, FlatCosymplecticFrameIsCoordinateFrame) {
  const auto s = build_olszak_r3(OlszakKind::Constant);
  const std::vector<double> p{0.2, -0.3, 0.1};
  const OrthoFrame f = phi_adapted_frame(s, p, {{0, 0, 1}}, {{1, 0, 0}, {0, 1, 0}});
  ASSERT_EQ(f.size(), 3);
  const std::vector<Vec<double>> expect{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(f.vectors[a][i], expect[a][i], 1e-15);
  EXPECT_EQ(f.roles[0], FrameRole::Basic);
  EXPECT_EQ(f.roles[1], FrameRole::PhiBasic);
  EXPECT_EQ(f.roles[2], FrameRole::Reeb);
}

TEST(Frame, HopfFrameMatchesOracle) {
  const auto sub = build_hopf_s3();
  const std::vector<double> p{std::numbers::pi / 4, 0.3, -0.2};
  const OrthoFrame f = submersion_frame(sub, p);
  const Mat<double> g = eval_metric(sub.total, p);
  const Mat<double> phi = sub.contact->phi(Vec<double>(p));
  // first vector: normalized horizontal lift of d/dtheta, which is d/dtheta itself
  const auto o = oracle::gram_oracle(g, {horizontal_lift(sub, p, {1, 0})});
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(f.vectors[0][i], o[0][i], 1e-14);
    EXPECT_NEAR(f.vectors[1][i], matvec(phi, o[0])[i], 1e-14);
  }
  EXPECT_NEAR(f.vectors[0][0], 1.0, 1e-15);
}

TEST(Frame, PropertyOrthonormalAndPhiPaired) {
  for (const auto& name : {"hopf_s3", "product_round_s2", "olszak_fibred", "olszak_exp"}) {
    const Example e = build_example(name);
    const auto* s = e.contact();
    for (const auto& p : sample_points(e.total().domain, 100)) {
      const OrthoFrame f = e.is_submersion() ? submersion_frame(e.submersion(), p) : phi_adapted_frame(*s, p);
      const ContactAt c = contact_at(*s, p);
      for (int a = 0; a < f.size(); ++a)
        for (int b = 0; b < f.size(); ++b)
          EXPECT_NEAR(inner(c.g, f.vectors[a], f.vectors[b]), a == b ? 1.0 : 0.0, 1e-10) << name;
      for (int a = 0; a + 1 < f.size(); a += 2) {
        const Vec<double> d = matvec(c.phi, f.vectors[a]) - f.vectors[a + 1];
        EXPECT_LE(max_abs(d), 1e-10) << name;
      }
    }
  }
}

TEST(Frame, RejectsBadInputs) {
  const auto s = build_olszak_r3(OlszakKind::Constant);
  const std::vector<double> p{0, 0, 0};
  auto kind_of = [&](auto&& f) {
    try {
      f();
    } catch (const GeometryError& e) {
      return e.kind();
    }
    return ErrorKind::UnknownCheck;
  };
  EXPECT_EQ(kind_of([&] { (void)phi_adapted_frame(s, p, {{0, 0, 1}, {1, 0, 0}}, {{0, 1, 0}}); }),
            ErrorKind::OddDimensionMismatch);
  EXPECT_EQ(kind_of([&] { (void)phi_adapted_frame(s, p, {{0, 0, 1}}, {{1, 0, 0}, {2, 0, 0}}); }),
            ErrorKind::DegenerateInput);
  EXPECT_EQ(kind_of([&] { (void)phi_adapted_frame(s, p, {{1, 0, 0}}, {{0, 1, 0}, {0, 0, 1}}); }),
            ErrorKind::DegenerateInput);
}

TEST(Sampling, FirstPointIsCenterAndDrawsAreDeterministic) {
  const auto sub = build_hopf_s3();
  const auto a = sample_points(sub.total.domain, 100, 42);
  const auto b = sample_points(sub.total.domain, 100, 42);
  const auto c = sample_points(sub.total.domain, 100, 43);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_EQ(a[0], sub.total.domain.center());
  for (const auto& p : a) EXPECT_TRUE(sub.total.domain.contains(p, 0.0));
  EXPECT_TRUE(sample_points(sub.total.domain, 0).empty());
}
