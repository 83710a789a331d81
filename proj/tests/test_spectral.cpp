#include <gtest/gtest.h>

#include "ksplit/spectral.hpp"
#include "support.hpp"

using namespace ksplit;
using namespace ksplit::testing;

TEST(Cone, Membership) {
  const SpectralCone p = SpectralCone::p_cone();
  EXPECT_TRUE(p.contains(0, -3));
  EXPECT_TRUE(p.contains(-3, 0));
  EXPECT_FALSE(p.contains(-1, -1));
  const SpectralCone p2 = SpectralCone::p2_cone();
  EXPECT_TRUE(p2.contains(5, -1));
  EXPECT_FALSE(p2.contains(5, 0));
  EXPECT_EQ(SpectralCone::parse(p.complement().name()), p.complement());
}

TEST(Projectors, MatchDirectCoefficients) {
  std::mt19937_64 rng(11);
  const TorusFn2D f = random_fn(8, 8, rng);
  for (auto cone : {SpectralCone::p_cone(), SpectralCone::p2_cone(), SpectralCone::hardy()}) {
    const TorusFn2D g = project_cone(f, cone);
    for (int m = -4; m < 4; ++m)
      for (int k = -4; k < 4; ++k) {
        const cplx want = cone.contains(m, k) ? direct_coefficient(f, m, k) : cplx(0.0);
        EXPECT_NEAR(std::abs(direct_coefficient(g, m, k) - want), 0.0, 1e-13);
      }
  }
}

TEST(Projectors, IdempotentAndComplementary) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const TorusFn2D f = random_fn(16, 16, rng);
    const SpectralCone p = SpectralCone::p_cone();
    const TorusFn2D pf = project_cone(f, p);
    EXPECT_LT(rel_diff(project_cone(pf, p).values(), pf.values()), 1e-13);
    EXPECT_LT(rel_diff((pf + project_cone(f, p.complement())).values(), f.values()), 1e-13);
  }
}

TEST(Hilbert, SquareIsMinusIdentityOffMean) {
  std::mt19937_64 rng(13);
  const TorusFn1D f = random_fn(64, rng);
  const TorusFn1D hh = hilbert(hilbert(f));
  const TorusFn1D want = TorusFn1D::constant(f.grid(), f.mean()) - f;
  // The Nyquist term has sign(-n/2) = -1 and survives.
  const TorusFn1D ny = TorusFn1D::monomial(f.grid(), -32, f.coefficient(-32));
  EXPECT_LT(rel_diff(hh.values(), want.values()), 1e-13);
  EXPECT_LT(rel_diff(hilbert(hilbert(ny)).values(), (cplx(-1.0) * ny).values()), 1e-13);
}

TEST(Hilbert, CosineToSine) {
  const Grid1D g(32);
  const TorusFn1D c = TorusFn1D::from_function(g, [](double t) { return cplx(std::cos(3 * t)); });
  const TorusFn1D s = TorusFn1D::from_function(g, [](double t) { return cplx(std::sin(3 * t)); });
  EXPECT_LT(max_abs_diff(hilbert(c).values(), s.values()), 1e-14);
}

TEST(Riesz, KeepsNonnegative) {
  std::mt19937_64 rng(14);
  const TorusFn1D f = random_fn(32, rng);
  const TorusFn1D r = riesz(f);
  EXPECT_LT(analytic_leakage(r), 1e-14);
  EXPECT_LT(rel_diff((r + anti_riesz(f)).values(), f.values()), 1e-14);
}

TEST(Framed, IdempotentAndLeakageFree) {
  std::mt19937_64 rng(15);
  const Grid1D g(16);
  const Weight2D u = Weight2D::from_function(g, g, [](double a, double b) {
    return std::exp(0.5 * std::cos(a) + 0.3 * std::sin(2 * b));
  });
  const TorusFn2D f = random_fn(16, 16, rng);
  const TorusFn2D pf = framed_project(f, u, SpectralCone::p_cone());
  EXPECT_LT(rel_diff(framed_project(pf, u, SpectralCone::p_cone()).values(), pf.values()), 1e-12);
  EXPECT_LT(framed_membership(pf, u, SpectralCone::p_cone(), 1e-10).leakage, 1e-13);
}

TEST(Membership, ReportsLeakage) {
  const Grid1D g(8);
  const TorusFn2D f = TorusFn2D::monomial(g, g, -1, -1, 0.5) + TorusFn2D::monomial(g, g, 1, 1);
  const Membership m = membership(f, SpectralCone::p_cone(), 1e-8);
  EXPECT_FALSE(m.member);
  EXPECT_NEAR(m.leakage, 0.5, 1e-14);
}

TEST(WeakTail, BoundHoldsOnRandomFibers) {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 10; ++trial) {
    const TorusFn1D f = random_fn(64, rng);
    const Weight1D w = random_weight(64, rng, 0.5);
    std::vector<double> frame(64, 1.0);
    const WeakTail t = weak_tail_p2(f, frame, w, 0.5, 0.5);
    EXPECT_LE(t.lhs, t.rhs * (1 + 1e-12));
  }
}
