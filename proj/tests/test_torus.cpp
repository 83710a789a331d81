#include <gtest/gtest.h>

#include <sstream>

#include "ksplit/torus_io.hpp"
#include "support.hpp"

using namespace ksplit;
using namespace ksplit::testing;

TEST(Grid, RejectsBadSizes) {
  EXPECT_THROW(Grid1D(4), InputError);
  EXPECT_THROW(Grid1D(12), InputError);
  EXPECT_NO_THROW(Grid1D(8));
}

TEST(Spectrum, MatchesDirectSum1D) {
  std::mt19937_64 rng(3);
  for (int n : {8, 16, 64}) {
    const TorusFn1D f = random_fn(n, rng);
    for (int m = -n / 2; m < n / 2; ++m)
      EXPECT_NEAR(std::abs(f.coefficient(m) - direct_coefficient(f, m)), 0.0, 1e-12);
  }
}

TEST(Spectrum, MatchesDirectSum2D) {
  std::mt19937_64 rng(4);
  const TorusFn2D f = random_fn(8, 16, rng);
  for (int m = -4; m < 4; ++m)
    for (int k = -8; k < 8; ++k)
      EXPECT_NEAR(std::abs(f.coefficient(m, k) - direct_coefficient(f, m, k)), 0.0, 1e-12);
}

TEST(Spectrum, RoundTrip) {
  std::mt19937_64 rng(5);
  const TorusFn2D f = random_fn(16, 32, rng);
  const TorusFn2D g = TorusFn2D::from_spectrum(f.grid1(), f.grid2(), f.spectrum());
  EXPECT_LT(rel_diff(f.values(), g.values()), 1e-14);
}

TEST(Spectrum, NyquistCountsAsNegative) {
  const Grid1D g(8);
  const TorusFn1D f = TorusFn1D::monomial(g, -4);
  EXPECT_NEAR(std::abs(f.coefficient(-4) - 1.0), 0.0, 1e-14);
  EXPECT_THROW(TorusFn1D::monomial(g, 4), InputError);
}

TEST(Fibers, RowMajorLayout) {
  const Grid1D g1(8), g2(16);
  const TorusFn2D f = TorusFn2D::from_function(g1, g2, [](double a, double b) { return cplx(a, b); });
  const TorusFn1D row = f.fiber_z2(3);
  const TorusFn1D col = f.fiber_z1(5);
  EXPECT_DOUBLE_EQ(row[5].real(), g1.angle(3));
  EXPECT_DOUBLE_EQ(row[5].imag(), g2.angle(5));
  EXPECT_DOUBLE_EQ(col[3].imag(), g2.angle(5));
}

TEST(Poisson, Multiplier) {
  const Grid1D g(32);
  const TorusFn1D z3 = TorusFn1D::monomial(g, 3);
  const TorusFn1D s = poisson_convolve(z3, 0.5);
  EXPECT_NEAR(std::abs(s.coefficient(3) - 0.125), 0.0, 1e-15);
  const TorusFn1D c = poisson_convolve(TorusFn1D::constant(g, 2.0), 0.9);
  EXPECT_NEAR(std::abs(c[7] - 2.0), 0.0, 1e-14);
}

TEST(Norms, WeightedAndSup) {
  const Grid1D g(8);
  const TorusFn1D f = TorusFn1D::constant(g, 2.0);
  const Weight1D w = Weight1D::constant(g, 4.0);
  EXPECT_NEAR(weighted_norm(f, w, 1.0), 8.0, 1e-14);
  EXPECT_NEAR(weighted_norm(f, w, 2.0), 4.0, 1e-14);
  EXPECT_NEAR(weighted_norm(f, w, std::numeric_limits<double>::infinity()), 0.5, 1e-15);
}

TEST(Weights, RejectNonPositive) {
  EXPECT_THROW(Weight1D(Grid1D(8), std::vector<double>(8, 0.0)), InputError);
}

TEST(TorusIO, RoundTrip) {
  std::mt19937_64 rng(6);
  const TorusFn2D f = random_fn(8, 16, rng);
  std::stringstream ss;
  io::write_torus(ss, f);
  const auto back = io::read_torus(ss);
  const auto& g = std::get<TorusFn2D>(back);
  EXPECT_EQ(rel_diff(f.values(), g.values()), 0.0);
}

TEST(TorusIO, RejectsTruncated) {
  std::stringstream ss("TORUS v1 1 8\nabc");
  EXPECT_THROW(io::read_torus(ss), InputError);
}
