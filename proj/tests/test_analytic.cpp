#include <gtest/gtest.h>

#include "ksplit/analytic.hpp"
#include "ksplit/experiments.hpp"
#include "ksplit/spectral.hpp"
#include "ksplit/weight_spec.hpp"
#include "support.hpp"

using namespace ksplit;
using namespace ksplit::testing;

TEST(Outer, ModulusAndAnalyticity) {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const Weight1D w = random_smooth_weight(Grid1D(256), 6, 2.0, rng);
    const OuterFn o = outer_function(w);
    for (int k = 0; k < 256; ++k) EXPECT_NEAR(std::abs(o.values[k]) / w[k], 1.0, 1e-12);
    EXPECT_LT(o.leakage, 1e-12);
  }
}

TEST(Outer, Multiplicative) {
  std::mt19937_64 rng(32);
  // Rough weights: the identity holds on the grid even when the spectra alias.
  const Weight1D a = random_weight(128, rng), b = random_weight(128, rng);
  const TorusFn1D ab = outer_function(a * b).values;
  const TorusFn1D prod = outer_function(a).values * outer_function(b).values;
  EXPECT_LT(rel_diff(ab.values(), prod.values()), 1e-12);
}

TEST(Outer, ConstantWeight) {
  const OuterFn o = outer_function(Weight1D::constant(Grid1D(16), 4.0));
  for (int k = 0; k < 16; ++k) EXPECT_NEAR(std::abs(o.values[k] - 4.0), 0.0, 1e-14);
}

TEST(InnerOuter, RecoversBlaschkeFactor) {
  const Grid1D g(256);
  const cplx root(0.3, -0.4);
  const TorusFn1D blaschke = TorusFn1D::from_function(g, [&](double t) {
    const cplx z = std::polar(1.0, t);
    return (z - root) / (1.0 - std::conj(root) * z);
  });
  const OuterFn o = outer_function(power_weight(g, 0.0) * Weight1D::from_function(g, [](double t) {
                                      return std::exp(0.5 * std::cos(t));
                                    }));
  const InnerOuter io = inner_outer(blaschke * o.values);
  for (int k = 0; k < 256; ++k) EXPECT_NEAR(std::abs(io.inner[k]), 1.0, 1e-10);
  EXPECT_LT(rel_diff(io.inner.values(), blaschke.values()), 1e-10);
  EXPECT_THROW(inner_outer(TorusFn1D::constant(g, 0.0)), InputError);
}

TEST(Partition, ConstantWeightIsOneAtom) {
  const Partition p = build_partition(Weight1D::constant(Grid1D(64), 1.0));
  int active = 0;
  for (const auto& a : p.atoms) {
    if (a.empty) continue;
    ++active;
    EXPECT_EQ(a.level, 0);
    for (int k = 0; k < 64; ++k) EXPECT_NEAR(std::abs(a.phi[k] - 1.0), 0.0, 1e-14);
  }
  EXPECT_EQ(active, 1);
}

TEST(Partition, ConstantBetweenLevels) {
  const Partition p = build_partition(Weight1D::constant(Grid1D(64), std::pow(2.0, 5.5)));
  std::vector<int> levels;
  for (const auto& a : p.atoms)
    if (!a.empty) levels.push_back(a.level);
  EXPECT_EQ(levels, (std::vector<int>{5, 6}));
}

TEST(Partition, FixturesSumToOne) {
  const Grid1D g(512);
  for (const char* spec : {"const", "power alpha=0.25", "power alpha=0.5", "exp-cos eps=0.5"}) {
    const Weight1D a = build_weight_1d(parse_weight_spec(spec), g);
    const Partition p = build_partition(a);
    EXPECT_LT(p.sum_error, 1e-8) << spec;
    EXPECT_LT(p.max_leakage, 1e-8) << spec;
    EXPECT_TRUE(std::isfinite(p.c_lower) && std::isfinite(p.c_upper) && std::isfinite(p.c_sum));
    for (const auto& atom : p.atoms) {
      if (atom.empty) continue;
      // phi = theta psi^power
      std::vector<cplx> rebuilt(g.size());
      for (int k = 0; k < g.size(); ++k)
        rebuilt[k] = atom.theta[k] * std::pow(atom.psi.values[k], p.power);
      EXPECT_LT(rel_diff(rebuilt, atom.phi.values()), 1e-8) << spec;
    }
  }
}

TEST(Partition, RejectsLevelsNotCoveringWeight) {
  const Weight1D a = Weight1D::constant(Grid1D(64), 10.0);
  EXPECT_THROW(build_partition(a, 4, 5), InputError);
}
