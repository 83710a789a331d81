#include <gtest/gtest.h>

#include <sstream>

#include "ksplit/experiments.hpp"
#include "ksplit/spectral.hpp"
#include "ksplit/weight_spec.hpp"
#include "support.hpp"

using namespace ksplit;
using namespace ksplit::testing;

TEST(Generators, SameSeedSamePolynomialOnEveryGrid) {
  Rng a(5), b(5);
  const TorusFn2D f = random_trig_polynomial(Grid1D(16), Grid1D(16), 3, a);
  const TorusFn2D g = random_trig_polynomial(Grid1D(32), Grid1D(32), 3, b);
  for (int m = -3; m <= 3; ++m)
    for (int k = -3; k <= 3; ++k)
      EXPECT_NEAR(std::abs(f.coefficient(m, k) - g.coefficient(m, k)), 0.0, 1e-13);
}

TEST(Generators, AnalyticPolynomial) {
  Rng rng(6);
  const TorusFn1D f = random_analytic_polynomial(Grid1D(64), 10, rng);
  EXPECT_LT(analytic_leakage(f), 1e-14);
  EXPECT_THROW(random_analytic_polynomial(Grid1D(16), 8, rng), InputError);
}

TEST(Instances, Normalized) {
  const Grid1D g(16);
  const Weight2D w = build_weight_2d(parse_weight_spec("power alpha=0.5"), g, g);
  const CoupleSpec c{Weight2D::constant(g, g, 1.0), w, 1.0, 2.0, SpectralCone::hardy(),
                     SpectralCone::hardy()};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    const Instance inst = make_instance(c, 3, rng);
    EXPECT_NEAR(inst.A, 1.0, 1e-12);
    EXPECT_NEAR(inst.B, 1.0, 1e-9);
    EXPECT_LT(rel_diff((inst.g + inst.h).values(), inst.f.values()), 1e-15);
  }
}

TEST(HardyNorm, ConstantAndMonomial) {
  const Grid1D g(64);
  const Weight1D w = power_weight(g, 0.3);
  const HardyNormPair one = re_hardy_norm(TorusFn1D::constant(g, 1.0), w, 0.5, default_rho_grid());
  EXPECT_NEAR(one.boundary, 1.0, 1e-12);
  EXPECT_NEAR(one.smoothed_sup, 1.0, 1e-12);
  const HardyNormPair z = re_hardy_norm(TorusFn1D::monomial(g, 1), Weight1D::constant(g, 1.0), 2.0,
                                        {0.0, 0.5, 0.9});
  EXPECT_NEAR(z.smoothed_sup, 0.9, 1e-14);
  EXPECT_EQ(z.argmax_rho, 0.9);
}

TEST(Sweep, DeterministicCsv) {
  SweepSpec s;
  s.params = {0.2, 0.5};
  s.trials = 2;
  s.n = 16;
  s.degree = 3;
  s.oracle.max_iterations = 200;
  std::ostringstream a, b;
  write_sweep_csv(a, kconstant_sweep(s));
  write_sweep_csv(b, kconstant_sweep(s));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_NE(a.str().find(",na,"), std::string::npos);
}

TEST(Sweep, InfCoupleHasConstructiveColumn) {
  SweepSpec s;
  s.params = {0.3};
  s.trials = 1;
  s.n = 16;
  s.degree = 3;
  s.couple = "inf";
  s.oracle.max_iterations = 200;
  const auto rows = kconstant_sweep(s);
  ASSERT_TRUE(rows[0].constructive_max.has_value());
  EXPECT_LE(rows[0].oracle_max, *rows[0].constructive_max + 1e-12);
}

TEST(Lemma, RatiosBounded) {
  LemmaSpec s;
  s.n = 256;
  s.trials = 10;
  s.max_degree = 8;
  for (const LemmaRow& r : verify_lemma(s)) {
    EXPECT_GT(r.ratio, 0.0);
    EXPECT_LT(r.ratio, 10.0);
  }
}

TEST(FormatDouble, RoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 12345.678}) EXPECT_EQ(std::stod(format_double(x)), x);
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
}
