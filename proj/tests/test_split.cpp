#include <gtest/gtest.h>

#include "ksplit/experiments.hpp"
#include "ksplit/ksplit.hpp"
#include "ksplit/weight_spec.hpp"
#include "support.hpp"

using namespace ksplit;
using namespace ksplit::testing;

namespace {

Instance predual_instance(const Weight2D& w1, const Weight2D& w2, double p, std::uint64_t seed) {
  const double q = p / (p - 1.0);
  const CoupleSpec c{w2, pow(w1, 1.0 - q), 1.0, q};
  Rng rng(seed);
  return make_instance(c, 3, rng);
}

}  // namespace

TEST(Config, Validation) {
  SplitConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.s_eff(), 3);
  cfg.p = 1.0;
  EXPECT_THROW(cfg.validate(), InputError);
  cfg.p = 3.0;
  cfg.s = 3;
  EXPECT_THROW(cfg.validate(), InputError);
  cfg.s = 0;
  cfg.k = 1;
  EXPECT_THROW(cfg.validate(), InputError);
}

TEST(Majorant, DominatesAndFloors) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  std::vector<double> y(64);
  for (auto& x : y) x = u(rng);
  const MajorantResult m = majorant(y, 0.5);
  for (int i = 0; i < 64; ++i) EXPECT_GE(m.v[i], y[i]);
  EXPECT_TRUE(std::isfinite(m.bmo_log));
  const MajorantResult z = majorant(std::vector<double>(16, 0.0), 0.5, 1e-12);
  for (double v : z.v) EXPECT_EQ(v, 1e-12);
  EXPECT_THROW(majorant(y, 1.5), InputError);
}

TEST(Majorant, MaximalFunctionBruteForce) {
  std::vector<double> y(16, 0.0);
  y[3] = 8.0;
  const ArcFamily fam = ArcFamily::shifted_dyadic(16);
  const std::vector<double> m = maximal_function(y, fam);
  for (int x = 0; x < 16; ++x) {
    double want = 0.0;
    for (const Arc& a : fam.arcs()) {
      bool has = false;
      double s = 0.0;
      for (int t = 0; t < a.length; ++t) {
        const int i = (a.start + t) % 16;
        s += y[i];
        has = has || i == x;
      }
      if (has) want = std::max(want, s / a.length);
    }
    EXPECT_NEAR(m[x], want, 1e-14);
  }
}

TEST(Gimel, ConstantInputs) {
  const Grid1D g(16);
  const GimelResult r = gimel(std::vector<double>(16, 1.0), Weight2D::constant(g, g, 1.0), 2);
  EXPECT_LT(r.hilbert_ratio, 1e-12);
  EXPECT_NEAR(r.equivalence, 1.0, 1e-12);
  EXPECT_EQ(r.retries, 0);
}

TEST(Gimel, ClippedAndHomogeneous) {
  const Grid1D g(32);
  const Weight2D w = Weight2D::from_function(g, g, [](double a, double b) {
    return std::exp(std::cos(a) + 0.5 * std::sin(b));
  });
  std::vector<double> v(32), v3(32);
  for (int i = 0; i < 32; ++i) {
    v[i] = 1.0 + 0.5 * std::sin(3.0 * g.angle(i));
    v3[i] = 3.0 * v[i];
  }
  const GimelResult a = gimel(v, w, 2), b = gimel(v3, w, 2);
  EXPECT_LE(a.equivalence, 2.0 + 1e-12);
  EXPECT_TRUE(std::isfinite(a.hilbert_ratio));
  for (size_t i = 0; i < a.value.values().size(); ++i)
    EXPECT_NEAR(b.value.values()[i], 3.0 * a.value.values()[i], 1e-12 * b.value.values()[i]);
}

TEST(Levels, ZeroGivesInfinity) {
  const Grid1D g(16);
  const std::vector<double> lambda =
      lambda_levels(TorusFn2D::constant(g, g, 0.0), TorusFn1D::constant(g, 1.0),
                    std::vector<double>(16, 1.0), Weight2D::constant(g, g, 1.0), 2.0);
  for (double l : lambda) EXPECT_TRUE(std::isinf(l));
}

TEST(Correctors, CollapseToOne) {
  const Grid1D g(16);
  std::mt19937_64 rng(52);
  const TorusFn2D x = random_fn(16, 16, rng);
  const std::vector<double> lambda(16, std::numeric_limits<double>::infinity());
  const CorrectorResult r = correctors(x, lambda, Weight2D::constant(g, g, 1.0), SplitConfig{});
  for (const cplx& p : r.phi.values()) EXPECT_EQ(p, cplx(1.0));
  EXPECT_EQ(r.bound, 0.0);
}

TEST(Correctors, BoundedAndAnalytic) {
  const Grid1D g(32);
  std::mt19937_64 rng(53);
  const TorusFn2D x = project_cone(random_fn(32, 32, rng), SpectralCone::p2_cone());
  const std::vector<double> lambda(32, 0.5);
  const CorrectorResult r = correctors(x, lambda, Weight2D::constant(g, g, 1.0), SplitConfig{});
  EXPECT_TRUE(std::isfinite(r.sup_phi));
  EXPECT_TRUE(std::isfinite(r.bound));
  EXPECT_LT(r.leakage, 1e-6);
  EXPECT_GE(r.sup_gamma, 1.0);
}

TEST(Split, DegenerateFirstComponent) {
  const Grid1D g(16);
  std::mt19937_64 rng(54);
  const TorusFn2D h = project_cone(random_fn(16, 16, rng), SpectralCone::p_cone());
  const TorusFn2D zero = TorusFn2D::constant(g, g, 0.0);
  const Weight2D one = Weight2D::constant(g, g, 1.0);
  const SplitReport r = split_inf(InfProblem{h, zero, h, one, one}, SplitConfig{});
  for (const cplx& v : r.g_prime.values()) EXPECT_EQ(v, cplx(0.0));
  EXPECT_EQ(r.C1, 0.0);
  EXPECT_LT(r.decomposition_error, 1e-15);
}

TEST(Split, EndToEndTrivialWeights) {
  const Grid1D g(32);
  const Weight2D one = Weight2D::constant(g, g, 1.0);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Instance inst = predual_instance(one, one, 2.0, seed);
    const SplitReport r = split_inf(InfProblem{inst.f, inst.g, inst.h, one, one}, SplitConfig{});
    EXPECT_LT(r.decomposition_error, 1e-8);
    EXPECT_LT(r.leakage_g, 1e-6);
    EXPECT_LT(r.leakage_h, 1e-6);
    EXPECT_TRUE(std::isfinite(r.C1) && std::isfinite(r.C2));
    EXPECT_NEAR(r.A, 1.0, 1e-9);
    EXPECT_NEAR(r.B, 1.0, 1e-9);
    ASSERT_TRUE(r.hypotheses.has_value());
    EXPECT_TRUE(r.hypotheses->all_pass());
  }
}

TEST(Split, WeightedCouple) {
  const Grid1D g(32);
  const Weight2D w1 = build_weight_2d(parse_weight_spec("power alpha=0.3 axis=2"), g, g);
  const Weight2D w2 = build_weight_2d(parse_weight_spec("exp-cos eps=0.5"), g, g);
  SplitConfig cfg;
  cfg.p = 3.0;
  const Instance inst = predual_instance(w1, w2, 3.0, 7);
  const SplitReport r = split_inf(InfProblem{inst.f, inst.g, inst.h, w1, w2}, cfg);
  EXPECT_LT(r.decomposition_error, 1e-8);
  EXPECT_LT(r.leakage_g, 1e-6);
  EXPECT_TRUE(std::isfinite(r.C1) && std::isfinite(r.C2));
  EXPECT_GE(r.levels.size(), 1u);
}

TEST(Split, SeparateFactorsMatchFolded) {
  const Grid1D g(16);
  const Weight1D b = Weight1D::from_function(g, [](double t) { return std::exp(0.3 * std::cos(t)); });
  const Weight2D one = Weight2D::constant(g, g, 1.0);
  const Instance inst = predual_instance(one, one, 2.0, 3);
  SplitProblem a{inst.f, inst.g, inst.h, one, one};
  a.b1 = b;
  SplitProblem folded{inst.f, inst.g, inst.h, Weight2D::separating(b, Weight1D::constant(g, 1.0)), one};
  const SplitReport ra = split_predual(a, SplitConfig{}), rf = split_predual(folded, SplitConfig{});
  EXPECT_LT(rel_diff(ra.g_prime.values(), rf.g_prime.values()), 1e-12);
}

TEST(Split, RejectsInputOutsideSubspace) {
  const Grid1D g(16);
  const TorusFn2D f = TorusFn2D::monomial(g, g, -1, -1);
  const Weight2D one = Weight2D::constant(g, g, 1.0);
  EXPECT_THROW(split_inf(InfProblem{f, f, TorusFn2D::constant(g, g, 0.0), one, one}, SplitConfig{}),
               InputError);
}

TEST(Split, SerialMatchesParallelBitwise) {
  const Grid1D g(32);
  const Weight2D w1 = build_weight_2d(parse_weight_spec("power alpha=0.4"), g, g);
  const Weight2D one = Weight2D::constant(g, g, 1.0);
  const Instance inst = predual_instance(w1, one, 2.0, 11);
  SplitConfig serial, parallel;
  serial.exec = kernels::Exec::kSerial;
  parallel.exec = kernels::Exec::kParallel;
  const SplitReport a = split_inf(InfProblem{inst.f, inst.g, inst.h, w1, one}, serial);
  const SplitReport b = split_inf(InfProblem{inst.f, inst.g, inst.h, w1, one}, parallel);
  EXPECT_EQ(max_abs_diff(a.g_prime.values(), b.g_prime.values()), 0.0);
  EXPECT_EQ(a.C1, b.C1);
  EXPECT_EQ(a.C2, b.C2);
}

TEST(Fiberwise, AnalyticOutputs) {
  const Grid1D g(16);
  Rng rng(12);
  const SpectralCone top(ConeKind::kTopHalf);
  const TorusFn2D f = project_cone(random_trig_polynomial(g, g, 3, rng), top);
  const TorusFn2D gg = random_trig_polynomial(g, g, 3, rng);
  const Weight2D w2 = build_weight_2d(parse_weight_spec("power alpha=0.3 axis=2"), g, g);
  const FiberwiseReport r =
      split_fiberwise(f, gg, f - gg, Weight2D::constant(g, g, 1.0), w2, 1.0, 2.0);
  EXPECT_LT(r.decomposition_error, 1e-8);
  EXPECT_LT(r.leakage_g, 1e-6);
  EXPECT_LT(r.leakage_h, 1e-6);
  EXPECT_TRUE(std::isfinite(r.max_c1) && std::isfinite(r.max_c2));
  EXPECT_EQ(r.fiber_c1.size(), 16u);
}

TEST(Glue, TrivialWeights) {
  const Grid1D g(16);
  const Weight2D one = Weight2D::constant(g, g, 1.0);
  const std::vector<double> theta{0.2, 0.4, 0.6, 0.8};
  OracleSettings s;
  s.max_iterations = 500;
  const GlueReport r = glue_driver(one, one, theta, 1, SplitConfig{}, s);
  ASSERT_EQ(r.couples.size(), 3u);
  for (const auto& c : r.couples) EXPECT_TRUE(std::isfinite(c.C1) && std::isfinite(c.C2)) << c.name;
  EXPECT_TRUE(r.hypotheses.all_pass());
  const std::vector<double> bad{0.2, 0.2, 0.6, 0.8};
  EXPECT_THROW(glue_driver(one, one, bad, 1), InputError);
}
