#include <gtest/gtest.h>

#include "ksplit/experiments.hpp"
#include "ksplit/oracle.hpp"
#include "support.hpp"

using namespace ksplit;
using namespace ksplit::testing;

namespace {

struct Lattice {
  OracleProblem prob;
  std::vector<cplx> base;     // FFT-order spectrum of g' without free terms
  std::vector<size_t> free;   // FFT indices of the two free coefficients

  std::vector<cplx> g_prime(const std::array<double, 4>& x) const {
    std::vector<cplx> spec = base;
    spec[free[0]] = cplx(x[0], x[1]);
    spec[free[1]] = cplx(x[2], x[3]);
    const TorusFn2D x8 = TorusFn2D::from_spectrum(Grid1D(8), Grid1D(8), spec);
    return std::vector<cplx>(x8.values().begin(), x8.values().end());
  }

  double best(std::array<double, 4> center, double step, int half) const {
    double out = std::numeric_limits<double>::infinity();
    std::array<double, 4> x{};
    const int side = 2 * half + 1;
    for (int code = 0; code < side * side * side * side; ++code) {
      int c = code;
      for (int d = 0; d < 4; ++d) {
        x[d] = center[d] + step * (c % side - half);
        c /= side;
      }
      out = std::min(out, oracle_objective(prob, g_prime(x)).value);
    }
    return out;
  }
};

Lattice make_lattice(std::uint64_t seed) {
  const Grid1D g(8);
  Rng rng(seed);
  const TorusFn2D raw = random_trig_polynomial(g, g, 2, rng);
  const SpectralCone c1(ConeKind::kRightHalf), c2(ConeKind::kTopHalf);
  // f keeps only the union; the quadrant part is limited to two terms.
  std::vector<cplx> fs = raw.spectrum();
  const size_t i00 = 0, i11 = 1 * 8 + 1;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      const size_t idx = static_cast<size_t>(a) * 8 + b;
      const int m = fft::frequency(a, 8), k = fft::frequency(b, 8);
      const bool both = c1.contains(m, k) && c2.contains(m, k);
      if ((!c1.contains(m, k) && !c2.contains(m, k)) || (both && idx != i00 && idx != i11)) fs[idx] = 0.0;
    }
  const TorusFn2D f = TorusFn2D::from_spectrum(g, g, fs);
  const TorusFn2D gg = random_trig_polynomial(g, g, 2, rng);
  const TorusFn2D h = f - gg;
  Lattice L{make_oracle_problem(f, gg, h, Weight2D::constant(g, g, 1.0),
                                Weight2D::constant(g, g, 1.0), c1, c2, 1.0, 2.0)};
  L.prob.free_mask.assign(64, 0);
  L.prob.free_mask[i00] = L.prob.free_mask[i11] = 1;
  L.free = {i00, i11};
  L.base.assign(64, 0.0);
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      const size_t idx = static_cast<size_t>(a) * 8 + b;
      const int m = fft::frequency(a, 8), k = fft::frequency(b, 8);
      if (c1.contains(m, k) && !c2.contains(m, k)) L.base[idx] = fs[idx];
    }
  return L;
}

}  // namespace

TEST(Oracle, LatticeSearch8x8) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Lattice L = make_lattice(seed);
    const OracleResult res = solve_oracle(L.prob);
    const double coarse = L.best({0, 0, 0, 0}, 0.5, 4);
    EXPECT_LE(res.objective, coarse + 1e-9);
    // No lattice point near the returned solution does noticeably better.
    const TorusFn2D gp(Grid1D(8), Grid1D(8), res.g_prime);
    const auto& s = gp.spectrum();
    const std::array<double, 4> at{s[L.free[0]].real(), s[L.free[0]].imag(), s[L.free[1]].real(),
                                   s[L.free[1]].imag()};
    EXPECT_LE(res.objective, L.best(at, 1e-3, 1) * (1 + 1e-5));
  }
}

TEST(Oracle, LeastSquaresTrivialWeights) {
  const Grid1D g(16);
  const CoupleSpec c{Weight2D::constant(g, g, 1.0), Weight2D::constant(g, g, 1.0), 2.0, 2.0};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    const Instance inst = make_instance(c, 3, rng);
    const OracleResult r = solve_oracle(oracle_problem(c, inst));
    EXPECT_LE(r.objective, 1.0 + 1e-8);
    EXPECT_LT(r.decomposition_error, 1e-12);
    EXPECT_LT(r.leakage_g, 1e-10);
    EXPECT_LT(r.leakage_h, 1e-10);
    EXPECT_EQ(r.method, "least-squares-pareto");
  }
}

TEST(Oracle, WarmStartGivesUpperBound) {
  const Grid1D g(16);
  const CoupleSpec c{Weight2D::constant(g, g, 1.0), Weight2D::constant(g, g, 1.0), 1.0, 3.0};
  Rng rng(9);
  const Instance inst = make_instance(c, 3, rng);
  OracleProblem op = oracle_problem(c, inst);
  const double warm = oracle_objective(op, op.warm_starts.front()).value;
  EXPECT_LE(solve_oracle(op).objective, warm + 1e-12);
}

TEST(Oracle, OneVariableProblem) {
  const Grid1D g(16);
  Rng rng(4);
  const TorusFn1D f = random_analytic_polynomial(g, 4, rng);
  const TorusFn1D gg = random_trig_polynomial(g, 3, rng);
  const SpectralCone hardy(ConeKind::kTopHalf);
  const OracleProblem op = make_oracle_problem(f, gg, f - gg, Weight1D::constant(g, 1.0),
                                               Weight1D::constant(g, 1.0), hardy, hardy, 1.0, 2.0);
  EXPECT_EQ(op.n1, 1);
  const OracleResult r = solve_oracle(op);
  EXPECT_TRUE(r.feasible);
  EXPECT_LT(r.leakage_g, 1e-10);
  EXPECT_LT(r.decomposition_error, 1e-12);
}

TEST(Oracle, HeuristicBelowOne) {
  const Grid1D g(8);
  const CoupleSpec c{Weight2D::constant(g, g, 1.0), Weight2D::constant(g, g, 1.0), 0.5, 2.0};
  Rng rng(5);
  const Instance inst = make_instance(c, 2, rng);
  OracleProblem op = oracle_problem(c, inst);
  op.settings.max_iterations = 300;
  const OracleResult r = solve_oracle(op);
  EXPECT_TRUE(r.heuristic);
  EXPECT_GE(r.objective, 0.0);
}

TEST(Oracle, InfeasibleFlagged) {
  const Grid1D g(8);
  const TorusFn2D f = TorusFn2D::monomial(g, g, -1, -1);
  const TorusFn2D gg = TorusFn2D::monomial(g, g, 1, 1);
  const OracleProblem op = make_oracle_problem(f, gg, f - gg, Weight2D::constant(g, g, 1.0),
                                               Weight2D::constant(g, g, 1.0), SpectralCone::p_cone(),
                                               SpectralCone::p_cone(), 1.0, 2.0);
  EXPECT_FALSE(solve_oracle(op).feasible);
}

TEST(Oracle, ZeroNormRejected) {
  const Grid1D g(8);
  const TorusFn2D z = TorusFn2D::constant(g, g, 0.0);
  const TorusFn2D one = TorusFn2D::constant(g, g, 1.0);
  const OracleProblem op = make_oracle_problem(one, z, one, Weight2D::constant(g, g, 1.0),
                                               Weight2D::constant(g, g, 1.0), SpectralCone::p_cone(),
                                               SpectralCone::p_cone(), 1.0, 2.0);
  EXPECT_THROW(solve_oracle(op), InputError);
}

TEST(GridNorm, Values) {
  const std::vector<cplx> x{1.0, -2.0, cplx(0, 2), 1.0};
  const std::vector<double> w{1.0, 1.0, 2.0, 1.0};
  EXPECT_NEAR(grid_norm(x, w, 1.0), (1 + 2 + 4 + 1) / 4.0, 1e-15);
  EXPECT_NEAR(grid_norm(x, w, std::numeric_limits<double>::infinity()), 2.0, 1e-15);
}
