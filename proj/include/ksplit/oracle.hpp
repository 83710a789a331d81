#pragma once

// Direct numerical minimization of the splitting constants: given f = g + h,
// search over all admissible g' (with h' = f - g') for the smallest
// max(|g'|_X1 / |g|_X1, |h'|_X2 / |h|_X2).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ksplit/spectral.hpp"
#include "ksplit/torus.hpp"

namespace ksplit {

struct OracleSettings {
  int max_iterations = 3000;
  double tolerance = 1e-12;
  /// Extra random starts for the nonconvex (r < 1) solver.
  int restarts = 4;
  std::uint64_t seed = 1;
};

/// Values are row-major n1 x n2 grids; n1 = 1 describes a one-variable
/// problem on the z2 circle, and cones are then evaluated at m = 0.
/// X1 = L^r(weight1), X2 = L^p(weight2); r, p = infinity means the sup norm
/// max |x| / weight. Y_i = { x : frame * x has spectrum in cone_i }.
struct OracleProblem {
  int n1 = 1;
  int n2 = 8;
  std::vector<cplx> f, g, h;
  std::vector<double> weight1, weight2;
  std::vector<double> frame;  // empty: frame = 1
  SpectralCone cone1 = SpectralCone::p_cone();
  SpectralCone cone2 = SpectralCone::p_cone();
  double r = 1.0;
  double p = 2.0;
  /// FFT-order mask restricting the free coefficients further; empty: all.
  std::vector<char> free_mask;
  /// Candidate g' values (feasible points) the solver starts from.
  std::vector<std::vector<cplx>> warm_starts;
  OracleSettings settings;

  size_t size() const { return static_cast<size_t>(n1) * n2; }
};

OracleProblem make_oracle_problem(const TorusFn2D& f, const TorusFn2D& g,
                                  const TorusFn2D& h, const Weight2D& weight1,
                                  const Weight2D& weight2, SpectralCone cone1,
                                  SpectralCone cone2, double r, double p);
OracleProblem make_oracle_problem(const TorusFn1D& f, const TorusFn1D& g,
                                  const TorusFn1D& h, const Weight1D& weight1,
                                  const Weight1D& weight2, SpectralCone cone1,
                                  SpectralCone cone2, double r, double p);

struct OracleResult {
  std::vector<cplx> g_prime, h_prime;
  double c1 = 0.0;
  double c2 = 0.0;
  double objective = 0.0;
  bool converged = false;
  /// False when f has spectrum outside cone1 u cone2 (relative 1e-8).
  bool feasible = true;
  bool heuristic = false;
  int iterations = 0;
  double leakage_g = 0.0;
  double leakage_h = 0.0;
  double decomposition_error = 0.0;
  std::string method;
};

/// r, p in [1, inf]. r = p = 2 uses the exact least-squares Pareto solve;
/// otherwise smoothed descent with continuation, keeping the best exact
/// iterate. Throws InputError when g or h has zero norm.
OracleResult solve_convex(const OracleProblem& prob);
/// 0 < r < 1 <= p: multi-start smoothed descent; result labeled heuristic.
OracleResult solve_heuristic(const OracleProblem& prob);
/// Dispatches on r.
OracleResult solve_oracle(const OracleProblem& prob);

/// max(|g'|/|g|, |h'|/|h|) for h' = f - g', with both ratios.
struct OracleObjective {
  double c1, c2, value;
};
OracleObjective oracle_objective(const OracleProblem& prob,
                                 std::span<const cplx> g_prime);

/// Norm used for X1/X2: (sum |x|^s w / N)^{1/s}, or max |x| / w.
double grid_norm(std::span<const cplx> x, std::span<const double> w, double s);

}  // namespace ksplit
