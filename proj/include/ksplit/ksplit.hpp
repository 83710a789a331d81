#pragma once

// Constructive splitting: given f = g + h in the framed subspace sum, build
// f = g' + h' with g', h' in the subspaces and norms controlled by those of
// g and h. Includes the per-level building blocks (majorants, corrector
// weights, level functions, correctors), the fiberwise one-variable step and
// the driver for the three intermediate couples of the gluing argument.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ksplit/analytic.hpp"
#include "ksplit/czd.hpp"
#include "ksplit/kernels.hpp"
#include "ksplit/oracle.hpp"
#include "ksplit/spectral.hpp"
#include "ksplit/torus.hpp"
#include "ksplit/weights.hpp"

namespace ksplit {

struct SplitConfig {
  /// Exponent of the L_p end of the primal couple; the predual couple pairs
  /// L_1 with L_q, 1/p + 1/q = 1.
  double p = 2.0;
  int k = 2;
  /// 0 selects floor(p) + 1.
  int s = 0;
  std::optional<int> jmin, jmax;
  int partition_power = 8;
  double majorant_delta = 0.5;
  double majorant_floor = 1e-12;
  /// Poisson radius for the corrector weight, shrunk by gimel_shrink on
  /// each retry.
  double gimel_rho = 0.9;
  double gimel_shrink = 0.5;
  double gimel_cap = 1e3;
  int gimel_retries = 8;
  double tol_decomposition = 1e-8;
  double tol_membership = 1e-6;
  kernels::Exec exec = kernels::default_exec();
  bool evaluate_hypotheses = true;

  double q() const { return p / (p - 1.0); }
  int s_eff() const;
  /// Throws InputError on p <= 1, k < 2, p / s >= 1 or a bad delta.
  void validate() const;
};

struct MajorantResult {
  std::vector<double> v;
  double bmo_log = 0.0;
};

/// v = M(y^delta)^{1/delta} + floor * max(y), with M the maximal operator
/// over the shifted dyadic family. y = 0 gives the constant `floor`.
MajorantResult majorant(std::span<const double> y, double delta, double floor = 1e-12);

/// Grid maximal function: max over arcs of the family containing x of avg y.
std::vector<double> maximal_function(std::span<const double> y, const ArcFamily& fam);

struct GimelResult {
  Weight2D value;
  /// sup |H_{z1}(value^{1/k})| / value^{1/k}
  double hilbert_ratio = 0.0;
  /// sup of value / (v w) and of (v w) / value
  double equivalence = 1.0;
  double rho = 0.0;
  int retries = 0;
};

/// Poisson smoothing of v(z1) w(z1, z2) in z1, clipped to [v w / 2, 2 v w].
/// Throws NumericalError when the Hilbert ratio stays above the cap.
GimelResult gimel(std::span<const double> v, const Weight2D& w, int k,
                  const SplitConfig& cfg = {});

/// lambda_j(z1) = v_j^p / (int |g psi_j| w dz2)^{p-1}; +infinity where the
/// integral vanishes. `psi_half` is psi_j^{power/2} as a function of z2.
std::vector<double> lambda_levels(const TorusFn2D& g, const TorusFn1D& psi_half,
                                  std::span<const double> v, const Weight2D& w,
                                  double p);

struct CorrectorResult {
  TorusFn2D phi;
  double sup_phi = 0.0;
  /// sup |Phi| |P2^u g1| / lambda
  double bound = 0.0;
  /// analytic-in-z1 leakage of Phi before and after projection
  double raw_leakage = 0.0;
  double leakage = 0.0;
  double sup_gamma = 1.0;
};

/// gamma = max(1, (|P2^u g1| / lambda)^{1/(ks)}), r = gimel^{1/k},
/// F = (r + iHr) / (r gamma + iH(r gamma)), Phi = 1 - (1 - F^{ks})^k, then
/// Riesz projection in z1 on the columns where gamma is not identically 1.
CorrectorResult correctors(const TorusFn2D& p2_g1, std::span<const double> lambda,
                           const Weight2D& gimel_weight, const SplitConfig& cfg);

/// Couple (L_1^P(b1 w1 a1), L_q^P(b2 w2 a2)); the b's depend on z1, the
/// a's on z2 and default to 1. f must lie in the P-subspace.
struct SplitProblem {
  TorusFn2D f, g, h;
  Weight2D w1, w2;
  std::optional<Weight1D> a1, a2, b1, b2;
};

struct LevelDiagnostics {
  int level = 0;
  double max_lambda_finite = 0.0;
  int active_fibers = 0;
  double sup_phi = 0.0;
  double corrector_bound = 0.0;
  double gimel_ratio = 0.0;
  double g0_lq_ratio = 0.0;
  double cz_good_ratio = 0.0;
  double cz_omega_ratio = 0.0;
  double majorant_bmo = 0.0;
};

struct SplitReport {
  TorusFn2D g_prime, h_prime;
  double A = 0.0, B = 0.0;
  double norm_g_prime = 0.0, norm_h_prime = 0.0;
  double C1 = 0.0, C2 = 0.0;
  double decomposition_error = 0.0;
  double leakage_g = 0.0;
  double leakage_h = 0.0;
  /// leakage of the assembled g' before the final projection
  double raw_leakage = 0.0;
  double input_leakage = 0.0;
  double input_mismatch = 0.0;
  Partition partition;
  std::vector<LevelDiagnostics> levels;
  double y_sum_ratio = 0.0;
  std::optional<HypothesisReport> hypotheses;
  std::vector<std::string> notes;
  bool warnings() const;
};

/// Core engine on the predual couple described by SplitProblem.
SplitReport split_predual(const SplitProblem& prob, const SplitConfig& cfg);

/// Starts from the primal couple (L_p(b1 w1 a1), L_inf(b2 w2 a2)): forms the
/// predual weights, checks the hypotheses on the primal weights, and splits
/// f = g + h in the predual couple.
struct InfProblem {
  TorusFn2D f, g, h;
  Weight2D w1, w2;
  std::optional<Weight1D> a1, a2, b1, b2;
};
SplitReport split_inf(const InfProblem& prob, const SplitConfig& cfg);

struct FiberwiseReport {
  TorusFn2D g_prime, h_prime;
  std::vector<double> fiber_c1, fiber_c2;
  double max_c1 = 0.0, max_c2 = 0.0;
  double decomposition_error = 0.0;
  double leakage_g = 0.0, leakage_h = 0.0;
  bool all_converged = true;
  bool heuristic = false;
  std::vector<std::string> notes;
};

/// One-variable splitting of every z1 fiber in the couple
/// (H^r(w1(z1, .)), H^p(w2(z1, .))) via the oracle.
FiberwiseReport split_fiberwise(const TorusFn2D& f, const TorusFn2D& g,
                                const TorusFn2D& h, const Weight2D& w1,
                                const Weight2D& w2, double r, double p,
                                const OracleSettings& settings = {});

struct CoupleReport {
  std::string name;
  double r = 1.0, p = 2.0;
  std::string method;
  double C1 = 0.0, C2 = 0.0;
  double objective = 0.0;
  double decomposition_error = 0.0;
  double leakage = 0.0;
};

struct GlueReport {
  std::vector<CoupleReport> couples;
  CoupleReport endpoint;
  HypothesisReport hypotheses;
  std::vector<std::string> notes;
};

/// theta strictly increasing in (0, 1), four values. Instances for each
/// couple are drawn from `seed`.
GlueReport glue_driver(const Weight2D& w1, const Weight2D& w2,
                       std::span<const double> theta, std::uint64_t seed,
                       const SplitConfig& cfg = {}, const OracleSettings& settings = {});

}  // namespace ksplit
