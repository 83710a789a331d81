#pragma once

// Seeded instance generators and the batch experiments built on them:
// K-constant sweeps over weight families and the Poisson-smoothing norm check
// for analytic polynomials.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ksplit/oracle.hpp"
#include "ksplit/spectral.hpp"
#include "ksplit/torus.hpp"

namespace ksplit {

using Rng = std::mt19937_64;

/// Sum over |m|, |k| <= degree of c_{mk} z1^m z2^k with complex normal
/// coefficients scaled by exp(-(|m| + |k|) / degree). Coefficients are drawn
/// in a fixed frequency order, so the same seed gives the same polynomial on
/// every grid.
TorusFn2D random_trig_polynomial(const Grid1D& g1, const Grid1D& g2, int degree, Rng& rng);
TorusFn1D random_trig_polynomial(const Grid1D& g, int degree, Rng& rng);
/// Analytic polynomial sum_{m=0}^{degree} c_m z^m, complex normal c_m.
TorusFn1D random_analytic_polynomial(const Grid1D& g, int degree, Rng& rng);
/// exp(P) with P a real trigonometric polynomial of the given degree and
/// sup |P| <= amplitude.
Weight1D random_smooth_weight(const Grid1D& g, int degree, double amplitude, Rng& rng);

/// Description of a couple (X1, X2) = (L^r(weight1), L^p(weight2)) with
/// subspaces Y_i = { x : frame x has spectrum in cone_i }.
struct CoupleSpec {
  Weight2D weight1, weight2;
  double r = 1.0, p = 2.0;
  SpectralCone cone1 = SpectralCone::p_cone();
  SpectralCone cone2 = SpectralCone::p_cone();
  std::optional<Weight2D> frame;
};

struct Instance {
  TorusFn2D f, g, h;
  double A = 0.0, B = 0.0;
};

/// Draws f = g + h with f in Y1 + Y2, |g|_X1 = 1 and |h|_X2 = 1: g is a
/// random polynomial with a reduced component outside Y1, h is a random
/// element of Y2 minus that component. `spike` adds a bump of the given
/// relative amplitude near z2 = 1 to the random polynomial behind g.
Instance make_instance(const CoupleSpec& couple, int degree, Rng& rng, double spike = 0.0);

/// Oracle problem for an instance of a couple.
OracleProblem oracle_problem(const CoupleSpec& couple, const Instance& inst);

struct SweepSpec {
  std::string family = "power";
  std::vector<double> params;
  double r = 1.0;
  double p = 2.0;
  int trials = 50;
  int n = 32;
  std::uint64_t seed = 1;
  /// "hardy": (H^r(w1), H^p(w2)) with w1 = 1 and w2 the family weight.
  /// "inf": predual of (L_p(w1), L_inf(w2)) with w1 = 1, w2 the family
  /// weight; also runs the constructive splitter.
  std::string couple = "hardy";
  /// Power/exp-cos weights: 0 radial in (t1, t2), 1 or 2 along that axis only.
  int axis = 0;
  int degree = 4;
  double spike = 0.0;
  OracleSettings oracle;
};

struct SweepRow {
  std::string family;
  double param = 0.0;
  double r = 0.0, p = 0.0;
  int n = 0;
  int trials = 0;
  double oracle_max = 0.0;
  std::optional<double> constructive_max;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
};

/// Rows in the order of spec.params. Trial t of every parameter uses the
/// seed spec.seed + t.
std::vector<SweepRow> kconstant_sweep(const SweepSpec& spec);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

struct HardyNormPair {
  double boundary = 0.0;
  double smoothed_sup = 0.0;
  double argmax_rho = 0.0;
};

/// Boundary L^r(w) norm of f against sup over rho of the norm of its Poisson
/// smoothing; w is normalized to unit mass first.
HardyNormPair re_hardy_norm(const TorusFn1D& f, const Weight1D& w, double r,
                            const std::vector<double>& rho_grid);
std::vector<double> default_rho_grid();

struct LemmaRow {
  int trial = 0;
  int degree = 0;
  double boundary = 0.0;
  double smoothed_sup = 0.0;
  double ratio = 0.0;
};

struct LemmaSpec {
  std::string weight = "power:0.3";
  double r = 0.5;
  int n = 1024;
  int trials = 50;
  int max_degree = 16;
  std::uint64_t seed = 1;
};

std::vector<LemmaRow> verify_lemma(const LemmaSpec& spec);
void write_lemma_csv(std::ostream& os, const LemmaSpec& spec,
                     const std::vector<LemmaRow>& rows);

/// Round-trippable decimal for CSV and reports.
std::string format_double(double x);

}  // namespace ksplit
