#pragma once

// Muckenhoupt-type condition constants measured over finite arc families,
// BMO norms of logarithms, and the pointwise weight transforms used when
// passing between dual couples, single-weight frames, and interpolated
// (glued) couples.

#include <optional>
#include <string>
#include <vector>

#include "ksplit/kernels.hpp"
#include "ksplit/torus.hpp"

namespace ksplit {

/// Grid indices start, start+1, ..., start+length-1 taken mod n.
struct Arc {
  int start = 0;
  int length = 1;
};

class ArcFamily {
 public:
  ArcFamily(int n, std::vector<Arc> arcs, std::string name = "custom");

  /// All dyadic arcs of lengths n, n/2, ..., 4 at aligned offsets plus the
  /// same arcs shifted by half their length.
  static ArcFamily shifted_dyadic(int n, int min_length = 4);
  /// Every dyadic arc of every length n, ..., 1, aligned only.
  static ArcFamily aligned_dyadic(int n, int min_length = 1);
  /// Every contiguous arc (O(n^2) arcs); used by tests as a reference.
  static ArcFamily all_arcs(int n, int min_length = 1);

  int grid_size() const { return n_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  size_t size() const { return arcs_.size(); }
  const std::string& name() const { return name_; }

 private:
  int n_;
  std::vector<Arc> arcs_;
  std::string name_;
};

/// max over arcs of avg(w) * avg(w^{1/(1-p)})^{p-1}; p > 1.
double ap_constant(const Weight1D& w, double p, const ArcFamily& fam);
/// max over arcs B and x in B of avg_B(w) / w(x).
double a1_constant(const Weight1D& w, const ArcFamily& fam);
/// max over arcs of (avg w^{1+delta})^{1/(1+delta)} / avg w.
double reverse_holder_constant(const Weight1D& w, double delta,
                               const ArcFamily& fam);
/// max over arcs of avg |phi - avg phi| (L^1 mean oscillation).
double bmo_norm(std::span<const double> phi, const ArcFamily& fam);
/// Rejects functions with a nonzero imaginary part.
double bmo_norm(const TorusFn1D& phi, const ArcFamily& fam);
/// BMO norm of log w.
double bmo_log_norm(const Weight1D& w, const ArcFamily& fam);

// Same functionals on T^2 over rectangles B1 x B2 from two arc families.
double ap_constant(const Weight2D& w, double p, const ArcFamily& fam1,
                   const ArcFamily& fam2);
double a1_constant(const Weight2D& w, const ArcFamily& fam1,
                   const ArcFamily& fam2);
double reverse_holder_constant(const Weight2D& w, double delta,
                               const ArcFamily& fam1, const ArcFamily& fam2);

enum class Condition { kAp, kA1, kReverseHolder, kBmoLog };

/// The variable that runs along each fiber. kSecond: fibers w(z1, .), the
/// maximum is taken over z1.
enum class FiberVariable { kFirst, kSecond };

/// max over fibers of the 1-D constant; `exponent` is p for A_p and delta
/// for the reverse Hoelder condition (ignored otherwise). Uses the shifted
/// dyadic family on the fiber grid.
double uniform_fiber_constant(const Weight2D& w, FiberVariable along,
                              Condition condition, double exponent = 2.0);

std::string condition_name(Condition c);

struct DualWeights {
  double q = 2.0;
  // First space of the predual couple: (b2, w2, a2).
  Weight1D b1;
  Weight2D w1;
  Weight1D a1;
  // Second space: (b1^{1-q}, w1^{1-q}, a1^{1-q}).
  Weight1D b2;
  Weight2D w2;
  Weight1D a2;
};

/// Weights of the predual couple of (L_p(b1 w1 a1), L_inf(b2 w2 a2)),
/// b_i functions of z1, a_i of z2; 1/p + 1/q = 1.
DualWeights dual_weights(const Weight2D& w1, const Weight2D& w2,
                         const Weight1D& a1, const Weight1D& a2,
                         const Weight1D& b1, const Weight1D& b2, double p);

struct SingleWeight {
  Weight2D w;  // w1^{q/(q-1)} / w2^{1/(q-1)}
  Weight2D u;  // (w1 / w2)^{1/(q-1)}
};

SingleWeight single_weight_reduction(const Weight2D& w1, const Weight2D& w2,
                                     double q);

/// w1 * w2^{theta/(theta-1)}, to be paired with exponent 1/(1-theta).
Weight2D glue_weight(const Weight2D& w1, const Weight2D& w2, double theta);
inline double glue_exponent(double theta) { return 1.0 / (1.0 - theta); }

struct HypothesisEntry {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = true;
  size_t family_size = 0;
  std::string note;
};

struct HypothesisReport {
  std::string theorem;
  std::vector<HypothesisEntry> entries;
  bool all_pass() const;
  const HypothesisEntry& entry(const std::string& name) const;
};

struct HypothesisInputs {
  std::optional<Weight2D> w1;
  std::optional<Weight2D> w2;
  std::optional<Weight1D> a1, a2;  // functions of z2
  std::optional<Weight1D> b1, b2;  // functions of z1
  double p = 2.0;
  double r = 1.0;
  /// Exponents tried when a condition only asks for "some" A_s.
  std::vector<double> exponent_sweep{1.5, 2.0, 4.0, 8.0, 16.0};
  double rh_delta = 1.0;
};

struct HypothesisThresholds {
  double ap = 50.0;
  double a1 = 50.0;
  double reverse_holder = 10.0;
  double bmo = 5.0;
};

/// theorem_id in {rght, lft, one_naib, inf_neib_all_q, glue}. Throws
/// InputError for unknown ids or missing weights.
HypothesisReport hypothesis_check(const std::string& theorem_id,
                                  const HypothesisInputs& in,
                                  const HypothesisThresholds& thresholds = {});

}  // namespace ksplit
