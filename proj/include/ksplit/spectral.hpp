#pragma once

// Fourier-multiplier projectors and transforms on T and T^2: conjugation
// (Hilbert transform), Riesz projection, projections onto spectral cones and
// their versions framed by a nonvanishing multiplier.

#include <string>
#include <string_view>

#include "ksplit/torus.hpp"

namespace ksplit {

/// Catalogue of frequency regions for pairs (m, k): m is the z1 frequency,
/// k the z2 frequency. N contains 0.
enum class ConeKind {
  kFull,        // Z x Z
  kRightHalf,   // m >= 0
  kTopHalf,     // k >= 0
  kQuadrant,    // N x N
  kUnion,       // N x Z  u  Z x N   (range of P)
  kLowerStrict  // k <= -1            (range of P2)
};

class SpectralCone {
 public:
  constexpr SpectralCone(ConeKind kind, bool complement = false)
      : kind_(kind), complement_(complement) {}

  static constexpr SpectralCone full() { return {ConeKind::kFull}; }
  /// The projector P: annihilates (Z\N) x (Z\N).
  static constexpr SpectralCone p_cone() { return {ConeKind::kUnion}; }
  /// The projector P2: keeps strictly negative second frequencies.
  static constexpr SpectralCone p2_cone() { return {ConeKind::kLowerStrict}; }
  static constexpr SpectralCone hardy() { return {ConeKind::kQuadrant}; }

  bool contains(int m, int k) const;
  SpectralCone complement() const { return {kind_, !complement_}; }
  ConeKind kind() const { return kind_; }
  bool is_complement() const { return complement_; }
  std::string name() const;
  /// Parses names produced by name(), e.g. "union" or "~quadrant".
  static SpectralCone parse(std::string_view name);

  bool operator==(const SpectralCone&) const = default;

 private:
  ConeKind kind_;
  bool complement_;
};

/// Conjugate function: multiplier -i sign(m), sign(0) = 0.
TorusFn1D hilbert(const TorusFn1D& f);
/// Keeps m >= 0.
TorusFn1D riesz(const TorusFn1D& f);
/// Keeps m <= -1 (the 1-D action of P2 on a fiber).
TorusFn1D anti_riesz(const TorusFn1D& f);

/// Conjugation acting in z1 for every fixed z2.
TorusFn2D hilbert_z1(const TorusFn2D& f);
/// Riesz projection acting in z1 (keeps m >= 0).
TorusFn2D riesz_z1(const TorusFn2D& f);

TorusFn2D project_cone(const TorusFn2D& f, SpectralCone cone);

/// u^{-1} * project_cone(u f). Throws InputError if u vanishes on the grid.
TorusFn2D framed_project(const TorusFn2D& f, const TorusFn2D& frame,
                         SpectralCone cone);
TorusFn2D framed_project(const TorusFn2D& f, const Weight2D& frame,
                         SpectralCone cone);
/// 1-D framed projection onto negative frequencies: u^{-1}(I - R)(u f).
TorusFn1D framed_anti_riesz(const TorusFn1D& f, std::span<const double> frame);

struct Membership {
  bool member = true;
  /// max |c| outside the cone divided by max |c| overall.
  double leakage = 0.0;
};

Membership membership(const TorusFn2D& f, SpectralCone cone, double tol);
/// Membership of u f in the cone (the framed subspace).
Membership framed_membership(const TorusFn2D& f, const Weight2D& frame,
                             SpectralCone cone, double tol);

/// Negative-frequency leakage of a 1-D function (relative).
double analytic_leakage(const TorusFn1D& f);
/// Leakage of the m < 0 part of a 2-D function (non-analyticity in z1).
double analytic_leakage_z1(const TorusFn2D& f);

/// Weak-type tail measurement for one f: e = {|Qf| > threshold} under the
/// fiber measure nu = w mu, compared against C(alpha) A^alpha |f|^alpha
/// nu(e)^{1-alpha} with A the distributional weak-(1,1) quotient of this f.
struct WeakTail {
  double lhs = 0.0;          // int_e |Qf|^alpha dnu
  double weak_quotient = 0;  // sup_t t nu(|Qf| > t) / |f|_{L1(nu)}
  double nu_e = 0.0;
  double f_norm = 0.0;
  double c_alpha = 0.0;      // 1 / (1 - alpha)
  double rhs = 0.0;          // c_alpha A^alpha |f|^alpha nu(e)^{1-alpha}
};

/// Q is P2 framed by `frame` acting on the fiber f.
WeakTail weak_tail_p2(const TorusFn1D& f, std::span<const double> frame,
                      const Weight1D& w, double threshold, double alpha);

}  // namespace ksplit
