#pragma once

// Outer functions with prescribed grid modulus, inner-outer factorization,
// and analytic partitions of unity whose atoms follow the dyadic level sets
// of a weight.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ksplit/torus.hpp"

namespace ksplit {

struct OuterFn {
  TorusFn1D values;
  Weight1D modulus;
  /// Negative-frequency spectral leakage of `values`, relative.
  double leakage = 0.0;
};

/// The analytic function F with Re F = log w on the grid: coefficients c_0,
/// 2c_m for 0 < m < n/2, and the Nyquist term c_{-n/2} (-1)^k, which is
/// real on the grid.
TorusFn1D outer_log(const Weight1D& w);

/// exp(outer_log(w)); |values| = w up to rounding.
OuterFn outer_function(const Weight1D& w);

struct InnerOuter {
  TorusFn1D inner;
  OuterFn outer;
};

/// outer = outer_function(max(|f|, eps * max|f|)), inner = f / outer.
/// Throws InputError for f = 0.
InnerOuter inner_outer(const TorusFn1D& f, double eps = 1e-12);

struct PartitionAtom {
  int level = 0;
  bool empty = false;
  TorusFn1D phi;
  TorusFn1D theta;
  OuterFn psi;
  /// psi^{power/2}, the factor multiplied into the fibers by the splitter.
  TorusFn1D psi_half;
};

struct Partition {
  std::vector<PartitionAtom> atoms;  // ascending level jmin..jmax
  Weight1D weight;
  int jmin = 0;
  int jmax = 0;
  int power = 8;
  /// max_j sup |phi_j|^{1/power} a 2^{-j}
  double c_lower = 0.0;
  /// sup sum_j |phi_j|^{1/power} 2^j / a
  double c_upper = 0.0;
  /// sup sum_j |phi_j|^{1/power}
  double c_sum = 0.0;
  /// sup |sum_j phi_j - 1|
  double sum_error = 0.0;
  /// max_j analytic leakage of phi_j
  double max_leakage = 0.0;
  /// max_j sup | |theta_j| - 1 | over points where |phi_j| >= eps max|phi_j|
  double inner_defect = 0.0;
};

struct LevelRange {
  int jmin;
  int jmax;
};

/// floor(log2 min a) - 1 and ceil(log2 max a).
LevelRange default_levels(const Weight1D& a);

/// Telescoping construction: V_j is the Riesz projection of the outer
/// function with modulus min(1, (2^j / a)^power), V_jmin = 0, V_jmax = 1, and
/// phi_j = V_j - V_{j-1}. Throws InputError unless 2^jmin <= min a and
/// 2^jmax >= max a.
Partition build_partition(const Weight1D& a, int jmin, int jmax, int power = 8,
                          double eps = 1e-12);
Partition build_partition(const Weight1D& a, int power = 8);

/// Manifest as `key: value` lines followed by one line per atom.
void write_partition_manifest(std::ostream& os, const Partition& partition);
/// manifest.txt plus phi_<j>.torus, theta_<j>.torus, psi_<j>.torus.
void save_partition(const Partition& partition, const std::filesystem::path& dir);

}  // namespace ksplit
