#pragma once

// Discrete model of T and T^2: uniform grids with normalized counting
// measure, trigonometric spectra in the symmetric band -n/2..n/2-1, and the
// grid function types every other module works with.

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ksplit/fft.hpp"

namespace ksplit {

/// Thrown when an argument violates an operation's precondition.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical construction cannot meet its contract.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Grid1D {
 public:
  /// n must be a power of two, n >= 8.
  explicit Grid1D(int n);

  int size() const { return n_; }
  double angle(int k) const;
  /// Quadrature weight of one point (mu(T) = 1).
  double cell() const { return 1.0 / n_; }
  int min_frequency() const { return -n_ / 2; }
  int max_frequency() const { return n_ / 2 - 1; }

  bool operator==(const Grid1D&) const = default;

 private:
  int n_;
};

bool is_power_of_two(int n);

namespace detail {
struct SpectrumCache {
  std::once_flag once;
  std::vector<cplx> data;
};
}  // namespace detail

class TorusFn1D {
 public:
  TorusFn1D(Grid1D grid, std::vector<cplx> values);
  /// Coefficients in FFT order (index fft::index_of(m, n) holds c_m).
  static TorusFn1D from_spectrum(Grid1D grid, std::vector<cplx> coefficients);
  static TorusFn1D constant(Grid1D grid, cplx value);
  /// z^m sampled on the grid; m must lie in the band.
  static TorusFn1D monomial(Grid1D grid, int m, cplx scale = 1.0);
  static TorusFn1D from_function(Grid1D grid,
                                 const std::function<cplx(double)>& fn);

  const Grid1D& grid() const { return grid_; }
  int size() const { return grid_.size(); }
  std::span<const cplx> values() const { return values_; }
  const cplx& operator[](int k) const { return values_[k]; }

  /// Cached spectrum, FFT order. Throws InputError on non-finite values.
  const std::vector<cplx>& spectrum() const;
  /// Coefficient of z^m, m in -n/2..n/2-1.
  cplx coefficient(int m) const;
  cplx mean() const { return coefficient(0); }

  /// Largest |value|.
  double sup_abs() const;
  std::vector<double> abs() const;

 private:
  Grid1D grid_;
  std::vector<cplx> values_;
  std::shared_ptr<detail::SpectrumCache> cache_;
};

class TorusFn2D {
 public:
  /// values row-major: index i1 * n2 + i2, i1 runs over the z1 grid.
  TorusFn2D(Grid1D grid1, Grid1D grid2, std::vector<cplx> values);
  static TorusFn2D from_spectrum(Grid1D grid1, Grid1D grid2,
                                 std::vector<cplx> coefficients);
  static TorusFn2D constant(Grid1D grid1, Grid1D grid2, cplx value);
  /// z1^m z2^k.
  static TorusFn2D monomial(Grid1D grid1, Grid1D grid2, int m, int k,
                            cplx scale = 1.0);
  static TorusFn2D from_function(
      Grid1D grid1, Grid1D grid2,
      const std::function<cplx(double, double)>& fn);

  const Grid1D& grid1() const { return grid1_; }
  const Grid1D& grid2() const { return grid2_; }
  int n1() const { return grid1_.size(); }
  int n2() const { return grid2_.size(); }
  size_t size() const { return values_.size(); }
  std::span<const cplx> values() const { return values_; }
  const cplx& at(int i1, int i2) const {
    return values_[static_cast<size_t>(i1) * n2() + i2];
  }

  const std::vector<cplx>& spectrum() const;
  /// Coefficient of z1^m z2^k.
  cplx coefficient(int m, int k) const;

  /// Fiber at fixed z1 = grid1.angle(i1), as a function of z2.
  TorusFn1D fiber_z2(int i1) const;
  /// Fiber at fixed z2 = grid2.angle(i2), as a function of z1.
  TorusFn1D fiber_z1(int i2) const;

  double sup_abs() const;

 private:
  Grid1D grid1_;
  Grid1D grid2_;
  std::vector<cplx> values_;
  std::shared_ptr<detail::SpectrumCache> cache_;
};

// Pointwise algebra.
TorusFn1D operator+(const TorusFn1D& a, const TorusFn1D& b);
TorusFn1D operator-(const TorusFn1D& a, const TorusFn1D& b);
TorusFn1D operator*(const TorusFn1D& a, const TorusFn1D& b);
TorusFn1D operator*(cplx s, const TorusFn1D& a);
TorusFn2D operator+(const TorusFn2D& a, const TorusFn2D& b);
TorusFn2D operator-(const TorusFn2D& a, const TorusFn2D& b);
TorusFn2D operator*(const TorusFn2D& a, const TorusFn2D& b);
TorusFn2D operator*(cplx s, const TorusFn2D& a);

/// Memo of measured condition constants keyed by a descriptive string.
/// Shared between copies of the weight that owns it.
class ConstantCache {
 public:
  std::optional<double> find(const std::string& key) const;
  void store(const std::string& key, double value);
  size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, double> entries_;
};

/// Strictly positive real function on the circle grid.
class Weight1D {
 public:
  Weight1D(Grid1D grid, std::vector<double> values);
  static Weight1D constant(Grid1D grid, double value);
  static Weight1D from_function(Grid1D grid,
                                const std::function<double(double)>& fn);

  const Grid1D& grid() const { return grid_; }
  int size() const { return grid_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](int k) const { return values_[k]; }
  double min() const;
  double max() const;
  /// Mean of log w; always finite on a grid, recorded for completeness.
  double log_integral() const;
  TorusFn1D as_function() const;
  ConstantCache& cache() const { return *cache_; }

 private:
  Grid1D grid_;
  std::vector<double> values_;
  std::shared_ptr<ConstantCache> cache_;
};

/// Strictly positive real function on the T^2 grid, row-major like TorusFn2D.
class Weight2D {
 public:
  Weight2D(Grid1D grid1, Grid1D grid2, std::vector<double> values);
  static Weight2D constant(Grid1D grid1, Grid1D grid2, double value);
  static Weight2D from_function(
      Grid1D grid1, Grid1D grid2,
      const std::function<double(double, double)>& fn);
  /// a(z1) * b(z2).
  static Weight2D separating(const Weight1D& a, const Weight1D& b);

  const Grid1D& grid1() const { return grid1_; }
  const Grid1D& grid2() const { return grid2_; }
  int n1() const { return grid1_.size(); }
  int n2() const { return grid2_.size(); }
  std::span<const double> values() const { return values_; }
  double at(int i1, int i2) const {
    return values_[static_cast<size_t>(i1) * n2() + i2];
  }
  double min() const;
  double max() const;
  Weight1D fiber_z2(int i1) const;
  Weight1D fiber_z1(int i2) const;
  TorusFn2D as_function() const;
  ConstantCache& cache() const { return *cache_; }

 private:
  Grid1D grid1_;
  Grid1D grid2_;
  std::vector<double> values_;
  std::shared_ptr<ConstantCache> cache_;
};

/// Pointwise w^e.
Weight1D pow(const Weight1D& w, double e);
Weight2D pow(const Weight2D& w, double e);
Weight1D operator*(const Weight1D& a, const Weight1D& b);
Weight2D operator*(const Weight2D& a, const Weight2D& b);
Weight2D operator/(const Weight2D& a, const Weight2D& b);

/// Spectrum of f; same as f.spectrum(), provided for symmetry.
std::vector<cplx> to_spectrum(const TorusFn1D& f);
std::vector<cplx> to_spectrum(const TorusFn2D& f);

/// Multiplies the spectrum by rho^{|m|}; 0 <= rho < 1.
TorusFn1D poisson_convolve(const TorusFn1D& f, double rho);
/// Poisson smoothing acting in z1 only (every z2 held fixed).
TorusFn2D poisson_convolve_z1(const TorusFn2D& f, double rho);

/// (sum |f|^s w / n)^{1/s} for s < inf; max |f| / w for s = inf.
double weighted_norm(const TorusFn1D& f, const Weight1D& w, double s);
double weighted_norm(const TorusFn2D& f, const Weight2D& w, double s);
/// Unweighted L^s(mu) norm.
double lebesgue_norm(const TorusFn1D& f, double s);
double lebesgue_norm(const TorusFn2D& f, double s);

/// Largest |c| over frequencies selected by `outside` relative to max |c|;
/// 0 for the zero function.
double relative_leakage_1d(const TorusFn1D& f,
                           const std::function<bool(int)>& outside);

}  // namespace ksplit
