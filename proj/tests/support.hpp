#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <span>
#include <vector>

#include "ksplit/torus.hpp"

namespace ksplit::testing {

inline std::vector<cplx> random_values(size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::vector<cplx> v(n);
  for (auto& x : v) {
    const double re = nd(rng);
    x = cplx(re, nd(rng));
  }
  return v;
}

inline TorusFn1D random_fn(int n, std::mt19937_64& rng) {
  return TorusFn1D(Grid1D(n), random_values(n, rng));
}

inline TorusFn2D random_fn(int n1, int n2, std::mt19937_64& rng) {
  return TorusFn2D(Grid1D(n1), Grid1D(n2), random_values(static_cast<size_t>(n1) * n2, rng));
}

inline Weight1D random_weight(int n, std::mt19937_64& rng, double spread = 1.0) {
  std::uniform_real_distribution<double> u(-spread, spread);
  std::vector<double> w(n);
  for (auto& x : w) x = std::exp(u(rng));
  return Weight1D(Grid1D(n), std::move(w));
}

inline double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
  double e = 0.0;
  for (size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

inline double max_abs(std::span<const cplx> a) {
  double e = 0.0;
  for (const cplx& x : a) e = std::max(e, std::abs(x));
  return e;
}

inline double rel_diff(std::span<const cplx> a, std::span<const cplx> b) {
  const double s = std::max(max_abs(a), max_abs(b));
  return s > 0.0 ? max_abs_diff(a, b) / s : 0.0;
}

// Reference coefficients by the defining sum.
inline cplx direct_coefficient(const TorusFn1D& f, int m) {
  const int n = f.size();
  cplx s = 0.0;
  for (int x = 0; x < n; ++x) s += f[x] * std::polar(1.0, -2.0 * M_PI * m * x / n);
  return s / static_cast<double>(n);
}

inline cplx direct_coefficient(const TorusFn2D& f, int m, int k) {
  const int n1 = f.n1(), n2 = f.n2();
  cplx s = 0.0;
  for (int a = 0; a < n1; ++a)
    for (int b = 0; b < n2; ++b)
      s += f.at(a, b) * std::polar(1.0, -2.0 * M_PI * (static_cast<double>(m) * a / n1 +
                                                      static_cast<double>(k) * b / n2));
  return s / static_cast<double>(n1 * n2);
}

}  // namespace ksplit::testing
