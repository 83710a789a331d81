#include "ksplit/torus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ksplit {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

Grid1D::Grid1D(int n) : n_(n) {
  if (n < 8 || !is_power_of_two(n))
    throw InputError("grid size must be a power of two >= 8, got " +
                     std::to_string(n));
}

double Grid1D::angle(int k) const {
  return 2.0 * std::numbers::pi * static_cast<double>(k) / n_;
}

namespace {

void check_finite(std::span<const cplx> values) {
  for (const auto& v : values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw InputError("non-finite grid value");
}

void require_same(const Grid1D& a, const Grid1D& b) {
  if (!(a == b)) throw InputError("grid mismatch");
}

}  // namespace

// ---------------------------------------------------------------- TorusFn1D

TorusFn1D::TorusFn1D(Grid1D grid, std::vector<cplx> values)
    : grid_(grid),
      values_(std::move(values)),
      cache_(std::make_shared<detail::SpectrumCache>()) {
  if (static_cast<int>(values_.size()) != grid_.size())
    throw InputError("value count does not match grid");
}

TorusFn1D TorusFn1D::from_spectrum(Grid1D grid, std::vector<cplx> coefficients) {
  if (static_cast<int>(coefficients.size()) != grid.size())
    throw InputError("coefficient index range does not match grid");
  std::vector<cplx> values(coefficients.size());
  fft::inverse(coefficients, values, 1, grid.size());
  return TorusFn1D(grid, std::move(values));
}

TorusFn1D TorusFn1D::constant(Grid1D grid, cplx value) {
  return TorusFn1D(grid, std::vector<cplx>(grid.size(), value));
}

TorusFn1D TorusFn1D::monomial(Grid1D grid, int m, cplx scale) {
  if (m < grid.min_frequency() || m > grid.max_frequency())
    throw InputError("frequency outside grid band");
  std::vector<cplx> values(grid.size());
  for (int k = 0; k < grid.size(); ++k)
    values[k] = scale * std::polar(1.0, m * grid.angle(k));
  return TorusFn1D(grid, std::move(values));
}

TorusFn1D TorusFn1D::from_function(Grid1D grid,
                                   const std::function<cplx(double)>& fn) {
  std::vector<cplx> values(grid.size());
  for (int k = 0; k < grid.size(); ++k) values[k] = fn(grid.angle(k));
  return TorusFn1D(grid, std::move(values));
}

const std::vector<cplx>& TorusFn1D::spectrum() const {
  std::call_once(cache_->once, [this] {
    check_finite(values_);
    cache_->data.resize(values_.size());
    fft::forward(values_, cache_->data, 1, grid_.size());
  });
  return cache_->data;
}

cplx TorusFn1D::coefficient(int m) const {
  if (m < grid_.min_frequency() || m > grid_.max_frequency())
    throw InputError("frequency outside grid band");
  return spectrum()[fft::index_of(m, size())];
}

double TorusFn1D::sup_abs() const {
  double s = 0.0;
  for (const auto& v : values_) s = std::max(s, std::abs(v));
  return s;
}

std::vector<double> TorusFn1D::abs() const {
  std::vector<double> out(values_.size());
  for (size_t i = 0; i < values_.size(); ++i) out[i] = std::abs(values_[i]);
  return out;
}

// ---------------------------------------------------------------- TorusFn2D

TorusFn2D::TorusFn2D(Grid1D grid1, Grid1D grid2, std::vector<cplx> values)
    : grid1_(grid1),
      grid2_(grid2),
      values_(std::move(values)),
      cache_(std::make_shared<detail::SpectrumCache>()) {
  if (values_.size() != static_cast<size_t>(grid1_.size()) * grid2_.size())
    throw InputError("value count does not match grid");
}

TorusFn2D TorusFn2D::from_spectrum(Grid1D grid1, Grid1D grid2,
                                   std::vector<cplx> coefficients) {
  if (coefficients.size() != static_cast<size_t>(grid1.size()) * grid2.size())
    throw InputError("coefficient index range does not match grid");
  std::vector<cplx> values(coefficients.size());
  fft::inverse(coefficients, values, grid1.size(), grid2.size());
  return TorusFn2D(grid1, grid2, std::move(values));
}

TorusFn2D TorusFn2D::constant(Grid1D grid1, Grid1D grid2, cplx value) {
  return TorusFn2D(grid1, grid2,
                   std::vector<cplx>(static_cast<size_t>(grid1.size()) *
                                         grid2.size(),
                                     value));
}

TorusFn2D TorusFn2D::monomial(Grid1D grid1, Grid1D grid2, int m, int k,
                              cplx scale) {
  if (m < grid1.min_frequency() || m > grid1.max_frequency() ||
      k < grid2.min_frequency() || k > grid2.max_frequency())
    throw InputError("frequency outside grid band");
  return from_function(grid1, grid2, [&](double t1, double t2) {
    return scale * std::polar(1.0, m * t1 + k * t2);
  });
}

TorusFn2D TorusFn2D::from_function(
    Grid1D grid1, Grid1D grid2, const std::function<cplx(double, double)>& fn) {
  std::vector<cplx> values(static_cast<size_t>(grid1.size()) * grid2.size());
  for (int i1 = 0; i1 < grid1.size(); ++i1)
    for (int i2 = 0; i2 < grid2.size(); ++i2)
      values[static_cast<size_t>(i1) * grid2.size() + i2] =
          fn(grid1.angle(i1), grid2.angle(i2));
  return TorusFn2D(grid1, grid2, std::move(values));
}

const std::vector<cplx>& TorusFn2D::spectrum() const {
  std::call_once(cache_->once, [this] {
    check_finite(values_);
    cache_->data.resize(values_.size());
    fft::forward(values_, cache_->data, n1(), n2());
  });
  return cache_->data;
}

cplx TorusFn2D::coefficient(int m, int k) const {
  if (m < grid1_.min_frequency() || m > grid1_.max_frequency() ||
      k < grid2_.min_frequency() || k > grid2_.max_frequency())
    throw InputError("frequency outside grid band");
  return spectrum()[static_cast<size_t>(fft::index_of(m, n1())) * n2() +
                    fft::index_of(k, n2())];
}

TorusFn1D TorusFn2D::fiber_z2(int i1) const {
  auto first = values_.begin() + static_cast<ptrdiff_t>(i1) * n2();
  return TorusFn1D(grid2_, std::vector<cplx>(first, first + n2()));
}

TorusFn1D TorusFn2D::fiber_z1(int i2) const {
  std::vector<cplx> v(n1());
  for (int i1 = 0; i1 < n1(); ++i1) v[i1] = at(i1, i2);
  return TorusFn1D(grid1_, std::move(v));
}

double TorusFn2D::sup_abs() const {
  double s = 0.0;
  for (const auto& v : values_) s = std::max(s, std::abs(v));
  return s;
}

// ---------------------------------------------------------------- algebra

namespace {

template <typename Op>
TorusFn1D zip(const TorusFn1D& a, const TorusFn1D& b, Op op) {
  require_same(a.grid(), b.grid());
  std::vector<cplx> out(a.size());
  for (int k = 0; k < a.size(); ++k) out[k] = op(a[k], b[k]);
  return TorusFn1D(a.grid(), std::move(out));
}

template <typename Op>
TorusFn2D zip(const TorusFn2D& a, const TorusFn2D& b, Op op) {
  require_same(a.grid1(), b.grid1());
  require_same(a.grid2(), b.grid2());
  std::vector<cplx> out(a.size());
  auto va = a.values();
  auto vb = b.values();
  for (size_t k = 0; k < out.size(); ++k) out[k] = op(va[k], vb[k]);
  return TorusFn2D(a.grid1(), a.grid2(), std::move(out));
}

}  // namespace

TorusFn1D operator+(const TorusFn1D& a, const TorusFn1D& b) {
  return zip(a, b, std::plus<cplx>());
}
TorusFn1D operator-(const TorusFn1D& a, const TorusFn1D& b) {
  return zip(a, b, std::minus<cplx>());
}
TorusFn1D operator*(const TorusFn1D& a, const TorusFn1D& b) {
  return zip(a, b, std::multiplies<cplx>());
}
TorusFn1D operator*(cplx s, const TorusFn1D& a) {
  std::vector<cplx> out(a.values().begin(), a.values().end());
  for (auto& v : out) v *= s;
  return TorusFn1D(a.grid(), std::move(out));
}
TorusFn2D operator+(const TorusFn2D& a, const TorusFn2D& b) {
  return zip(a, b, std::plus<cplx>());
}
TorusFn2D operator-(const TorusFn2D& a, const TorusFn2D& b) {
  return zip(a, b, std::minus<cplx>());
}
TorusFn2D operator*(const TorusFn2D& a, const TorusFn2D& b) {
  return zip(a, b, std::multiplies<cplx>());
}
TorusFn2D operator*(cplx s, const TorusFn2D& a) {
  std::vector<cplx> out(a.values().begin(), a.values().end());
  for (auto& v : out) v *= s;
  return TorusFn2D(a.grid1(), a.grid2(), std::move(out));
}

// ---------------------------------------------------------------- cache

std::optional<double> ConstantCache::find(const std::string& key) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ConstantCache::store(const std::string& key, double value) {
  std::lock_guard<std::mutex> lock(mutex_);
  entries_.emplace(key, value);
}

size_t ConstantCache::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return entries_.size();
}

// ---------------------------------------------------------------- weights

namespace {
void check_positive(std::span<const double> values) {
  for (double v : values)
    if (!(v > 0.0) || !std::isfinite(v))
      throw InputError("weight must be strictly positive and finite");
}
}  // namespace

Weight1D::Weight1D(Grid1D grid, std::vector<double> values)
    : grid_(grid),
      values_(std::move(values)),
      cache_(std::make_shared<ConstantCache>()) {
  if (static_cast<int>(values_.size()) != grid_.size())
    throw InputError("weight size does not match grid");
  check_positive(values_);
}

Weight1D Weight1D::constant(Grid1D grid, double value) {
  return Weight1D(grid, std::vector<double>(grid.size(), value));
}

Weight1D Weight1D::from_function(Grid1D grid,
                                 const std::function<double(double)>& fn) {
  std::vector<double> v(grid.size());
  for (int k = 0; k < grid.size(); ++k) v[k] = fn(grid.angle(k));
  return Weight1D(grid, std::move(v));
}

double Weight1D::min() const {
  return *std::min_element(values_.begin(), values_.end());
}
double Weight1D::max() const {
  return *std::max_element(values_.begin(), values_.end());
}
double Weight1D::log_integral() const {
  double s = 0.0;
  for (double v : values_) s += std::log(v);
  return s / size();
}
TorusFn1D Weight1D::as_function() const {
  return TorusFn1D(grid_, std::vector<cplx>(values_.begin(), values_.end()));
}

Weight2D::Weight2D(Grid1D grid1, Grid1D grid2, std::vector<double> values)
    : grid1_(grid1),
      grid2_(grid2),
      values_(std::move(values)),
      cache_(std::make_shared<ConstantCache>()) {
  if (values_.size() != static_cast<size_t>(grid1_.size()) * grid2_.size())
    throw InputError("weight size does not match grid");
  check_positive(values_);
}

Weight2D Weight2D::constant(Grid1D grid1, Grid1D grid2, double value) {
  return Weight2D(
      grid1, grid2,
      std::vector<double>(static_cast<size_t>(grid1.size()) * grid2.size(),
                          value));
}

Weight2D Weight2D::from_function(
    Grid1D grid1, Grid1D grid2,
    const std::function<double(double, double)>& fn) {
  std::vector<double> v(static_cast<size_t>(grid1.size()) * grid2.size());
  for (int i1 = 0; i1 < grid1.size(); ++i1)
    for (int i2 = 0; i2 < grid2.size(); ++i2)
      v[static_cast<size_t>(i1) * grid2.size() + i2] =
          fn(grid1.angle(i1), grid2.angle(i2));
  return Weight2D(grid1, grid2, std::move(v));
}

Weight2D Weight2D::separating(const Weight1D& a, const Weight1D& b) {
  std::vector<double> v(static_cast<size_t>(a.size()) * b.size());
  for (int i1 = 0; i1 < a.size(); ++i1)
    for (int i2 = 0; i2 < b.size(); ++i2)
      v[static_cast<size_t>(i1) * b.size() + i2] = a[i1] * b[i2];
  return Weight2D(a.grid(), b.grid(), std::move(v));
}

double Weight2D::min() const {
  return *std::min_element(values_.begin(), values_.end());
}
double Weight2D::max() const {
  return *std::max_element(values_.begin(), values_.end());
}

Weight1D Weight2D::fiber_z2(int i1) const {
  auto first = values_.begin() + static_cast<ptrdiff_t>(i1) * n2();
  return Weight1D(grid2_, std::vector<double>(first, first + n2()));
}

Weight1D Weight2D::fiber_z1(int i2) const {
  std::vector<double> v(n1());
  for (int i1 = 0; i1 < n1(); ++i1) v[i1] = at(i1, i2);
  return Weight1D(grid1_, std::move(v));
}

TorusFn2D Weight2D::as_function() const {
  return TorusFn2D(grid1_, grid2_,
                   std::vector<cplx>(values_.begin(), values_.end()));
}

Weight1D pow(const Weight1D& w, double e) {
  std::vector<double> v(w.values().begin(), w.values().end());
  for (auto& x : v) x = std::pow(x, e);
  return Weight1D(w.grid(), std::move(v));
}

Weight2D pow(const Weight2D& w, double e) {
  std::vector<double> v(w.values().begin(), w.values().end());
  for (auto& x : v) x = std::pow(x, e);
  return Weight2D(w.grid1(), w.grid2(), std::move(v));
}

Weight1D operator*(const Weight1D& a, const Weight1D& b) {
  require_same(a.grid(), b.grid());
  std::vector<double> v(a.size());
  for (int k = 0; k < a.size(); ++k) v[k] = a[k] * b[k];
  return Weight1D(a.grid(), std::move(v));
}

Weight2D operator*(const Weight2D& a, const Weight2D& b) {
  require_same(a.grid1(), b.grid1());
  require_same(a.grid2(), b.grid2());
  std::vector<double> v(a.values().size());
  for (size_t k = 0; k < v.size(); ++k) v[k] = a.values()[k] * b.values()[k];
  return Weight2D(a.grid1(), a.grid2(), std::move(v));
}

Weight2D operator/(const Weight2D& a, const Weight2D& b) {
  require_same(a.grid1(), b.grid1());
  require_same(a.grid2(), b.grid2());
  std::vector<double> v(a.values().size());
  for (size_t k = 0; k < v.size(); ++k) v[k] = a.values()[k] / b.values()[k];
  return Weight2D(a.grid1(), a.grid2(), std::move(v));
}

// ---------------------------------------------------------------- operations

std::vector<cplx> to_spectrum(const TorusFn1D& f) { return f.spectrum(); }
std::vector<cplx> to_spectrum(const TorusFn2D& f) { return f.spectrum(); }

TorusFn1D poisson_convolve(const TorusFn1D& f, double rho) {
  if (!(rho >= 0.0 && rho < 1.0))
    throw InputError("Poisson radius must lie in [0, 1)");
  std::vector<cplx> c = f.spectrum();
  const int n = f.size();
  for (int i = 0; i < n; ++i)
    c[i] *= std::pow(rho, std::abs(fft::frequency(i, n)));
  return TorusFn1D::from_spectrum(f.grid(), std::move(c));
}

TorusFn2D poisson_convolve_z1(const TorusFn2D& f, double rho) {
  if (!(rho >= 0.0 && rho < 1.0))
    throw InputError("Poisson radius must lie in [0, 1)");
  std::vector<cplx> c = f.spectrum();
  const int n1 = f.n1(), n2 = f.n2();
  for (int i1 = 0; i1 < n1; ++i1) {
    const double mult = std::pow(rho, std::abs(fft::frequency(i1, n1)));
    for (int i2 = 0; i2 < n2; ++i2) c[static_cast<size_t>(i1) * n2 + i2] *= mult;
  }
  return TorusFn2D::from_spectrum(f.grid1(), f.grid2(), std::move(c));
}

namespace {

double norm_impl(std::span<const cplx> f, std::span<const double> w, double s) {
  if (!(s > 0.0)) throw InputError("norm exponent must be positive");
  if (std::isinf(s)) {
    double m = 0.0;
    for (size_t k = 0; k < f.size(); ++k) m = std::max(m, std::abs(f[k]) / w[k]);
    return m;
  }
  double acc = 0.0;
  for (size_t k = 0; k < f.size(); ++k) acc += std::pow(std::abs(f[k]), s) * w[k];
  return std::pow(acc / static_cast<double>(f.size()), 1.0 / s);
}

}  // namespace

double weighted_norm(const TorusFn1D& f, const Weight1D& w, double s) {
  require_same(f.grid(), w.grid());
  return norm_impl(f.values(), w.values(), s);
}

double weighted_norm(const TorusFn2D& f, const Weight2D& w, double s) {
  require_same(f.grid1(), w.grid1());
  require_same(f.grid2(), w.grid2());
  return norm_impl(f.values(), w.values(), s);
}

double lebesgue_norm(const TorusFn1D& f, double s) {
  return norm_impl(f.values(), std::vector<double>(f.size(), 1.0), s);
}

double lebesgue_norm(const TorusFn2D& f, double s) {
  return norm_impl(f.values(), std::vector<double>(f.size(), 1.0), s);
}

double relative_leakage_1d(const TorusFn1D& f,
                           const std::function<bool(int)>& outside) {
  const auto& c = f.spectrum();
  const int n = f.size();
  double total = 0.0, out = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = std::abs(c[i]);
    total = std::max(total, a);
    if (outside(fft::frequency(i, n))) out = std::max(out, a);
  }
  return total == 0.0 ? 0.0 : out / total;
}

}  // namespace ksplit
