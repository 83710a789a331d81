#include "ksplit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ksplit {

bool SpectralCone::contains(int m, int k) const {
  bool in = false;
  switch (kind_) {
    case ConeKind::kFull: in = true; break;
    case ConeKind::kRightHalf: in = m >= 0; break;
    case ConeKind::kTopHalf: in = k >= 0; break;
    case ConeKind::kQuadrant: in = m >= 0 && k >= 0; break;
    case ConeKind::kUnion: in = m >= 0 || k >= 0; break;
    case ConeKind::kLowerStrict: in = k <= -1; break;
  }
  return in != complement_;
}

std::string SpectralCone::name() const {
  std::string base;
  switch (kind_) {
    case ConeKind::kFull: base = "full"; break;
    case ConeKind::kRightHalf: base = "right"; break;
    case ConeKind::kTopHalf: base = "top"; break;
    case ConeKind::kQuadrant: base = "quadrant"; break;
    case ConeKind::kUnion: base = "union"; break;
    case ConeKind::kLowerStrict: base = "lower"; break;
  }
  return complement_ ? "~" + base : base;
}

SpectralCone SpectralCone::parse(std::string_view name) {
  bool comp = false;
  if (!name.empty() && name.front() == '~') {
    comp = true;
    name.remove_prefix(1);
  }
  for (ConeKind k : {ConeKind::kFull, ConeKind::kRightHalf, ConeKind::kTopHalf,
                     ConeKind::kQuadrant, ConeKind::kUnion,
                     ConeKind::kLowerStrict})
    if (SpectralCone(k).name() == name) return SpectralCone(k, comp);
  throw InputError("unknown spectral cone '" + std::string(name) + "'");
}

namespace {

template <typename Mult>
TorusFn1D multiplier_1d(const TorusFn1D& f, Mult mult) {
  std::vector<cplx> c = f.spectrum();
  const int n = f.size();
  for (int i = 0; i < n; ++i) c[i] *= mult(fft::frequency(i, n));
  return TorusFn1D::from_spectrum(f.grid(), std::move(c));
}

template <typename Mult>
TorusFn2D multiplier_2d(const TorusFn2D& f, Mult mult) {
  std::vector<cplx> c = f.spectrum();
  const int n1 = f.n1(), n2 = f.n2();
  for (int i1 = 0; i1 < n1; ++i1) {
    const int m = fft::frequency(i1, n1);
    for (int i2 = 0; i2 < n2; ++i2)
      c[static_cast<size_t>(i1) * n2 + i2] *= mult(m, fft::frequency(i2, n2));
  }
  return TorusFn2D::from_spectrum(f.grid1(), f.grid2(), std::move(c));
}

cplx hilbert_multiplier(int m) {
  if (m > 0) return {0.0, -1.0};
  if (m < 0) return {0.0, 1.0};
  return 0.0;
}

void require_nonvanishing(std::span<const cplx> u) {
  for (const auto& v : u)
    if (v == cplx(0.0)) throw InputError("frame function vanishes on the grid");
}

}  // namespace

TorusFn1D hilbert(const TorusFn1D& f) {
  return multiplier_1d(f, hilbert_multiplier);
}

TorusFn1D riesz(const TorusFn1D& f) {
  return multiplier_1d(f, [](int m) { return m >= 0 ? 1.0 : 0.0; });
}

TorusFn1D anti_riesz(const TorusFn1D& f) {
  return multiplier_1d(f, [](int m) { return m < 0 ? 1.0 : 0.0; });
}

TorusFn2D hilbert_z1(const TorusFn2D& f) {
  return multiplier_2d(f, [](int m, int) { return hilbert_multiplier(m); });
}

TorusFn2D riesz_z1(const TorusFn2D& f) {
  return multiplier_2d(f, [](int m, int) { return m >= 0 ? cplx(1.0) : cplx(0.0); });
}

TorusFn2D project_cone(const TorusFn2D& f, SpectralCone cone) {
  return multiplier_2d(f, [cone](int m, int k) {
    return cone.contains(m, k) ? cplx(1.0) : cplx(0.0);
  });
}

TorusFn2D framed_project(const TorusFn2D& f, const TorusFn2D& frame,
                         SpectralCone cone) {
  require_nonvanishing(frame.values());
  TorusFn2D projected = project_cone(frame * f, cone);
  std::vector<cplx> out(projected.values().begin(), projected.values().end());
  auto u = frame.values();
  for (size_t k = 0; k < out.size(); ++k) out[k] /= u[k];
  return TorusFn2D(f.grid1(), f.grid2(), std::move(out));
}

TorusFn2D framed_project(const TorusFn2D& f, const Weight2D& frame,
                         SpectralCone cone) {
  return framed_project(f, frame.as_function(), cone);
}

TorusFn1D framed_anti_riesz(const TorusFn1D& f, std::span<const double> frame) {
  if (static_cast<int>(frame.size()) != f.size())
    throw InputError("frame size does not match grid");
  std::vector<cplx> uf(f.size());
  for (int k = 0; k < f.size(); ++k) {
    if (frame[k] == 0.0) throw InputError("frame function vanishes on the grid");
    uf[k] = frame[k] * f[k];
  }
  TorusFn1D p = anti_riesz(TorusFn1D(f.grid(), std::move(uf)));
  std::vector<cplx> out(p.values().begin(), p.values().end());
  for (int k = 0; k < f.size(); ++k) out[k] /= frame[k];
  return TorusFn1D(f.grid(), std::move(out));
}

Membership membership(const TorusFn2D& f, SpectralCone cone, double tol) {
  if (!(tol > 0.0)) throw InputError("membership tolerance must be positive");
  const auto& c = f.spectrum();
  const int n1 = f.n1(), n2 = f.n2();
  double total = 0.0, outside = 0.0;
  for (int i1 = 0; i1 < n1; ++i1) {
    const int m = fft::frequency(i1, n1);
    for (int i2 = 0; i2 < n2; ++i2) {
      const double a = std::abs(c[static_cast<size_t>(i1) * n2 + i2]);
      total = std::max(total, a);
      if (!cone.contains(m, fft::frequency(i2, n2))) outside = std::max(outside, a);
    }
  }
  if (total == 0.0) return {true, 0.0};
  const double leak = outside / total;
  return {leak <= tol, leak};
}

Membership framed_membership(const TorusFn2D& f, const Weight2D& frame,
                             SpectralCone cone, double tol) {
  return membership(frame.as_function() * f, cone, tol);
}

double analytic_leakage(const TorusFn1D& f) {
  return relative_leakage_1d(f, [](int m) { return m < 0; });
}

double analytic_leakage_z1(const TorusFn2D& f) {
  return membership(f, SpectralCone(ConeKind::kRightHalf), 1.0).leakage;
}

WeakTail weak_tail_p2(const TorusFn1D& f, std::span<const double> frame,
                      const Weight1D& w, double threshold, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0,1)");
  const int n = f.size();
  TorusFn1D qf = framed_anti_riesz(f, frame);
  WeakTail out;
  out.c_alpha = 1.0 / (1.0 - alpha);
  for (int x = 0; x < n; ++x) out.f_norm += std::abs(f[x]) * w[x] / n;

  std::vector<double> mag = qf.abs();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return mag[a] > mag[b]; });
  double cumulative = 0.0, best = 0.0;
  for (int idx : order) {
    cumulative += w[idx] / n;
    best = std::max(best, mag[idx] * cumulative);
  }
  out.weak_quotient = out.f_norm > 0.0 ? best / out.f_norm : 0.0;

  for (int x = 0; x < n; ++x) {
    if (mag[x] > threshold) {
      out.lhs += std::pow(mag[x], alpha) * w[x] / n;
      out.nu_e += w[x] / n;
    }
  }
  out.rhs = out.c_alpha * std::pow(out.weak_quotient * out.f_norm, alpha) *
            std::pow(out.nu_e, 1.0 - alpha);
  return out;
}

}  // namespace ksplit
