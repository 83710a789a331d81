#include "ksplit/czd.hpp"

#include <algorithm>
#include <cmath>

#include "ksplit/spectral.hpp"

namespace ksplit {

namespace {

struct Prefix {
  std::vector<double> w, fw_abs;
  std::vector<cplx> fw;

  Prefix(const TorusFn1D& f, const Weight1D& wt) {
    const int n = f.size();
    w.assign(n + 1, 0.0);
    fw_abs.assign(n + 1, 0.0);
    fw.assign(n + 1, 0.0);
    for (int k = 0; k < n; ++k) {
      w[k + 1] = w[k] + wt[k];
      fw_abs[k + 1] = fw_abs[k] + std::abs(f[k]) * wt[k];
      fw[k + 1] = fw[k] + f[k] * wt[k];
    }
  }
  double weight(const Arc& a) const { return w[a.start + a.length] - w[a.start]; }
  double abs_avg(const Arc& a) const {
    return (fw_abs[a.start + a.length] - fw_abs[a.start]) / weight(a);
  }
  cplx avg(const Arc& a) const { return (fw[a.start + a.length] - fw[a.start]) / weight(a); }
};

void descend(const Prefix& pre, const Arc& arc, double lambda, std::vector<Arc>& out) {
  if (pre.abs_avg(arc) > lambda) {
    out.push_back(arc);
    return;
  }
  if (arc.length == 1) return;
  const int half = arc.length / 2;
  descend(pre, {arc.start, half}, lambda, out);
  descend(pre, {arc.start + half, half}, lambda, out);
}

}  // namespace

double dyadic_doubling_defect(const Weight1D& w) {
  std::vector<double> level(w.values().begin(), w.values().end());
  double d = 1.0;
  while (level.size() > 1) {
    std::vector<double> up(level.size() / 2);
    for (size_t i = 0; i < up.size(); ++i) {
      up[i] = level[2 * i] + level[2 * i + 1];
      d = std::max({d, up[i] / level[2 * i], up[i] / level[2 * i + 1]});
    }
    level.swap(up);
  }
  return d;
}

CZResult cz_decompose(const TorusFn1D& f, const Weight1D& w, double lambda) {
  if (!(lambda > 0.0)) throw InputError("CZ level must be positive");
  if (!(f.grid() == w.grid())) throw InputError("CZ: grid mismatch");
  const int n = f.size();
  Prefix pre(f, w);

  CZResult res{f, TorusFn1D::constant(f.grid(), 0.0), {}, std::vector<char>(n, 0), lambda};
  descend(pre, {0, n}, lambda, res.stopped);
  res.top_stopped = res.stopped.size() == 1 && res.stopped.front().length == n;

  std::vector<cplx> good(f.values().begin(), f.values().end());
  std::vector<cplx> bad(n, 0.0);
  for (const Arc& a : res.stopped) {
    const cplx avg = pre.avg(a);
    for (int k = a.start; k < a.start + a.length; ++k) {
      good[k] = avg;
      bad[k] = f[k] - avg;
      res.in_omega[k] = 1;
    }
  }

  res.f_l1 = pre.fw_abs[n] / n;
  res.doubling_defect = dyadic_doubling_defect(w);
  double good_l1 = 0.0, bad_l1 = 0.0, sup_good = 0.0;
  for (int k = 0; k < n; ++k) {
    good_l1 += std::abs(good[k]) * w[k] / n;
    bad_l1 += std::abs(bad[k]) * w[k] / n;
    sup_good = std::max(sup_good, std::abs(good[k]));
    if (res.in_omega[k]) res.omega_measure += w[k] / n;
  }
  for (const Arc& a : res.stopped) {
    cplx s = 0.0;
    for (int k = a.start; k < a.start + a.length; ++k) s += bad[k] * w[k];
    const double scale = pre.fw_abs[a.start + a.length] - pre.fw_abs[a.start];
    if (scale > 0.0) res.mean_zero_defect = std::max(res.mean_zero_defect, std::abs(s) / scale);
  }
  res.good_sup_ratio = std::isinf(lambda) ? 0.0 : sup_good / lambda;
  if (res.f_l1 > 0.0) {
    res.good_l1_ratio = good_l1 / res.f_l1;
    res.bad_l1_ratio = bad_l1 / res.f_l1;
    res.omega_ratio = std::isinf(lambda) ? 0.0 : res.omega_measure * lambda / res.f_l1;
  }
  res.good = TorusFn1D(f.grid(), std::move(good));
  res.bad = TorusFn1D(f.grid(), std::move(bad));
  return res;
}

double cz_tail_check(const CZResult& res, std::span<const double> frame,
                     const Weight1D& w) {
  if (res.stopped.empty() || res.f_l1 == 0.0) return 0.0;
  TorusFn1D q = framed_anti_riesz(res.bad, frame);
  const int n = q.size();
  double tail = 0.0;
  for (int k = 0; k < n; ++k)
    if (!res.in_omega[k]) tail += std::abs(q[k]) * w[k] / n;
  return tail / res.f_l1;
}

}  // namespace ksplit
