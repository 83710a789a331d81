#include "ksplit/ksplit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ksplit/experiments.hpp"

namespace ksplit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

cplx ipow(cplx z, int e) {
  cplx r = 1.0;
  for (int i = 0; i < e; ++i) r *= z;
  return r;
}

/// x(i1, i2) * c(i2).
TorusFn2D times_z2(const TorusFn2D& x, const TorusFn1D& c) {
  std::vector<cplx> out(x.values().begin(), x.values().end());
  const int n1 = x.n1(), n2 = x.n2();
  for (int i1 = 0; i1 < n1; ++i1)
    for (int i2 = 0; i2 < n2; ++i2) out[static_cast<size_t>(i1) * n2 + i2] *= c[i2];
  return TorusFn2D(x.grid1(), x.grid2(), std::move(out));
}

TorusFn2D divide(const TorusFn2D& x, const Weight2D& u) {
  std::vector<cplx> out(x.values().begin(), x.values().end());
  for (size_t i = 0; i < out.size(); ++i) out[i] /= u.values()[i];
  return TorusFn2D(x.grid1(), x.grid2(), std::move(out));
}

TorusFn2D multiply(const TorusFn2D& x, const Weight2D& u) {
  std::vector<cplx> out(x.values().begin(), x.values().end());
  for (size_t i = 0; i < out.size(); ++i) out[i] *= u.values()[i];
  return TorusFn2D(x.grid1(), x.grid2(), std::move(out));
}

/// w(i1, i2) * b(i1) * a(i2).
Weight2D with_factors(const Weight2D& w, const Weight1D& b, const Weight1D& a) {
  return w * Weight2D::separating(b, a);
}

double relative_gap(std::span<const cplx> x, std::span<const cplx> y, std::span<const cplx> ref) {
  double err = 0.0, top = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    err = std::max(err, std::abs(x[i] - y[i]));
    top = std::max(top, std::abs(ref[i]));
  }
  return top > 0.0 ? err / top : err;
}

}  // namespace

// ---------------------------------------------------------------- config

int SplitConfig::s_eff() const { return s > 0 ? s : static_cast<int>(std::floor(p)) + 1; }

void SplitConfig::validate() const {
  if (!(p > 1.0) || !std::isfinite(p)) throw InputError("split: p must lie in (1, inf)");
  if (k < 2) throw InputError("split: k must be at least 2");
  if (!(p / s_eff() < 1.0)) throw InputError("split: s must satisfy p / s < 1");
  if (!(majorant_delta > 0.0 && majorant_delta < 1.0))
    throw InputError("split: majorant exponent must lie in (0, 1)");
  if (!(gimel_rho >= 0.0 && gimel_rho < 1.0) || !(gimel_shrink > 0.0 && gimel_shrink < 1.0))
    throw InputError("split: bad Poisson radius settings");
}

// ---------------------------------------------------------------- majorant

std::vector<double> maximal_function(std::span<const double> y, const ArcFamily& fam) {
  const int n = static_cast<int>(y.size());
  if (fam.grid_size() != n) throw InputError("maximal function: family size mismatch");
  std::vector<double> out(n, 0.0);
  for (const Arc& a : fam.arcs()) {
    double s = 0.0;
    for (int t = 0; t < a.length; ++t) s += y[(a.start + t) % n];
    const double avg = s / a.length;
    for (int t = 0; t < a.length; ++t) {
      double& o = out[(a.start + t) % n];
      o = std::max(o, avg);
    }
  }
  return out;
}

MajorantResult majorant(std::span<const double> y, double delta, double floor) {
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("majorant: delta must lie in (0, 1)");
  const int n = static_cast<int>(y.size());
  double top = 0.0;
  for (double x : y) {
    if (!(x >= 0.0)) throw InputError("majorant: input must be nonnegative");
    top = std::max(top, x);
  }
  MajorantResult res;
  if (top == 0.0) {
    res.v.assign(n, floor);
    return res;
  }
  std::vector<double> yd(n);
  for (int i = 0; i < n; ++i) yd[i] = std::pow(y[i], delta);
  // Unit arcs keep v >= y pointwise.
  const ArcFamily fam = ArcFamily::shifted_dyadic(n, 1);
  std::vector<double> m = maximal_function(yd, fam);
  res.v.resize(n);
  std::vector<double> logs(n);
  for (int i = 0; i < n; ++i) {
    res.v[i] = std::pow(m[i], 1.0 / delta) + floor * top;
    logs[i] = std::log(res.v[i]);
  }
  res.bmo_log = bmo_norm(logs, fam);
  return res;
}

// ---------------------------------------------------------------- gimel

GimelResult gimel(std::span<const double> v, const Weight2D& w, int k, const SplitConfig& cfg) {
  const int n1 = w.n1(), n2 = w.n2();
  if (static_cast<int>(v.size()) != n1) throw InputError("gimel: v must be a function of z1");
  if (k < 1) throw InputError("gimel: k must be positive");
  std::vector<cplx> base(w.values().size());
  for (int i1 = 0; i1 < n1; ++i1) {
    if (!(v[i1] > 0.0)) throw InputError("gimel: v must be positive");
    for (int i2 = 0; i2 < n2; ++i2)
      base[static_cast<size_t>(i1) * n2 + i2] = v[i1] * w.at(i1, i2);
  }
  const TorusFn2D vw(w.grid1(), w.grid2(), base);
  double rho = cfg.gimel_rho;
  double ratio = kInf;
  for (int attempt = 0; attempt <= cfg.gimel_retries; ++attempt) {
    TorusFn2D smooth = poisson_convolve_z1(vw, rho);
    std::vector<double> val(base.size());
    std::vector<cplx> root(base.size());
    double equiv = 1.0;
    for (size_t i = 0; i < base.size(); ++i) {
      const double b = base[i].real();
      val[i] = std::clamp(smooth.values()[i].real(), 0.5 * b, 2.0 * b);
      equiv = std::max({equiv, val[i] / b, b / val[i]});
      root[i] = std::pow(val[i], 1.0 / k);
    }
    TorusFn2D h = hilbert_z1(TorusFn2D(w.grid1(), w.grid2(), root));
    ratio = 0.0;
    for (size_t i = 0; i < root.size(); ++i)
      ratio = std::max(ratio, std::abs(h.values()[i]) / root[i].real());
    if (ratio <= cfg.gimel_cap)
      return GimelResult{Weight2D(w.grid1(), w.grid2(), std::move(val)), ratio, equiv, rho, attempt};
    rho *= cfg.gimel_shrink;
  }
  std::ostringstream os;
  os << "gimel: Hilbert domination ratio " << ratio << " exceeds cap " << cfg.gimel_cap
     << " after " << cfg.gimel_retries << " retries";
  throw NumericalError(os.str());
}

// ---------------------------------------------------------------- levels

std::vector<double> lambda_levels(const TorusFn2D& g, const TorusFn1D& psi_half,
                                  std::span<const double> v, const Weight2D& w, double p) {
  const int n1 = g.n1(), n2 = g.n2();
  if (static_cast<int>(v.size()) != n1 || psi_half.size() != n2)
    throw InputError("lambda_levels: shape mismatch");
  std::vector<double> lambda(n1);
  for (int i1 = 0; i1 < n1; ++i1) {
    double d = 0.0;
    for (int i2 = 0; i2 < n2; ++i2) d += std::abs(g.at(i1, i2) * psi_half[i2]) * w.at(i1, i2);
    d /= n2;
    lambda[i1] = d > 0.0 ? std::pow(v[i1], p) / std::pow(d, p - 1.0) : kInf;
  }
  return lambda;
}

// ---------------------------------------------------------------- correctors

CorrectorResult correctors(const TorusFn2D& p2_g1, std::span<const double> lambda,
                           const Weight2D& gimel_weight, const SplitConfig& cfg) {
  const int n1 = p2_g1.n1(), n2 = p2_g1.n2();
  if (static_cast<int>(lambda.size()) != n1) throw InputError("correctors: lambda must be a function of z1");
  const int ks = cfg.k * cfg.s_eff();
  std::vector<cplx> phi(p2_g1.size(), 1.0);
  std::vector<double> raw_leak(n2, 0.0), sup_gamma(n2, 1.0);
  std::vector<std::string> failure(n2);

  kernels::for_each(n2, [&](std::int64_t col) {
    const int i2 = static_cast<int>(col);
    std::vector<double> gamma(n1, 1.0);
    bool trivial = true;
    for (int i1 = 0; i1 < n1; ++i1) {
      if (std::isinf(lambda[i1])) continue;
      const double ratio = std::abs(p2_g1.at(i1, i2)) / lambda[i1];
      gamma[i1] = std::max(1.0, std::pow(ratio, 1.0 / ks));
      if (gamma[i1] != 1.0) trivial = false;
      sup_gamma[i2] = std::max(sup_gamma[i2], gamma[i1]);
    }
    if (trivial) return;  // F = 1 and Phi = 1 on this column
    std::vector<cplx> r(n1), rg(n1);
    for (int i1 = 0; i1 < n1; ++i1) {
      r[i1] = std::pow(gimel_weight.at(i1, i2), 1.0 / cfg.k);
      rg[i1] = r[i1] * gamma[i1];
    }
    const Grid1D& g1 = p2_g1.grid1();
    TorusFn1D hr = hilbert(TorusFn1D(g1, r));
    TorusFn1D hrg = hilbert(TorusFn1D(g1, rg));
    std::vector<cplx> col_phi(n1);
    for (int i1 = 0; i1 < n1; ++i1) {
      const cplx den = rg[i1] + cplx(0.0, 1.0) * hrg[i1];
      if (!std::isfinite(den.real()) || !std::isfinite(den.imag()) || std::abs(den) == 0.0) {
        std::ostringstream os;
        os << "corrector denominator vanishes at (" << i1 << ", " << i2 << ")";
        failure[i2] = os.str();
        return;
      }
      const cplx F = (r[i1] + cplx(0.0, 1.0) * hr[i1]) / den;
      col_phi[i1] = 1.0 - ipow(1.0 - ipow(F, ks), cfg.k);
    }
    TorusFn1D raw(g1, col_phi);
    raw_leak[i2] = analytic_leakage(raw);
    TorusFn1D proj = riesz(raw);
    for (int i1 = 0; i1 < n1; ++i1) phi[static_cast<size_t>(i1) * n2 + i2] = proj[i1];
  }, cfg.exec);

  for (const auto& msg : failure)
    if (!msg.empty()) throw NumericalError(msg);

  CorrectorResult res{TorusFn2D(p2_g1.grid1(), p2_g1.grid2(), std::move(phi))};
  for (int i2 = 0; i2 < n2; ++i2) {
    res.raw_leakage = std::max(res.raw_leakage, raw_leak[i2]);
    res.sup_gamma = std::max(res.sup_gamma, sup_gamma[i2]);
  }
  for (int i1 = 0; i1 < n1; ++i1)
    for (int i2 = 0; i2 < n2; ++i2) {
      const double a = std::abs(res.phi.at(i1, i2));
      res.sup_phi = std::max(res.sup_phi, a);
      if (!std::isinf(lambda[i1]))
        res.bound = std::max(res.bound, a * std::abs(p2_g1.at(i1, i2)) / lambda[i1]);
    }
  res.leakage = analytic_leakage_z1(res.phi);
  return res;
}

// ---------------------------------------------------------------- split

bool SplitReport::warnings() const { return hypotheses && !hypotheses->all_pass(); }

SplitReport split_predual(const SplitProblem& prob, const SplitConfig& cfg) {
  cfg.validate();
  const Grid1D& grid1 = prob.f.grid1();
  const Grid1D& grid2 = prob.f.grid2();
  const int n1 = grid1.size(), n2 = grid2.size();
  const double p = cfg.p, q = cfg.q();

  const Weight1D a1 = prob.a1 ? *prob.a1 : Weight1D::constant(grid2, 1.0);
  const Weight1D a2 = prob.a2 ? *prob.a2 : Weight1D::constant(grid2, 1.0);
  const Weight1D b1 = prob.b1 ? *prob.b1 : Weight1D::constant(grid1, 1.0);
  const Weight1D b2 = prob.b2 ? *prob.b2 : Weight1D::constant(grid1, 1.0);
  std::vector<double> ratio(n2);
  for (int i = 0; i < n2; ++i) ratio[i] = a2[i] / a1[i];
  // a := a1, b := b2; b1 and a2 / a1 are folded into the 2-D weights.
  const Weight1D& a = a1;
  const Weight1D& b = b2;
  const Weight2D w1 = with_factors(prob.w1, b1, Weight1D::constant(grid2, 1.0));
  const Weight2D w2 = with_factors(prob.w2, Weight1D::constant(grid1, 1.0), Weight1D(grid2, ratio));
  const Weight2D x1_weight = with_factors(w1, Weight1D::constant(grid1, 1.0), a);
  const Weight2D x2_weight = with_factors(w2, b, a);

  const LevelRange lr = default_levels(a);
  SplitReport rep{.g_prime = TorusFn2D::constant(grid1, grid2, 0.0),
                  .h_prime = TorusFn2D::constant(grid1, grid2, 0.0),
                  .partition = build_partition(a, cfg.jmin.value_or(lr.jmin),
                                               cfg.jmax.value_or(lr.jmax), cfg.partition_power)};
  rep.input_mismatch = relative_gap(prob.f.values(), (prob.g + prob.h).values(), prob.f.values());
  if (rep.input_mismatch > 1e-10) throw InputError("split: f differs from g + h");
  rep.input_leakage = membership(prob.f, SpectralCone::p_cone(), 1.0).leakage;
  if (rep.input_leakage > cfg.tol_membership) throw InputError("split: f is not in the P-subspace");
  if (prob.b1 || prob.a2) rep.notes.push_back("b1 and a2/a1 folded into the 2-D weights");

  const SingleWeight sw = single_weight_reduction(w1, w2, q);
  const Weight2D& w = sw.w;
  const Weight2D& u = sw.u;
  const TorusFn2D fr = divide(prob.f, u), gr = divide(prob.g, u), hr = divide(prob.h, u);


  std::vector<cplx> sum_g1(fr.size(), 0.0), lam(fr.size(), 0.0);
  std::vector<double> y_sum(n1, 0.0);
  const SpectralCone p2 = SpectralCone::p2_cone();

  for (const PartitionAtom& atom : rep.partition.atoms) {
    if (atom.empty) continue;
    LevelDiagnostics diag;
    diag.level = atom.level;
    const TorusFn2D gpsi = times_z2(gr, atom.psi_half);
    const TorusFn2D hpsi = times_z2(hr, atom.psi_half);
    const TorusFn2D fpsi = times_z2(fr, atom.psi_half);

    std::vector<double> y(n1);
    for (int i1 = 0; i1 < n1; ++i1) {
      double s = 0.0;
      for (int i2 = 0; i2 < n2; ++i2) s += std::pow(std::abs(hpsi.at(i1, i2)), q) * w.at(i1, i2);
      y[i1] = std::pow(s / n2, 1.0 / q);
      y_sum[i1] += std::ldexp(1.0, atom.level) * std::pow(y[i1], q);
    }
    const MajorantResult maj = majorant(y, cfg.majorant_delta, cfg.majorant_floor);
    diag.majorant_bmo = maj.bmo_log;
    const std::vector<double> lambda = lambda_levels(gr, atom.psi_half, maj.v, w, p);

    std::vector<cplx> g0(fr.size()), g1(fr.size());
    std::vector<double> good_ratio(n1, 0.0), omega_ratio(n1, 0.0), lq_ratio(n1, 0.0);
    kernels::for_each(n1, [&](std::int64_t row) {
      const int i1 = static_cast<int>(row);
      const TorusFn1D fiber = gpsi.fiber_z2(i1);
      const Weight1D wf = w.fiber_z2(i1);
      const CZResult cz = cz_decompose(fiber, wf, lambda[i1]);
      double lq = 0.0;
      for (int i2 = 0; i2 < n2; ++i2) {
        g0[static_cast<size_t>(i1) * n2 + i2] = cz.good[i2];
        g1[static_cast<size_t>(i1) * n2 + i2] = cz.bad[i2];
        lq += std::pow(std::abs(cz.good[i2]), q) * wf[i2];
      }
      lq_ratio[i1] = std::pow(lq / n2, 1.0 / q) / maj.v[i1];
      if (!cz.top_stopped) good_ratio[i1] = cz.good_sup_ratio;
      omega_ratio[i1] = cz.omega_ratio;
    }, cfg.exec);
    for (int i1 = 0; i1 < n1; ++i1) {
      diag.cz_good_ratio = std::max(diag.cz_good_ratio, good_ratio[i1]);
      diag.cz_omega_ratio = std::max(diag.cz_omega_ratio, omega_ratio[i1]);
      diag.g0_lq_ratio = std::max(diag.g0_lq_ratio, lq_ratio[i1]);
      if (!std::isinf(lambda[i1])) {
        ++diag.active_fibers;
        diag.max_lambda_finite = std::max(diag.max_lambda_finite, lambda[i1]);
      }
    }
    const TorusFn2D G0(grid1, grid2, std::move(g0)), G1(grid1, grid2, std::move(g1));

    const GimelResult gim = gimel(maj.v, w, cfg.k, cfg);
    diag.gimel_ratio = gim.hilbert_ratio;
    const TorusFn2D p2_g1 = framed_project(G1, u, p2);
    const CorrectorResult corr = correctors(p2_g1, lambda, gim.value, cfg);
    diag.sup_phi = corr.sup_phi;
    diag.corrector_bound = corr.bound;

    const TorusFn2D u_j = framed_project(fpsi, u, p2);
    const TorusFn2D rest = framed_project(G0 + hpsi, u, p2);
    const TorusFn2D alpha = corr.phi * u_j - rest;

    // theta_j psi_j^{power/2} as one z2 factor.
    std::vector<cplx> tp(n2);
    for (int i2 = 0; i2 < n2; ++i2) tp[i2] = atom.theta[i2] * atom.psi_half[i2];
    const TorusFn1D factor(grid2, std::move(tp));
    const TorusFn2D c_g1 = times_z2(G1, factor);
    const TorusFn2D c_alpha = times_z2(alpha, factor);
    for (size_t i = 0; i < sum_g1.size(); ++i) {
      sum_g1[i] += c_g1.values()[i];
      lam[i] += c_alpha.values()[i];
    }
    rep.levels.push_back(diag);
  }

  std::vector<cplx> raw(fr.size());
  for (size_t i = 0; i < raw.size(); ++i) raw[i] = sum_g1[i] - lam[i];
  const TorusFn2D g_raw(grid1, grid2, std::move(raw));
  rep.raw_leakage = framed_membership(g_raw, u, SpectralCone::p_cone(), 1.0).leakage;
  const TorusFn2D g_red = framed_project(g_raw, u, SpectralCone::p_cone());

  rep.g_prime = multiply(g_red, u);
  rep.h_prime = prob.f - rep.g_prime;

  for (int i1 = 0; i1 < n1; ++i1) {
    double s = 0.0;
    for (int i2 = 0; i2 < n2; ++i2)
      s += std::pow(std::abs(hr.at(i1, i2)), q) * w.at(i1, i2) * a[i2];
    s /= n2;
    if (s > 0.0) rep.y_sum_ratio = std::max(rep.y_sum_ratio, y_sum[i1] / s);
  }

  rep.A = weighted_norm(prob.g, x1_weight, 1.0);
  rep.B = weighted_norm(prob.h, x2_weight, q);
  rep.norm_g_prime = weighted_norm(rep.g_prime, x1_weight, 1.0);
  rep.norm_h_prime = weighted_norm(rep.h_prime, x2_weight, q);
  auto ratio_of = [](double num, double den) {
    if (den > 0.0) return num / den;
    return num == 0.0 ? 0.0 : kInf;
  };
  rep.C1 = ratio_of(rep.norm_g_prime, rep.A);
  rep.C2 = ratio_of(rep.norm_h_prime, rep.B);
  rep.decomposition_error =
      relative_gap(prob.f.values(), (rep.g_prime + rep.h_prime).values(), prob.f.values());
  rep.leakage_g = membership(rep.g_prime, SpectralCone::p_cone(), 1.0).leakage;
  rep.leakage_h = membership(rep.h_prime, SpectralCone::p_cone(), 1.0).leakage;
  return rep;
}

SplitReport split_inf(const InfProblem& prob, const SplitConfig& cfg) {
  cfg.validate();
  const Grid1D& g1 = prob.f.grid1();
  const Grid1D& g2 = prob.f.grid2();
  const Weight1D one1 = Weight1D::constant(g1, 1.0), one2 = Weight1D::constant(g2, 1.0);
  const Weight1D a1 = prob.a1.value_or(one2), a2 = prob.a2.value_or(one2);
  const Weight1D b1 = prob.b1.value_or(one1), b2 = prob.b2.value_or(one1);
  const DualWeights d = dual_weights(prob.w1, prob.w2, a1, a2, b1, b2, cfg.p);

  SplitProblem sp{prob.f, prob.g, prob.h, d.w1, d.w2, d.a1, d.a2, d.b1, d.b2};
  SplitReport rep = split_predual(sp, cfg);
  rep.notes.push_back("f, g, h are split in the predual couple (L_1, L_q)");
  if (cfg.evaluate_hypotheses) {
    HypothesisInputs in;
    in.w1 = prob.w1;
    in.w2 = prob.w2;
    in.a1 = a1;
    in.a2 = a2;
    in.b1 = b1;
    in.b2 = b2;
    in.p = cfg.p;
    rep.hypotheses = hypothesis_check("inf_neib_all_q", in);
  }
  return rep;
}

// ---------------------------------------------------------------- fiberwise

FiberwiseReport split_fiberwise(const TorusFn2D& f, const TorusFn2D& g, const TorusFn2D& h,
                                const Weight2D& w1, const Weight2D& w2, double r, double p,
                                const OracleSettings& settings) {
  const int n1 = f.n1(), n2 = f.n2();
  const SpectralCone analytic_z2(ConeKind::kTopHalf);
  std::vector<cplx> gp(f.size()), hp(f.size());
  FiberwiseReport rep{.g_prime = TorusFn2D::constant(f.grid1(), f.grid2(), 0.0),
                      .h_prime = TorusFn2D::constant(f.grid1(), f.grid2(), 0.0)};
  rep.fiber_c1.assign(n1, 0.0);
  rep.fiber_c2.assign(n1, 0.0);
  std::vector<char> converged(n1, 1), heuristic(n1, 0);

  kernels::for_each(n1, [&](std::int64_t row) {
    const int i1 = static_cast<int>(row);
    const TorusFn1D ff = f.fiber_z2(i1), gf = g.fiber_z2(i1), hf = h.fiber_z2(i1);
    const Weight1D v1 = w1.fiber_z2(i1), v2 = w2.fiber_z2(i1);
    const double ng = weighted_norm(gf, v1, r), nh = weighted_norm(hf, v2, p);
    std::vector<cplx> out_g(n2, 0.0);
    if (ng == 0.0) {
      // g' = 0, h' = f
    } else if (nh == 0.0) {
      out_g.assign(ff.values().begin(), ff.values().end());
      rep.fiber_c1[i1] = weighted_norm(ff, v1, r) / ng;
    } else {
      OracleProblem op = make_oracle_problem(ff, gf, hf, v1, v2, analytic_z2, analytic_z2, r, p);
      op.settings = settings;
      const TorusFn1D start = riesz(gf);
      op.warm_starts.emplace_back(start.values().begin(), start.values().end());
      const OracleResult res = solve_oracle(op);
      out_g = res.g_prime;
      rep.fiber_c1[i1] = res.c1;
      rep.fiber_c2[i1] = res.c2;
      converged[i1] = res.converged;
      heuristic[i1] = res.heuristic;
    }
    for (int i2 = 0; i2 < n2; ++i2) {
      const size_t idx = static_cast<size_t>(i1) * n2 + i2;
      gp[idx] = out_g[i2];
      hp[idx] = f.values()[idx] - out_g[i2];
    }
    if (ng == 0.0 && nh > 0.0) {
      TorusFn1D hfib(f.grid2(), std::vector<cplx>(hp.begin() + static_cast<long>(i1) * n2,
                                                  hp.begin() + static_cast<long>(i1 + 1) * n2));
      rep.fiber_c2[i1] = weighted_norm(hfib, v2, p) / nh;
    }
  }, kernels::Exec::kParallel);

  rep.g_prime = TorusFn2D(f.grid1(), f.grid2(), std::move(gp));
  rep.h_prime = TorusFn2D(f.grid1(), f.grid2(), std::move(hp));
  for (int i1 = 0; i1 < n1; ++i1) {
    rep.max_c1 = std::max(rep.max_c1, rep.fiber_c1[i1]);
    rep.max_c2 = std::max(rep.max_c2, rep.fiber_c2[i1]);
    rep.all_converged = rep.all_converged && converged[i1];
    rep.heuristic = rep.heuristic || heuristic[i1];
  }
  rep.decomposition_error =
      relative_gap(f.values(), (rep.g_prime + rep.h_prime).values(), f.values());
  rep.leakage_g = membership(rep.g_prime, analytic_z2, 1.0).leakage;
  rep.leakage_h = membership(rep.h_prime, analytic_z2, 1.0).leakage;
  rep.notes.push_back("one-variable step solved numerically per fiber by the oracle");
  if (rep.heuristic) rep.notes.push_back("r < 1: fiber solves are HEURISTIC upper bounds");
  return rep;
}

// ---------------------------------------------------------------- glue

namespace {

CoupleReport oracle_couple(const std::string& name, const CoupleSpec& couple,
                           std::uint64_t seed, const OracleSettings& settings) {
  Rng rng(seed);
  const Instance inst = make_instance(couple, 4, rng);
  OracleProblem op = oracle_problem(couple, inst);
  op.settings = settings;
  const OracleResult res = solve_oracle(op);
  return CoupleReport{name, couple.r, couple.p, res.method, res.c1, res.c2, res.objective,
                      res.decomposition_error, std::max(res.leakage_g, res.leakage_h)};
}

std::string couple_name(const char* left, double p_left, const char* right, double p_right) {
  std::ostringstream os;
  os << "(L_" << format_double(p_left) << "(" << left << "), L_" << format_double(p_right) << "("
     << right << "))";
  return os.str();
}

}  // namespace

GlueReport glue_driver(const Weight2D& w1, const Weight2D& w2, std::span<const double> theta,
                       std::uint64_t seed, const SplitConfig& cfg,
                       const OracleSettings& settings) {
  if (theta.size() != 4) throw InputError("glue: need four theta values");
  for (size_t i = 0; i < 4; ++i) {
    if (!(theta[i] > 0.0 && theta[i] < 1.0)) throw InputError("glue: theta must lie in (0, 1)");
    if (i > 0 && !(theta[i] > theta[i - 1])) throw InputError("glue: theta must be strictly increasing");
  }
  GlueReport rep;
  HypothesisInputs hin;
  hin.w1 = w1;
  hin.w2 = w2;
  rep.hypotheses = hypothesis_check("glue", hin);

  const double inf = kInf;
  // Couple 1: (L_1(w1), L_{1/(1-t2)}(glue t2)).
  CoupleSpec c1{w1, glue_weight(w1, w2, theta[1]), 1.0, glue_exponent(theta[1])};
  rep.couples.push_back(oracle_couple(couple_name("w1", 1.0, "glue t2", c1.p), c1, seed, settings));
  // Couple 2: (L_{1/(1-t1)}(glue t1), L_{1/(1-t4)}(glue t4)).
  CoupleSpec c2{glue_weight(w1, w2, theta[0]), glue_weight(w1, w2, theta[3]),
                glue_exponent(theta[0]), glue_exponent(theta[3])};
  rep.couples.push_back(
      oracle_couple(couple_name("glue t1", c2.r, "glue t4", c2.p), c2, seed + 1, settings));

  // Couple 3: (L_{1/(1-t3)}(glue t3), L_inf(w2)) through the constructive splitter.
  SplitConfig c3cfg = cfg;
  c3cfg.p = glue_exponent(theta[2]);
  c3cfg.s = 0;
  const Weight2D wt3 = glue_weight(w1, w2, theta[2]);
  const double q3 = c3cfg.q();
  CoupleSpec predual{w2, pow(wt3, 1.0 - q3), 1.0, q3};
  Rng rng(seed + 2);
  const Instance inst = make_instance(predual, 4, rng);
  const SplitReport sr = split_inf(InfProblem{inst.f, inst.g, inst.h, wt3, w2}, c3cfg);
  rep.couples.push_back(CoupleReport{couple_name("glue t3", c3cfg.p, "w2", inf), c3cfg.p, inf,
                                     "constructive", sr.C1, sr.C2, std::max(sr.C1, sr.C2),
                                     sr.decomposition_error,
                                     std::max(sr.leakage_g, sr.leakage_h)});

  // The endpoint couple is only estimated, by the oracle.
  CoupleSpec end{w1, w2, 1.0, inf};
  rep.endpoint = oracle_couple(couple_name("w1", 1.0, "w2", inf), end, seed + 3, settings);
  rep.notes.push_back("couple 3 is split in its predual couple (L_1, L_q)");
  rep.notes.push_back("the endpoint constant is an oracle estimate; no gluing step is applied");
  return rep;
}

}  // namespace ksplit
