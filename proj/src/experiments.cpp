#include "ksplit/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

#include "ksplit/fft.hpp"
#include "ksplit/ksplit.hpp"
#include "ksplit/weight_spec.hpp"

namespace ksplit {

namespace {

constexpr double kPi = 3.14159265358979323846;

cplx complex_normal(Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const double re = nd(rng);
  const double im = nd(rng);
  return cplx(re, im) / std::sqrt(2.0);
}

void check_degree(int degree, int n) {
  if (degree < 1) throw InputError("random polynomial: degree must be positive");
  if (degree >= n / 2) throw InputError("random polynomial: degree exceeds the grid band");
}

TorusFn2D project(const TorusFn2D& x, const CoupleSpec& couple, SpectralCone cone) {
  return couple.frame ? framed_project(x, *couple.frame, cone) : project_cone(x, cone);
}

double norm_of(const TorusFn2D& x, const Weight2D& w, double s) { return weighted_norm(x, w, s); }

}  // namespace

TorusFn2D random_trig_polynomial(const Grid1D& g1, const Grid1D& g2, int degree, Rng& rng) {
  check_degree(degree, std::min(g1.size(), g2.size()));
  const int n1 = g1.size(), n2 = g2.size();
  std::vector<cplx> spec(static_cast<size_t>(n1) * n2, 0.0);
  for (int m = -degree; m <= degree; ++m)
    for (int k = -degree; k <= degree; ++k) {
      const double scale = std::exp(-(std::abs(m) + std::abs(k)) / static_cast<double>(degree));
      spec[static_cast<size_t>(fft::index_of(m, n1)) * n2 + fft::index_of(k, n2)] =
          scale * complex_normal(rng);
    }
  return TorusFn2D::from_spectrum(g1, g2, std::move(spec));
}

TorusFn1D random_trig_polynomial(const Grid1D& g, int degree, Rng& rng) {
  check_degree(degree, g.size());
  std::vector<cplx> spec(g.size(), 0.0);
  for (int m = -degree; m <= degree; ++m)
    spec[fft::index_of(m, g.size())] =
        std::exp(-std::abs(m) / static_cast<double>(degree)) * complex_normal(rng);
  return TorusFn1D::from_spectrum(g, std::move(spec));
}

TorusFn1D random_analytic_polynomial(const Grid1D& g, int degree, Rng& rng) {
  if (degree < 0 || degree >= g.size() / 2)
    throw InputError("random polynomial: degree outside the grid band");
  std::vector<cplx> spec(g.size(), 0.0);
  for (int m = 0; m <= degree; ++m) spec[m] = complex_normal(rng);
  return TorusFn1D::from_spectrum(g, std::move(spec));
}

Weight1D random_smooth_weight(const Grid1D& g, int degree, double amplitude, Rng& rng) {
  check_degree(degree, g.size());
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<double> a(degree + 1), b(degree + 1);
  for (int m = 1; m <= degree; ++m) {
    a[m] = nd(rng);
    b[m] = nd(rng);
  }
  std::vector<double> poly(g.size(), 0.0);
  double top = 0.0;
  for (int x = 0; x < g.size(); ++x) {
    const double t = g.angle(x);
    for (int m = 1; m <= degree; ++m) poly[x] += a[m] * std::cos(m * t) + b[m] * std::sin(m * t);
    top = std::max(top, std::abs(poly[x]));
  }
  std::vector<double> w(g.size());
  for (int x = 0; x < g.size(); ++x) w[x] = std::exp(top > 0.0 ? amplitude * poly[x] / top : 0.0);
  return Weight1D(g, std::move(w));
}

// ---------------------------------------------------------------- instances

Instance make_instance(const CoupleSpec& couple, int degree, Rng& rng, double spike) {
  const Grid1D& g1 = couple.weight1.grid1();
  const Grid1D& g2 = couple.weight1.grid2();
  const TorusFn2D base = random_trig_polynomial(g1, g2, degree, rng);
  const TorusFn2D gp = project(base, couple, couple.cone1);
  TorusFn2D gr = base - gp;
  if (spike > 0.0) {
    // One-sided singular profile just above z2 = 1; only its part outside
    // Y1 is kept.
    const double amp = spike * base.sup_abs();
    const double cell = 2.0 * kPi / g2.size();
    const TorusFn2D bump = TorusFn2D::from_function(g1, g2, [&](double, double t2) {
      return cplx(t2 < 0.25 * kPi ? amp * std::pow(std::max(t2, 0.5 * cell) / cell, -0.9) : 0.0);
    });
    gr = gr + (bump - project(bump, couple, couple.cone1));
  }
  const TorusFn2D hc = project(random_trig_polynomial(g1, g2, degree, rng), couple, couple.cone2);

  double t = 1.0, c = 1.0;
  auto g_of = [&] { return c * (gp + t * gr); };
  auto h_of = [&](double s) { return s * hc - (c * t) * gr; };
  for (int it = 0;; ++it) {
    const double ng = norm_of(gp + t * gr, couple.weight1, couple.r);
    if (!(ng > 0.0)) throw NumericalError("make_instance: degenerate random polynomial");
    c = 1.0 / ng;
    if (norm_of(h_of(0.0), couple.weight2, couple.p) <= 0.5 || it > 60) break;
    t *= 0.5;
  }
  if (!(norm_of(hc, couple.weight2, couple.p) > 0.0))
    throw NumericalError("make_instance: degenerate second component");
  double lo = 0.0, hi = 1.0;
  while (norm_of(h_of(hi), couple.weight2, couple.p) < 1.0) hi *= 2.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (norm_of(h_of(mid), couple.weight2, couple.p) < 1.0 ? lo : hi) = mid;
  }
  Instance inst{.f = TorusFn2D::constant(g1, g2, 0.0), .g = g_of(), .h = h_of(0.5 * (lo + hi))};
  inst.f = inst.g + inst.h;
  inst.A = norm_of(inst.g, couple.weight1, couple.r);
  inst.B = norm_of(inst.h, couple.weight2, couple.p);
  return inst;
}

OracleProblem oracle_problem(const CoupleSpec& couple, const Instance& inst) {
  OracleProblem op = make_oracle_problem(inst.f, inst.g, inst.h, couple.weight1, couple.weight2,
                                         couple.cone1, couple.cone2, couple.r, couple.p);
  if (couple.frame) op.frame.assign(couple.frame->values().begin(), couple.frame->values().end());
  const TorusFn2D start = project(inst.g, couple, couple.cone1);
  op.warm_starts.emplace_back(start.values().begin(), start.values().end());
  return op;
}

// ---------------------------------------------------------------- sweeps

namespace {

Weight2D family_weight(const SweepSpec& spec, double param, const Grid1D& grid) {
  WeightSpec ws;
  ws.family = spec.family;
  if (spec.family == "power") {
    ws.params["alpha"] = param;
    if (spec.axis != 0) ws.params["axis"] = spec.axis;
  } else if (spec.family == "exp-cos") {
    ws.params["eps"] = param;
  } else if (spec.family == "const") {
    ws.params["value"] = param;
  } else {
    throw InputError("sweep: unknown weight family '" + spec.family + "'");
  }
  return build_weight_2d(ws, grid, grid);
}

}  // namespace

std::vector<SweepRow> kconstant_sweep(const SweepSpec& spec) {
  if (spec.trials < 1) throw InputError("sweep: trials must be positive");
  if (spec.couple != "hardy" && spec.couple != "inf")
    throw InputError("sweep: couple must be 'hardy' or 'inf'");
  const Grid1D grid(spec.n);
  std::vector<SweepRow> rows;
  for (double param : spec.params) {
    const Weight2D w = family_weight(spec, param, grid);
    const Weight2D unit = Weight2D::constant(grid, grid, 1.0);
    SweepRow row{spec.family, param, spec.r, spec.p, spec.n, spec.trials, 0.0, std::nullopt, spec.seed,
                 spec.oracle.tolerance};
    CoupleSpec couple{unit, w, spec.r, spec.p, SpectralCone::hardy(), SpectralCone::hardy()};
    SplitConfig cfg;
    if (spec.couple == "inf") {
      cfg.p = spec.p;
      couple = CoupleSpec{w, unit, 1.0, cfg.q()};
      row.r = 1.0;
      row.p = cfg.q();
      row.constructive_max = 0.0;
    }
    for (int t = 0; t < spec.trials; ++t) {
      Rng rng(spec.seed + static_cast<std::uint64_t>(t));
      const Instance inst = make_instance(couple, spec.degree, rng, spec.spike);
      OracleProblem op = oracle_problem(couple, inst);
      op.settings = spec.oracle;
      std::optional<SplitReport> sr;
      if (spec.couple == "inf") {
        sr = split_inf(InfProblem{inst.f, inst.g, inst.h, unit, w}, cfg);
        op.warm_starts.emplace_back(sr->g_prime.values().begin(), sr->g_prime.values().end());
        row.constructive_max = std::max(*row.constructive_max, std::max(sr->C1, sr->C2));
      }
      const OracleResult res = solve_oracle(op);
      row.oracle_max = std::max(row.oracle_max, res.objective);
    }
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "family,param,r,p,n,trials,oracle_max,constructive_max,seed,tolerance\n";
  for (const SweepRow& r : rows) {
    os << r.family << ',' << format_double(r.param) << ',' << format_double(r.r) << ','
       << format_double(r.p) << ',' << r.n << ',' << r.trials << ',' << format_double(r.oracle_max)
       << ',' << (r.constructive_max ? format_double(*r.constructive_max) : std::string("na")) << ','
       << r.seed << ',' << format_double(r.tolerance) << '\n';
  }
}

// ---------------------------------------------------------------- smoothing check

std::vector<double> default_rho_grid() {
  std::vector<double> rho{0.0};
  for (int k = 1; k <= 10; ++k) rho.push_back(1.0 - std::ldexp(1.0, -k));
  return rho;
}

HardyNormPair re_hardy_norm(const TorusFn1D& f, const Weight1D& w, double r,
                            const std::vector<double>& rho_grid) {
  double mass = 0.0;
  for (double x : w.values()) mass += x;
  mass /= w.size();
  std::vector<double> wn(w.values().begin(), w.values().end());
  for (double& x : wn) x /= mass;
  const Weight1D weight(w.grid(), std::move(wn));
  HardyNormPair out;
  out.boundary = weighted_norm(f, weight, r);
  for (double rho : rho_grid) {
    const double v = weighted_norm(poisson_convolve(f, rho), weight, r);
    if (v > out.smoothed_sup) {
      out.smoothed_sup = v;
      out.argmax_rho = rho;
    }
  }
  return out;
}

std::vector<LemmaRow> verify_lemma(const LemmaSpec& spec) {
  if (spec.trials < 1 || spec.max_degree < 1) throw InputError("verify-lemma: bad trial settings");
  if (!(spec.r > 0.0)) throw InputError("verify-lemma: r must be positive");
  const Grid1D grid(spec.n);
  const Weight1D w = build_weight_1d(parse_weight_spec(spec.weight), grid);
  const std::vector<double> rho = default_rho_grid();
  std::vector<LemmaRow> rows;
  for (int t = 0; t < spec.trials; ++t) {
    Rng rng(spec.seed + static_cast<std::uint64_t>(t));
    const int degree = 1 + t % spec.max_degree;
    const TorusFn1D f = random_analytic_polynomial(grid, degree, rng);
    const HardyNormPair hp = re_hardy_norm(f, w, spec.r, rho);
    rows.push_back(LemmaRow{t, degree, hp.boundary, hp.smoothed_sup,
                            hp.boundary > 0.0 ? hp.smoothed_sup / hp.boundary : 0.0});
  }
  return rows;
}

void write_lemma_csv(std::ostream& os, const LemmaSpec& spec, const std::vector<LemmaRow>& rows) {
  os << "weight,r,n,seed,trial,degree,boundary,smoothed_sup,ratio\n";
  for (const LemmaRow& r : rows)
    os << spec.weight << ',' << format_double(spec.r) << ',' << spec.n << ',' << spec.seed << ','
       << r.trial << ','
       << r.degree << ',' << format_double(r.boundary) << ',' << format_double(r.smoothed_sup) << ','
       << format_double(r.ratio) << '\n';
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace ksplit
