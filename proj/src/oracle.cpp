#include "ksplit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace ksplit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double real_dot(std::span<const cplx> a, std::span<const cplx> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return s;
}

/// Precomputed geometry of one problem: cone masks, the fixed part of the
/// framed g' spectrum, and helpers mapping free coefficients to g'.
class Workspace {
 public:
  explicit Workspace(const OracleProblem& prob) : prob_(prob), N_(prob.size()) {
    validate();
    frame_ = prob.frame.empty() ? std::vector<double>(N_, 1.0) : prob.frame;
    std::vector<cplx> uf(N_);
    for (size_t i = 0; i < N_; ++i) uf[i] = frame_[i] * prob.f[i];
    std::vector<cplx> c = forward(uf);
    double top = 0.0;
    for (const auto& x : c) top = std::max(top, std::abs(x));
    in1_.assign(N_, 0);
    in2_.assign(N_, 0);
    free_.assign(N_, 0);
    base_.assign(N_, 0.0);
    for (int i1 = 0; i1 < prob.n1; ++i1) {
      const int m = fft::frequency(i1, prob.n1);
      for (int i2 = 0; i2 < prob.n2; ++i2) {
        const size_t idx = static_cast<size_t>(i1) * prob.n2 + i2;
        const int k = fft::frequency(i2, prob.n2);
        in1_[idx] = prob.cone1.contains(m, k);
        in2_[idx] = prob.cone2.contains(m, k);
        const bool allowed = prob.free_mask.empty() || prob.free_mask[idx];
        free_[idx] = in1_[idx] && in2_[idx] && allowed;
        if (free_[idx]) continue;
        if (in1_[idx]) {
          base_[idx] = c[idx];
        } else if (!in2_[idx]) {
          base_[idx] = c[idx];
          if (std::abs(c[idx]) > 1e-8 * top) feasible_ = false;
        }
      }
    }
    coeff_f_ = std::move(c);
    norm_g_ = grid_norm(prob.g, prob.weight1, prob.r);
    norm_h_ = grid_norm(prob.h, prob.weight2, prob.p);
    if (!(norm_g_ > 0.0) || !(norm_h_ > 0.0))
      throw InputError("oracle: g and h must have positive norms");
  }

  size_t size() const { return N_; }
  bool feasible() const { return feasible_; }
  const std::vector<char>& free_mask() const { return free_; }
  double norm_g() const { return norm_g_; }
  double norm_h() const { return norm_h_; }
  const std::vector<double>& frame() const { return frame_; }

  std::vector<cplx> forward(std::span<const cplx> v) const {
    std::vector<cplx> out(N_);
    fft::forward(v, out, prob_.n1, prob_.n2);
    return out;
  }
  std::vector<cplx> inverse(std::span<const cplx> v) const {
    std::vector<cplx> out(N_);
    fft::inverse(v, out, prob_.n1, prob_.n2);
    return out;
  }

  /// g' values for free coefficients d (entries outside the free set ignored).
  std::vector<cplx> g_prime(std::span<const cplx> d) const {
    std::vector<cplx> spec(base_);
    for (size_t i = 0; i < N_; ++i)
      if (free_[i]) spec[i] = d[i];
    std::vector<cplx> x = inverse(spec);
    for (size_t i = 0; i < N_; ++i) x[i] /= frame_[i];
    return x;
  }

  /// Free coefficients of a candidate g'.
  std::vector<cplx> coefficients_of(std::span<const cplx> g_prime) const {
    std::vector<cplx> ug(N_);
    for (size_t i = 0; i < N_; ++i) ug[i] = frame_[i] * g_prime[i];
    std::vector<cplx> c = forward(ug);
    for (size_t i = 0; i < N_; ++i)
      if (!free_[i]) c[i] = 0.0;
    return c;
  }

  std::vector<cplx> default_start() const {
    std::vector<cplx> ug(N_);
    for (size_t i = 0; i < N_; ++i) ug[i] = frame_[i] * prob_.g[i];
    std::vector<cplx> c = forward(ug);
    for (size_t i = 0; i < N_; ++i)
      if (!free_[i]) c[i] = 0.0;
    return c;
  }

  std::vector<cplx> all_to_h() const { return std::vector<cplx>(N_, 0.0); }
  std::vector<cplx> all_to_g() const {
    std::vector<cplx> c(coeff_f_);
    for (size_t i = 0; i < N_; ++i)
      if (!free_[i]) c[i] = 0.0;
    return c;
  }

  OracleObjective exact(std::span<const cplx> gp) const {
    std::vector<cplx> hp(N_);
    for (size_t i = 0; i < N_; ++i) hp[i] = prob_.f[i] - gp[i];
    const double c1 = grid_norm(gp, prob_.weight1, prob_.r) / norm_g_;
    const double c2 = grid_norm(hp, prob_.weight2, prob_.p) / norm_h_;
    return {c1, c2, std::max(c1, c2)};
  }

  double leakage(std::span<const cplx> x, const std::vector<char>& cone) const {
    std::vector<cplx> ux(N_);
    for (size_t i = 0; i < N_; ++i) ux[i] = frame_[i] * x[i];
    std::vector<cplx> c = forward(ux);
    double top = 0.0, out = 0.0;
    for (size_t i = 0; i < N_; ++i) {
      top = std::max(top, std::abs(c[i]));
      if (!cone[i]) out = std::max(out, std::abs(c[i]));
    }
    return top == 0.0 ? 0.0 : out / top;
  }
  const std::vector<char>& cone1() const { return in1_; }
  const std::vector<char>& cone2() const { return in2_; }
  const std::vector<cplx>& base() const { return base_; }
  const std::vector<cplx>& coefficients_of_f() const { return coeff_f_; }

 private:
  void validate() const {
    const size_t N = prob_.size();
    if (prob_.n1 < 1 || prob_.n2 < 2) throw InputError("oracle: bad grid shape");
    if (prob_.f.size() != N || prob_.g.size() != N || prob_.h.size() != N ||
        prob_.weight1.size() != N || prob_.weight2.size() != N ||
        (!prob_.frame.empty() && prob_.frame.size() != N) ||
        (!prob_.free_mask.empty() && prob_.free_mask.size() != N))
      throw InputError("oracle: array sizes do not match the grid");
    for (size_t i = 0; i < N; ++i) {
      if (!(prob_.weight1[i] > 0.0) || !(prob_.weight2[i] > 0.0))
        throw InputError("oracle: weights must be positive");
      if (!prob_.frame.empty() && !(prob_.frame[i] > 0.0))
        throw InputError("oracle: frame must be positive");
    }
    if (!(prob_.r > 0.0) || !(prob_.p > 0.0)) throw InputError("oracle: exponents must be positive");
  }

  const OracleProblem& prob_;
  size_t N_;
  std::vector<double> frame_;
  std::vector<char> in1_, in2_, free_;
  std::vector<cplx> base_, coeff_f_;
  bool feasible_ = true;
  double norm_g_ = 0.0, norm_h_ = 0.0;
};

/// Smoothed norm of x in L^s(w) (s = inf: power-mean surrogate with
/// exponent `big`) and the Wirtinger gradient with respect to conj(x).
double smooth_norm(std::span<const cplx> x, std::span<const double> w, double s,
                   double eta, double big, std::vector<cplx>* grad) {
  const size_t N = x.size();
  const bool sup = std::isinf(s);
  const double e = sup ? big : s;
  std::vector<double> t(N);
  double tmax = 0.0;
  for (size_t i = 0; i < N; ++i) {
    const double sm = std::sqrt(std::norm(x[i]) + eta * eta);
    t[i] = sup ? sm / w[i] : sm * std::pow(w[i], 1.0 / e);
    tmax = std::max(tmax, t[i]);
  }
  double acc = 0.0;
  for (size_t i = 0; i < N; ++i) acc += std::pow(t[i] / tmax, e);
  const double norm = tmax * std::pow(acc / N, 1.0 / e);
  if (grad) {
    grad->resize(N);
    for (size_t i = 0; i < N; ++i) {
      const double s2 = std::norm(x[i]) + eta * eta;
      (*grad)[i] = 0.5 / N * norm * std::pow(t[i] / norm, e) * x[i] / s2;
    }
  }
  return norm;
}

struct Stage {
  double eta;
  double tau;
  double big;
};

class Descent {
 public:
  Descent(const OracleProblem& prob, const Workspace& ws) : prob_(prob), ws_(ws) {}

  /// Smoothed objective and gradient with respect to conj(d) on the free set.
  double value(std::span<const cplx> d, const Stage& st, std::vector<cplx>* grad) const {
    const size_t N = ws_.size();
    std::vector<cplx> gp = ws_.g_prime(d);
    std::vector<cplx> hp(N);
    for (size_t i = 0; i < N; ++i) hp[i] = prob_.f[i] - gp[i];
    std::vector<cplx> ga, gb;
    const double a = smooth_norm(gp, prob_.weight1, prob_.r, st.eta, st.big, grad ? &ga : nullptr) / ws_.norm_g();
    const double b = smooth_norm(hp, prob_.weight2, prob_.p, st.eta, st.big, grad ? &gb : nullptr) / ws_.norm_h();
    const double mx = std::max(a, b);
    const double ea = std::exp((a - mx) / st.tau), eb = std::exp((b - mx) / st.tau);
    const double val = mx + st.tau * std::log(ea + eb);
    if (grad) {
      const double sa = ea / (ea + eb) / ws_.norm_g(), sb = eb / (ea + eb) / ws_.norm_h();
      std::vector<cplx> v(N);
      const auto& fr = ws_.frame();
      for (size_t i = 0; i < N; ++i) v[i] = (sa * ga[i] - sb * gb[i]) / fr[i];
      *grad = ws_.forward(v);
      const auto& mask = ws_.free_mask();
      for (size_t i = 0; i < N; ++i) (*grad)[i] = mask[i] ? (*grad)[i] * static_cast<double>(N) : 0.0;
    }
    return val;
  }

  /// Armijo-backtracked gradient descent; updates `best` with exact values.
  int run(std::vector<cplx>& d, const Stage& st, int iterations,
          std::vector<cplx>& best_d, double& best_val, bool& converged) const {
    std::vector<cplx> grad, grad_new, trial(d.size());
    double val = value(d, st, &grad);
    double step = 0.0;
    int used = 0, quiet = 0;
    for (; used < iterations; ++used) {
      const double gg = real_dot(grad, grad);
      if (!(gg > 0.0) || !std::isfinite(gg)) {
        converged = true;
        break;
      }
      if (step <= 0.0) step = 0.1 / std::sqrt(gg);
      double v_new = kInf;
      bool accepted = false;
      for (int bt = 0; bt < 60; ++bt) {
        for (size_t i = 0; i < d.size(); ++i) trial[i] = d[i] - step * grad[i];
        v_new = value(trial, st, nullptr);
        if (v_new <= val - 1e-4 * step * gg) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) {
        converged = true;
        break;
      }
      value(trial, st, &grad_new);
      // Barzilai-Borwein guess for the next trial step.
      std::vector<cplx> s(d.size()), y(d.size());
      for (size_t i = 0; i < d.size(); ++i) {
        s[i] = trial[i] - d[i];
        y[i] = grad_new[i] - grad[i];
      }
      const double sy = real_dot(s, y);
      step = sy > 0.0 ? real_dot(s, s) / sy : step * 2.0;
      const double decrease = val - v_new;
      d.swap(trial);
      grad.swap(grad_new);
      val = v_new;
      const double exact = ws_.exact(ws_.g_prime(d)).value;
      if (exact < best_val) {
        best_val = exact;
        best_d = d;
      }
      quiet = decrease <= prob_.settings.tolerance * std::max(1.0, std::abs(val)) ? quiet + 1 : 0;
      if (quiet >= 5) {
        converged = true;
        break;
      }
    }
    return used;
  }

 private:
  const OracleProblem& prob_;
  const Workspace& ws_;
};

OracleResult finish(const OracleProblem& prob, const Workspace& ws,
                    std::span<const cplx> d, std::string method, int iterations,
                    bool converged, bool heuristic) {
  OracleResult res;
  res.g_prime = ws.g_prime(d);
  res.h_prime.resize(ws.size());
  for (size_t i = 0; i < ws.size(); ++i) res.h_prime[i] = prob.f[i] - res.g_prime[i];
  const OracleObjective obj = ws.exact(res.g_prime);
  res.c1 = obj.c1;
  res.c2 = obj.c2;
  res.objective = obj.value;
  res.converged = converged;
  res.feasible = ws.feasible();
  res.heuristic = heuristic;
  res.iterations = iterations;
  res.leakage_g = ws.leakage(res.g_prime, ws.cone1());
  res.leakage_h = ws.leakage(res.h_prime, ws.cone2());
  double err = 0.0, top = 0.0;
  for (size_t i = 0; i < ws.size(); ++i) {
    err = std::max(err, std::abs(res.g_prime[i] + res.h_prime[i] - prob.f[i]));
    top = std::max(top, std::abs(prob.f[i]));
  }
  res.decomposition_error = top > 0.0 ? err / top : err;
  res.method = std::move(method);
  return res;
}

std::vector<std::vector<cplx>> candidate_starts(const OracleProblem& prob, const Workspace& ws) {
  std::vector<std::vector<cplx>> starts{ws.default_start(), ws.all_to_h(), ws.all_to_g()};
  for (const auto& g : prob.warm_starts) {
    if (g.size() != ws.size()) throw InputError("oracle: warm start has the wrong size");
    starts.push_back(ws.coefficients_of(g));
  }
  return starts;
}

void pick_best(const Workspace& ws, const std::vector<std::vector<cplx>>& starts,
               std::vector<cplx>& best_d, double& best_val) {
  for (const auto& s : starts) {
    const double v = ws.exact(ws.g_prime(s)).value;
    if (v < best_val) {
      best_val = v;
      best_d = s;
    }
  }
}

double typical_scale(const OracleProblem& prob) {
  double s = 0.0;
  for (const auto& x : prob.f) s += std::norm(x);
  for (const auto& x : prob.g) s += std::norm(x);
  return std::sqrt(s / (2.0 * prob.size())) + 1e-300;
}

std::vector<Stage> stages(const OracleProblem& prob) {
  const double sc = typical_scale(prob);
  return {{1e-1 * sc, 1e-1, 8}, {1e-2 * sc, 3e-2, 16}, {1e-3 * sc, 1e-2, 32},
          {1e-4 * sc, 3e-3, 64}, {1e-6 * sc, 1e-3, 128}, {1e-8 * sc, 1e-4, 256}};
}

OracleResult descend_from(const OracleProblem& prob, const Workspace& ws,
                          std::vector<std::vector<cplx>> starts, const char* method,
                          bool heuristic) {
  std::vector<cplx> best_d;
  double best_val = kInf;
  pick_best(ws, starts, best_d, best_val);
  Descent desc(prob, ws);
  const auto plan = stages(prob);
  const int per_stage = std::max(1, prob.settings.max_iterations / static_cast<int>(plan.size()));
  int total = 0;
  bool converged = false;
  std::vector<cplx> d = best_d;
  for (const Stage& st : plan) {
    bool stage_done = false;
    total += desc.run(d, st, per_stage, best_d, best_val, stage_done);
    converged = stage_done;
  }
  return finish(prob, ws, best_d, method, total, converged, heuristic);
}

// ----------------------------------------------------------- r = p = 2

/// Minimizes alpha |g'|^2 + beta |h'|^2 (weighted, squared norms) by
/// conjugate gradients on the free coefficients.
std::vector<cplx> least_squares(const OracleProblem& prob, const Workspace& ws,
                                double alpha, double beta, std::vector<cplx> d) {
  const size_t N = ws.size();
  const auto& fr = ws.frame();
  const auto& mask = ws.free_mask();
  std::vector<double> diag(N);
  for (size_t i = 0; i < N; ++i)
    diag[i] = (alpha * prob.weight1[i] + beta * prob.weight2[i]) / (fr[i] * fr[i]);
  auto apply = [&](const std::vector<cplx>& x) {
    std::vector<cplx> spec(N, 0.0);
    for (size_t i = 0; i < N; ++i)
      if (mask[i]) spec[i] = x[i];
    std::vector<cplx> v = ws.inverse(spec);
    for (size_t i = 0; i < N; ++i) v[i] *= diag[i];
    std::vector<cplx> out = ws.forward(v);
    for (size_t i = 0; i < N; ++i) out[i] = mask[i] ? out[i] : 0.0;
    return out;
  };
  // Right-hand side from the fixed part b of the framed spectrum.
  std::vector<cplx> b = ws.inverse(ws.base());
  std::vector<cplx> uf(N);
  for (size_t i = 0; i < N; ++i) uf[i] = fr[i] * prob.f[i];
  std::vector<cplx> rhs_v(N);
  for (size_t i = 0; i < N; ++i)
    rhs_v[i] = (beta * prob.weight2[i] * (uf[i] - b[i]) - alpha * prob.weight1[i] * b[i]) /
               (fr[i] * fr[i]);
  std::vector<cplx> rhs = ws.forward(rhs_v);
  for (size_t i = 0; i < N; ++i) rhs[i] = mask[i] ? rhs[i] : 0.0;

  std::vector<cplx> ad = apply(d), res(N), dir(N);
  for (size_t i = 0; i < N; ++i) res[i] = rhs[i] - ad[i];
  dir = res;
  double rr = real_dot(res, res);
  const double stop = 1e-30 * std::max(1e-300, real_dot(rhs, rhs));
  for (int it = 0; it < 500 && rr > stop; ++it) {
    std::vector<cplx> ap = apply(dir);
    const double pap = real_dot(dir, ap);
    if (!(pap > 0.0)) break;
    const double a = rr / pap;
    for (size_t i = 0; i < N; ++i) {
      d[i] += a * dir[i];
      res[i] -= a * ap[i];
    }
    const double rr_new = real_dot(res, res);
    for (size_t i = 0; i < N; ++i) dir[i] = res[i] + (rr_new / rr) * dir[i];
    rr = rr_new;
  }
  return d;
}

OracleResult solve_l2(const OracleProblem& prob, const Workspace& ws) {
  const double A2 = ws.norm_g() * ws.norm_g(), B2 = ws.norm_h() * ws.norm_h();
  std::vector<cplx> d = ws.default_start();
  auto solve_at = [&](double t) {
    d = least_squares(prob, ws, t / A2, (1.0 - t) / B2, d);
    return ws.exact(ws.g_prime(d));
  };
  // c1 decreases and c2 increases in t; bisect for the crossing.
  double lo = 0.0, hi = 1.0;
  std::vector<cplx> best_d;
  double best_val = kInf;
  int iters = 0;
  for (; iters < 60; ++iters) {
    const double t = 0.5 * (lo + hi);
    const OracleObjective o = solve_at(t);
    if (o.value < best_val) {
      best_val = o.value;
      best_d = d;
    }
    if (o.c1 > o.c2) lo = t;
    else hi = t;
    if (hi - lo < 1e-12) break;
  }
  pick_best(ws, candidate_starts(prob, ws), best_d, best_val);
  return finish(prob, ws, best_d, "least-squares-pareto", iters, true, false);
}

}  // namespace

double grid_norm(std::span<const cplx> x, std::span<const double> w, double s) {
  if (x.size() != w.size()) throw InputError("norm: size mismatch");
  if (std::isinf(s)) {
    double m = 0.0;
    for (size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i]) / w[i]);
    return m;
  }
  double acc = 0.0;
  for (size_t i = 0; i < x.size(); ++i) acc += std::pow(std::abs(x[i]), s) * w[i];
  return std::pow(acc / static_cast<double>(x.size()), 1.0 / s);
}

OracleProblem make_oracle_problem(const TorusFn2D& f, const TorusFn2D& g,
                                  const TorusFn2D& h, const Weight2D& weight1,
                                  const Weight2D& weight2, SpectralCone cone1,
                                  SpectralCone cone2, double r, double p) {
  OracleProblem prob;
  prob.n1 = f.n1();
  prob.n2 = f.n2();
  prob.f.assign(f.values().begin(), f.values().end());
  prob.g.assign(g.values().begin(), g.values().end());
  prob.h.assign(h.values().begin(), h.values().end());
  prob.weight1.assign(weight1.values().begin(), weight1.values().end());
  prob.weight2.assign(weight2.values().begin(), weight2.values().end());
  prob.cone1 = cone1;
  prob.cone2 = cone2;
  prob.r = r;
  prob.p = p;
  return prob;
}

OracleProblem make_oracle_problem(const TorusFn1D& f, const TorusFn1D& g,
                                  const TorusFn1D& h, const Weight1D& weight1,
                                  const Weight1D& weight2, SpectralCone cone1,
                                  SpectralCone cone2, double r, double p) {
  OracleProblem prob;
  prob.n1 = 1;
  prob.n2 = f.size();
  prob.f.assign(f.values().begin(), f.values().end());
  prob.g.assign(g.values().begin(), g.values().end());
  prob.h.assign(h.values().begin(), h.values().end());
  prob.weight1.assign(weight1.values().begin(), weight1.values().end());
  prob.weight2.assign(weight2.values().begin(), weight2.values().end());
  prob.cone1 = cone1;
  prob.cone2 = cone2;
  prob.r = r;
  prob.p = p;
  return prob;
}

OracleObjective oracle_objective(const OracleProblem& prob, std::span<const cplx> g_prime) {
  Workspace ws(prob);
  return ws.exact(g_prime);
}

OracleResult solve_convex(const OracleProblem& prob) {
  if (prob.r < 1.0 || prob.p < 1.0) throw InputError("solve_convex needs r, p >= 1");
  Workspace ws(prob);
  if (prob.r == 2.0 && prob.p == 2.0) return solve_l2(prob, ws);
  return descend_from(prob, ws, candidate_starts(prob, ws), "smoothed-descent", false);
}

OracleResult solve_heuristic(const OracleProblem& prob) {
  if (!(prob.r > 0.0 && prob.r < 1.0 && prob.p >= 1.0))
    throw InputError("solve_heuristic needs 0 < r < 1 <= p");
  Workspace ws(prob);
  auto starts = candidate_starts(prob, ws);
  std::mt19937_64 rng(prob.settings.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sc = typical_scale(prob);
  const auto& mask = ws.free_mask();
  for (int k = 0; k < prob.settings.restarts; ++k) {
    std::vector<cplx> s = starts.front();
    for (size_t i = 0; i < s.size(); ++i)
      if (mask[i]) s[i] += sc * cplx(normal(rng), normal(rng)) / std::sqrt(static_cast<double>(s.size()));
    starts.push_back(std::move(s));
  }
  OracleResult best;
  best.objective = kInf;
  for (auto& s : starts) {
    OracleResult r = descend_from(prob, ws, {s}, "heuristic-multistart", true);
    if (r.objective < best.objective) best = std::move(r);
  }
  return best;
}

OracleResult solve_oracle(const OracleProblem& prob) {
  return prob.r < 1.0 ? solve_heuristic(prob) : solve_convex(prob);
}

}  // namespace ksplit
