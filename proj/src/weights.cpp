#include "ksplit/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ksplit {

// ---------------------------------------------------------------- families

ArcFamily::ArcFamily(int n, std::vector<Arc> arcs, std::string name)
    : n_(n), arcs_(std::move(arcs)), name_(std::move(name)) {
  if (n_ <= 0) throw InputError("arc family needs a positive grid size");
  for (const auto& a : arcs_)
    if (a.length < 1 || a.length > n_ || a.start < 0 || a.start >= n_)
      throw InputError("arc family contains an empty or malformed arc");
}

ArcFamily ArcFamily::shifted_dyadic(int n, int min_length) {
  std::vector<Arc> arcs{{0, n}};
  for (int len = n / 2; len >= std::max(1, std::min(min_length, n)); len /= 2) {
    for (int s = 0; s < n; s += len) {
      arcs.push_back({s, len});
      if (len > 1) arcs.push_back({(s + len / 2) % n, len});
    }
    if (len == 1) break;
  }
  return ArcFamily(n, std::move(arcs), "shifted-dyadic");
}

ArcFamily ArcFamily::aligned_dyadic(int n, int min_length) {
  std::vector<Arc> arcs;
  for (int len = n; len >= min_length && len >= 1; len /= 2)
    for (int s = 0; s < n; s += len) arcs.push_back({s, len});
  return ArcFamily(n, std::move(arcs), "aligned-dyadic");
}

ArcFamily ArcFamily::all_arcs(int n, int min_length) {
  std::vector<Arc> arcs;
  for (int len = min_length; len <= n; ++len)
    for (int s = 0; s < (len == n ? 1 : n); ++s) arcs.push_back({s, len});
  return ArcFamily(n, std::move(arcs), "all-arcs");
}

namespace {

void require_family(int n, const ArcFamily& fam) {
  if (fam.grid_size() != n) throw InputError("arc family grid size mismatch");
}

template <typename Fn>
double arc_mean(std::span<const double> v, const Arc& a, Fn fn) {
  const int n = static_cast<int>(v.size());
  double s = 0.0;
  for (int t = 0; t < a.length; ++t) s += fn(v[(a.start + t) % n]);
  return s / a.length;
}

double identity(double x) { return x; }

/// Cached evaluation of a per-arc maximum.
template <typename PerArc>
double family_max(const Weight1D* cache_owner, const std::string& key,
                  const ArcFamily& fam, PerArc per_arc) {
  if (cache_owner != nullptr && fam.name() != "custom") {
    if (auto hit = cache_owner->cache().find(key)) return *hit;
  }
  const auto& arcs = fam.arcs();
  double value = kernels::max_reduce(static_cast<std::int64_t>(arcs.size()),
                                     [&](std::int64_t i) { return per_arc(arcs[i]); });
  if (cache_owner != nullptr && fam.name() != "custom")
    cache_owner->cache().store(key, value);
  return value;
}

std::string cache_key(const char* cond, double exponent, const ArcFamily& fam) {
  std::ostringstream os;
  os.precision(17);
  os << cond << '|' << exponent << '|' << fam.name() << '|' << fam.size();
  return os.str();
}

}  // namespace

double ap_constant(const Weight1D& w, double p, const ArcFamily& fam) {
  if (!(p > 1.0)) throw InputError("A_p needs p > 1");
  require_family(w.size(), fam);
  const double e = 1.0 / (1.0 - p);
  auto v = w.values();
  return family_max(&w, cache_key("Ap", p, fam), fam, [&](const Arc& a) {
    const double avg = arc_mean(v, a, identity);
    const double avg_dual = arc_mean(v, a, [e](double x) { return std::pow(x, e); });
    return avg * std::pow(avg_dual, p - 1.0);
  });
}

double a1_constant(const Weight1D& w, const ArcFamily& fam) {
  require_family(w.size(), fam);
  auto v = w.values();
  const int n = w.size();
  return family_max(&w, cache_key("A1", 1.0, fam), fam, [&](const Arc& a) {
    double lo = std::numeric_limits<double>::infinity();
    for (int t = 0; t < a.length; ++t) lo = std::min(lo, v[(a.start + t) % n]);
    return arc_mean(v, a, identity) / lo;
  });
}

double reverse_holder_constant(const Weight1D& w, double delta,
                               const ArcFamily& fam) {
  if (!(delta > 0.0)) throw InputError("reverse Hoelder exponent must be positive");
  require_family(w.size(), fam);
  auto v = w.values();
  return family_max(&w, cache_key("RH", delta, fam), fam, [&](const Arc& a) {
    const double high =
        arc_mean(v, a, [delta](double x) { return std::pow(x, 1.0 + delta); });
    return std::pow(high, 1.0 / (1.0 + delta)) / arc_mean(v, a, identity);
  });
}

double bmo_norm(std::span<const double> phi, const ArcFamily& fam) {
  require_family(static_cast<int>(phi.size()), fam);
  return family_max(nullptr, "", fam, [&](const Arc& a) {
    const double avg = arc_mean(phi, a, identity);
    return arc_mean(phi, a, [avg](double x) { return std::abs(x - avg); });
  });
}

double bmo_norm(const TorusFn1D& phi, const ArcFamily& fam) {
  std::vector<double> re(phi.size());
  for (int k = 0; k < phi.size(); ++k) {
    if (phi[k].imag() != 0.0) throw InputError("BMO norm needs a real function");
    re[k] = phi[k].real();
  }
  return bmo_norm(re, fam);
}

double bmo_log_norm(const Weight1D& w, const ArcFamily& fam) {
  if (fam.name() != "custom")
    if (auto hit = w.cache().find(cache_key("BMOlog", 0.0, fam))) return *hit;
  std::vector<double> logs(w.size());
  for (int k = 0; k < w.size(); ++k) logs[k] = std::log(w[k]);
  const double value = bmo_norm(logs, fam);
  if (fam.name() != "custom") w.cache().store(cache_key("BMOlog", 0.0, fam), value);
  return value;
}

// ---------------------------------------------------------------- rectangles

namespace {

template <typename PerRect>
double rect_max(const Weight2D& w, const ArcFamily& fam1, const ArcFamily& fam2,
                PerRect per_rect) {
  require_family(w.n1(), fam1);
  require_family(w.n2(), fam2);
  const auto& arcs1 = fam1.arcs();
  const auto& arcs2 = fam2.arcs();
  const std::int64_t total =
      static_cast<std::int64_t>(arcs1.size()) * static_cast<std::int64_t>(arcs2.size());
  return kernels::max_reduce(total, [&](std::int64_t idx) {
    const Arc& a = arcs1[idx / arcs2.size()];
    const Arc& b = arcs2[idx % arcs2.size()];
    return per_rect(a, b);
  });
}

template <typename Fn>
double rect_mean(const Weight2D& w, const Arc& a, const Arc& b, Fn fn) {
  const int n1 = w.n1(), n2 = w.n2();
  double s = 0.0;
  for (int t1 = 0; t1 < a.length; ++t1) {
    const int i1 = (a.start + t1) % n1;
    for (int t2 = 0; t2 < b.length; ++t2) s += fn(w.at(i1, (b.start + t2) % n2));
  }
  return s / (static_cast<double>(a.length) * b.length);
}

}  // namespace

double ap_constant(const Weight2D& w, double p, const ArcFamily& fam1,
                   const ArcFamily& fam2) {
  if (!(p > 1.0)) throw InputError("A_p needs p > 1");
  const double e = 1.0 / (1.0 - p);
  return rect_max(w, fam1, fam2, [&](const Arc& a, const Arc& b) {
    const double avg = rect_mean(w, a, b, identity);
    const double dual = rect_mean(w, a, b, [e](double x) { return std::pow(x, e); });
    return avg * std::pow(dual, p - 1.0);
  });
}

double a1_constant(const Weight2D& w, const ArcFamily& fam1,
                   const ArcFamily& fam2) {
  return rect_max(w, fam1, fam2, [&](const Arc& a, const Arc& b) {
    double lo = std::numeric_limits<double>::infinity();
    rect_mean(w, a, b, [&lo](double x) {
      lo = std::min(lo, x);
      return x;
    });
    return rect_mean(w, a, b, identity) / lo;
  });
}

double reverse_holder_constant(const Weight2D& w, double delta,
                               const ArcFamily& fam1, const ArcFamily& fam2) {
  if (!(delta > 0.0)) throw InputError("reverse Hoelder exponent must be positive");
  return rect_max(w, fam1, fam2, [&](const Arc& a, const Arc& b) {
    const double high =
        rect_mean(w, a, b, [delta](double x) { return std::pow(x, 1.0 + delta); });
    return std::pow(high, 1.0 / (1.0 + delta)) / rect_mean(w, a, b, identity);
  });
}

// ---------------------------------------------------------------- fibers

std::string condition_name(Condition c) {
  switch (c) {
    case Condition::kAp: return "A_p";
    case Condition::kA1: return "A_1";
    case Condition::kReverseHolder: return "RH";
    case Condition::kBmoLog: return "BMO-log";
  }
  return "?";
}

namespace {

double fiber_constant(const Weight1D& fiber, Condition condition, double exponent,
                      const ArcFamily& fam) {
  switch (condition) {
    case Condition::kAp: return ap_constant(fiber, exponent, fam);
    case Condition::kA1: return a1_constant(fiber, fam);
    case Condition::kReverseHolder:
      return reverse_holder_constant(fiber, exponent, fam);
    case Condition::kBmoLog: return bmo_log_norm(fiber, fam);
  }
  return 0.0;
}

}  // namespace

double uniform_fiber_constant(const Weight2D& w, FiberVariable along,
                              Condition condition, double exponent) {
  const bool second = along == FiberVariable::kSecond;
  const int fibers = second ? w.n1() : w.n2();
  const ArcFamily fam = ArcFamily::shifted_dyadic(second ? w.n2() : w.n1());
  // Fiber loop runs serially; each fiber's arc reduction is parallel.
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < fibers; ++i) {
    Weight1D fiber = second ? w.fiber_z2(i) : w.fiber_z1(i);
    best = std::max(best, fiber_constant(fiber, condition, exponent, fam));
  }
  return best;
}

// ---------------------------------------------------------------- transforms

DualWeights dual_weights(const Weight2D& w1, const Weight2D& w2,
                         const Weight1D& a1, const Weight1D& a2,
                         const Weight1D& b1, const Weight1D& b2, double p) {
  if (!(p > 1.0)) throw InputError("dual weights need p > 1");
  const double q = p / (p - 1.0);
  return DualWeights{q,
                     b2,
                     w2,
                     a2,
                     pow(b1, 1.0 - q),
                     pow(w1, 1.0 - q),
                     pow(a1, 1.0 - q)};
}

SingleWeight single_weight_reduction(const Weight2D& w1, const Weight2D& w2,
                                     double q) {
  if (!(q > 1.0)) throw InputError("single-weight reduction needs q > 1");
  const double e = 1.0 / (q - 1.0);
  std::vector<double> w(w1.values().size()), u(w.size());
  for (size_t k = 0; k < w.size(); ++k) {
    const double x1 = w1.values()[k], x2 = w2.values()[k];
    w[k] = std::pow(x1, q * e) / std::pow(x2, e);
    u[k] = std::pow(x1 / x2, e);
  }
  return SingleWeight{Weight2D(w1.grid1(), w1.grid2(), std::move(w)),
                      Weight2D(w1.grid1(), w1.grid2(), std::move(u))};
}

Weight2D glue_weight(const Weight2D& w1, const Weight2D& w2, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw InputError("theta must lie in (0,1)");
  return w1 * pow(w2, theta / (theta - 1.0));
}

// ---------------------------------------------------------------- hypotheses

bool HypothesisReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const HypothesisEntry& e) { return e.pass; });
}

const HypothesisEntry& HypothesisReport::entry(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return e;
  throw InputError("no hypothesis entry named " + name);
}

namespace {

struct Checker {
  HypothesisReport report;
  const HypothesisThresholds& th;

  void add(std::string name, double value, double threshold, size_t fam_size,
           std::string note = "") {
    report.entries.push_back({std::move(name), value, threshold,
                              value <= threshold, fam_size, std::move(note)});
  }
};

const Weight2D& need(const std::optional<Weight2D>& w, const char* what) {
  if (!w) throw InputError(std::string("hypothesis check needs weight ") + what);
  return *w;
}

Weight1D or_one(const std::optional<Weight1D>& w, const Grid1D& g) {
  return w ? *w : Weight1D::constant(g, 1.0);
}

size_t rect_count(const Weight2D& w) {
  return ArcFamily::shifted_dyadic(w.n1()).size() *
         ArcFamily::shifted_dyadic(w.n2()).size();
}

/// Smallest A_s constant over the sweep (A_infinity membership proxy).
std::pair<double, double> best_ap_2d(const Weight2D& w,
                                     const std::vector<double>& sweep) {
  const auto f1 = ArcFamily::shifted_dyadic(w.n1());
  const auto f2 = ArcFamily::shifted_dyadic(w.n2());
  double best = std::numeric_limits<double>::infinity(), arg = 0.0;
  for (double s : sweep) {
    const double c = ap_constant(w, s, f1, f2);
    if (c < best) {
      best = c;
      arg = s;
    }
  }
  return {best, arg};
}

std::string exponent_note(double s) {
  std::ostringstream os;
  os << "best exponent " << s;
  return os.str();
}

}  // namespace

HypothesisReport hypothesis_check(const std::string& theorem_id,
                                  const HypothesisInputs& in,
                                  const HypothesisThresholds& th) {
  Checker ck{HypothesisReport{theorem_id, {}}, th};
  if (theorem_id == "rght") {
    const auto& u1 = need(in.w1, "w1");
    const auto& u2 = need(in.w2, "w2");
    const auto f1 = ArcFamily::shifted_dyadic(u1.n1());
    const auto f2 = ArcFamily::shifted_dyadic(u1.n2());
    ck.add("u1 in A_p (2-D)", ap_constant(u1, in.p, f1, f2), th.ap, rect_count(u1));
    ck.add("u2 in A_1 (2-D)", a1_constant(u2, f1, f2), th.a1, rect_count(u2));
    const auto fz2 = ArcFamily::shifted_dyadic(u1.n2());
    const auto fz1 = ArcFamily::shifted_dyadic(u1.n1());
    ck.add("log a1 in BMO", bmo_log_norm(or_one(in.a1, u1.grid2()), fz2), th.bmo, fz2.size());
    ck.add("log a2 in BMO", bmo_log_norm(or_one(in.a2, u1.grid2()), fz2), th.bmo, fz2.size());
    ck.add("log b1 in BMO", bmo_log_norm(or_one(in.b1, u1.grid1()), fz1), th.bmo, fz1.size());
    ck.add("log b2 in BMO", bmo_log_norm(or_one(in.b2, u1.grid1()), fz1), th.bmo, fz1.size());
    ck.add("u2^p u1 in RH uniformly in z2",
           uniform_fiber_constant(pow(u2, in.p) * u1, FiberVariable::kSecond,
                                  Condition::kReverseHolder, in.rh_delta),
           th.reverse_holder, fz2.size());
  } else if (theorem_id == "lft") {
    const auto& w1 = need(in.w1, "w1");
    const auto& w2 = need(in.w2, "w2");
    auto [c1, s1] = best_ap_2d(w1, in.exponent_sweep);
    ck.add("w1 in A_inf (2-D)", c1, th.ap, rect_count(w1), exponent_note(s1));
    ck.add("w2 in A_p (2-D)",
           ap_constant(w2, in.p, ArcFamily::shifted_dyadic(w2.n1()),
                       ArcFamily::shifted_dyadic(w2.n2())),
           th.ap, rect_count(w2));
  } else if (theorem_id == "one_naib") {
    const auto& w1 = need(in.w1, "w1");
    const auto& w2 = need(in.w2, "w2");
    const size_t fz2 = ArcFamily::shifted_dyadic(w1.n2()).size();
    const size_t fz1 = ArcFamily::shifted_dyadic(w1.n1()).size();
    double best_l = std::numeric_limits<double>::infinity(), arg_l = 0.0;
    double best_m = std::numeric_limits<double>::infinity(), arg_m = 0.0;
    for (double s : in.exponent_sweep) {
      const double cl = uniform_fiber_constant(w1, FiberVariable::kSecond, Condition::kAp, s);
      if (cl < best_l) { best_l = cl; arg_l = s; }
      const double cm = std::max(
          uniform_fiber_constant(w1, FiberVariable::kFirst, Condition::kAp, s),
          uniform_fiber_constant(w2, FiberVariable::kFirst, Condition::kAp, s));
      if (cm < best_m) { best_m = cm; arg_m = s; }
    }
    ck.add("w1(z1,.) in A_l uniformly", best_l, th.ap, fz2, exponent_note(arg_l));
    ck.add("w2(z1,.) in A_p uniformly",
           uniform_fiber_constant(w2, FiberVariable::kSecond, Condition::kAp, in.p),
           th.ap, fz2);
    ck.add("w1(.,z2), w2(.,z2) in A_m uniformly", best_m, th.ap, fz1, exponent_note(arg_m));
  } else if (theorem_id == "inf_neib_all_q") {
    const auto& w1 = need(in.w1, "w1");
    const auto& w2 = need(in.w2, "w2");
    const auto fz2 = ArcFamily::shifted_dyadic(w1.n2());
    const auto fz1 = ArcFamily::shifted_dyadic(w1.n1());
    double l1 = 0.0;
    for (double x : pow(w1, 1.0 / (1.0 - in.p)).values()) l1 += x;
    ck.add("w1^{1/(1-p)} integrable (grid mean)", l1 / w1.values().size(),
           std::numeric_limits<double>::infinity(), 1);
    ck.add("w2^p w1 in RH uniformly in z2",
           uniform_fiber_constant(pow(w2, in.p) * w1, FiberVariable::kSecond,
                                  Condition::kReverseHolder, in.rh_delta),
           th.reverse_holder, fz2.size());
    ck.add("w1 in A_p uniformly in z2",
           uniform_fiber_constant(w1, FiberVariable::kSecond, Condition::kAp, in.p),
           th.ap, fz2.size());
    ck.add("w2 in A_1 uniformly in z2",
           uniform_fiber_constant(w2, FiberVariable::kSecond, Condition::kA1), th.a1,
           fz2.size());
    ck.add("log a1 in BMO", bmo_log_norm(or_one(in.a1, w1.grid2()), fz2), th.bmo, fz2.size());
    ck.add("log a2 in BMO", bmo_log_norm(or_one(in.a2, w1.grid2()), fz2), th.bmo, fz2.size());
    ck.add("log b1 in BMO", bmo_log_norm(or_one(in.b1, w1.grid1()), fz1), th.bmo, fz1.size());
    ck.add("log b2 in BMO", bmo_log_norm(or_one(in.b2, w1.grid1()), fz1), th.bmo, fz1.size());
    ck.add("log w1(.,z2) in BMO uniformly in z1",
           uniform_fiber_constant(w1, FiberVariable::kFirst, Condition::kBmoLog),
           th.bmo, fz1.size());
    ck.add("log w2(.,z2) in BMO uniformly in z1",
           uniform_fiber_constant(w2, FiberVariable::kFirst, Condition::kBmoLog),
           th.bmo, fz1.size());
  } else if (theorem_id == "glue") {
    const auto& w1 = need(in.w1, "w1");
    const auto& w2 = need(in.w2, "w2");
    const auto f1 = ArcFamily::shifted_dyadic(w1.n1());
    const auto f2 = ArcFamily::shifted_dyadic(w1.n2());
    ck.add("w1 in A_1 (2-D)", a1_constant(w1, f1, f2), th.a1, rect_count(w1));
    ck.add("w2 in A_1 (2-D)", a1_constant(w2, f1, f2), th.a1, rect_count(w2));
    auto [c, s] = best_ap_2d(w1 * w2, in.exponent_sweep);
    ck.add("w1 w2 in A_inf (2-D)", c, th.ap, rect_count(w1), exponent_note(s));
  } else {
    throw InputError("unknown theorem id '" + theorem_id + "'");
  }
  return ck.report;
}

}  // namespace ksplit
