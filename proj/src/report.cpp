#include "ksplit/report.hpp"

#include <ostream>

#include "ksplit/experiments.hpp"

namespace ksplit {

namespace {

void kv(std::ostream& os, const std::string& key, double v) { os << key << ": " << format_double(v) << '\n'; }
void kv(std::ostream& os, const std::string& key, const std::string& v) { os << key << ": " << v << '\n'; }
void kv(std::ostream& os, const std::string& key, bool v) { os << key << ": " << (v ? "true" : "false") << '\n'; }
void kv(std::ostream& os, const std::string& key, int v) { os << key << ": " << v << '\n'; }

void notes(std::ostream& os, const std::vector<std::string>& list) {
  for (size_t i = 0; i < list.size(); ++i) kv(os, "note." + std::to_string(i), list[i]);
}

void couple(std::ostream& os, const std::string& prefix, const CoupleReport& c) {
  kv(os, prefix + ".name", c.name);
  kv(os, prefix + ".r", c.r);
  kv(os, prefix + ".p", c.p);
  kv(os, prefix + ".method", c.method);
  kv(os, prefix + ".C1", c.C1);
  kv(os, prefix + ".C2", c.C2);
  kv(os, prefix + ".objective", c.objective);
  kv(os, prefix + ".decomposition_error", c.decomposition_error);
  kv(os, prefix + ".leakage", c.leakage);
}

}  // namespace

void write_report(std::ostream& os, const HypothesisReport& rep, const std::string& prefix) {
  kv(os, prefix + ".theorem", rep.theorem);
  kv(os, prefix + ".all_pass", rep.all_pass());
  for (size_t i = 0; i < rep.entries.size(); ++i) {
    const HypothesisEntry& e = rep.entries[i];
    const std::string k = prefix + "." + std::to_string(i);
    kv(os, k + ".name", e.name);
    kv(os, k + ".value", e.value);
    kv(os, k + ".threshold", e.threshold);
    kv(os, k + ".pass", e.pass);
    kv(os, k + ".family_size", static_cast<int>(e.family_size));
    if (!e.note.empty()) kv(os, k + ".note", e.note);
  }
}

void write_report(std::ostream& os, const Partition& part, const std::string& prefix) {
  kv(os, prefix + ".jmin", part.jmin);
  kv(os, prefix + ".jmax", part.jmax);
  kv(os, prefix + ".power", part.power);
  kv(os, prefix + ".c_lower", part.c_lower);
  kv(os, prefix + ".c_upper", part.c_upper);
  kv(os, prefix + ".c_sum", part.c_sum);
  kv(os, prefix + ".sum_error", part.sum_error);
  kv(os, prefix + ".max_leakage", part.max_leakage);
  kv(os, prefix + ".inner_defect", part.inner_defect);
}

void write_report(std::ostream& os, const SplitReport& rep) {
  kv(os, "grid", std::to_string(rep.g_prime.n1()) + "x" + std::to_string(rep.g_prime.n2()));
  kv(os, "A", rep.A);
  kv(os, "B", rep.B);
  kv(os, "norm_g_prime", rep.norm_g_prime);
  kv(os, "norm_h_prime", rep.norm_h_prime);
  kv(os, "C1", rep.C1);
  kv(os, "C2", rep.C2);
  kv(os, "decomposition_error", rep.decomposition_error);
  kv(os, "leakage_g", rep.leakage_g);
  kv(os, "leakage_h", rep.leakage_h);
  kv(os, "raw_leakage", rep.raw_leakage);
  kv(os, "input_leakage", rep.input_leakage);
  kv(os, "input_mismatch", rep.input_mismatch);
  kv(os, "y_sum_ratio", rep.y_sum_ratio);
  write_report(os, rep.partition);
  for (const LevelDiagnostics& d : rep.levels) {
    const std::string k = "level." + std::to_string(d.level);
    kv(os, k + ".active_fibers", d.active_fibers);
    kv(os, k + ".max_lambda", d.max_lambda_finite);
    kv(os, k + ".sup_phi", d.sup_phi);
    kv(os, k + ".corrector_bound", d.corrector_bound);
    kv(os, k + ".gimel_ratio", d.gimel_ratio);
    kv(os, k + ".g0_lq_ratio", d.g0_lq_ratio);
    kv(os, k + ".cz_good_ratio", d.cz_good_ratio);
    kv(os, k + ".cz_omega_ratio", d.cz_omega_ratio);
    kv(os, k + ".majorant_bmo", d.majorant_bmo);
  }
  if (rep.hypotheses) write_report(os, *rep.hypotheses);
  notes(os, rep.notes);
}

void write_report(std::ostream& os, const FiberwiseReport& rep) {
  kv(os, "max_c1", rep.max_c1);
  kv(os, "max_c2", rep.max_c2);
  kv(os, "decomposition_error", rep.decomposition_error);
  kv(os, "leakage_g", rep.leakage_g);
  kv(os, "leakage_h", rep.leakage_h);
  kv(os, "all_converged", rep.all_converged);
  kv(os, "heuristic", rep.heuristic);
  for (size_t i = 0; i < rep.fiber_c1.size(); ++i) {
    kv(os, "fiber." + std::to_string(i) + ".c1", rep.fiber_c1[i]);
    kv(os, "fiber." + std::to_string(i) + ".c2", rep.fiber_c2[i]);
  }
  notes(os, rep.notes);
}

void write_report(std::ostream& os, const GlueReport& rep) {
  for (size_t i = 0; i < rep.couples.size(); ++i) couple(os, "couple." + std::to_string(i + 1), rep.couples[i]);
  couple(os, "endpoint", rep.endpoint);
  write_report(os, rep.hypotheses);
  notes(os, rep.notes);
}

}  // namespace ksplit
