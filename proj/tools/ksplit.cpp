// Batch runner: weight checks, constructive splits, constant sweeps, the
// three-couple gluing driver and the Poisson-smoothing norm check.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ksplit/experiments.hpp"
#include "ksplit/kernels.hpp"
#include "ksplit/ksplit.hpp"
#include "ksplit/report.hpp"
#include "ksplit/torus_io.hpp"
#include "ksplit/weight_spec.hpp"
#include "ksplit/weights.hpp"

namespace fs = std::filesystem;
using namespace ksplit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitWarning = 2;
constexpr int kExitUsage = 64;

struct Output {
  std::string dir;

  // Writes to stdout and, with an output directory, to dir/name.
  void emit(const std::string& name, const std::string& text) const {
    std::cout << text;
    if (dir.empty()) return;
    fs::create_directories(dir);
    std::ofstream f(fs::path(dir) / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
    f << text;
  }
  template <class T>
  void dump(const std::string& name, const T& x) const {
    if (dir.empty()) throw InputError("--dump needs --out");
    fs::create_directories(dir);
    std::ofstream f(fs::path(dir) / name, std::ios::binary);
    io::write_torus(f, x);
  }
};

void require_pow2(int n) {
  if (n < 8 || (n & (n - 1)) != 0) throw InputError("grid size must be a power of two >= 8");
}

Weight2D weight_2d(const std::string& text, int n) {
  const Grid1D g(n);
  return build_weight_2d(parse_weight_spec(text), g, g);
}

// ---------------------------------------------------------------- check-weights

struct CheckWeightsArgs {
  std::string family = "power";
  double alpha = 0.5;
  double eps = 0.5;
  std::string weight;
  double p = 2.0;
  double delta = 1.0;
  std::vector<int> n{1024};
};

int run_check_weights(const CheckWeightsArgs& a, const Output& out) {
  if (!(a.p > 1.0)) throw InputError("--p must exceed 1");
  std::string text = a.weight;
  if (text.empty()) {
    std::ostringstream os;
    if (a.family == "power") os << "power alpha=" << format_double(a.alpha);
    else if (a.family == "exp-cos") os << "exp-cos eps=" << format_double(a.eps);
    else if (a.family == "const") os << "const";
    else throw InputError("unknown --family '" + a.family + "'");
    text = os.str();
  }
  const WeightSpec spec = parse_weight_spec(text);
  std::ostringstream csv;
  csv << "weight,n,condition,exponent,value,arcs\n";
  for (int n : a.n) {
    require_pow2(n);
    const Weight1D w = build_weight_1d(spec, Grid1D(n));
    const ArcFamily fam = ArcFamily::shifted_dyadic(n);
    const std::string head = to_string(spec) + "," + std::to_string(n) + ",";
    const std::string arcs = std::to_string(fam.size());
    csv << head << "ap," << format_double(a.p) << ',' << format_double(ap_constant(w, a.p, fam)) << ','
        << arcs << '\n';
    csv << head << "a1,1," << format_double(a1_constant(w, fam)) << ',' << arcs << '\n';
    csv << head << "reverse_holder," << format_double(a.delta) << ','
        << format_double(reverse_holder_constant(w, a.delta, fam)) << ',' << arcs << '\n';
    csv << head << "bmo_log,0," << format_double(bmo_log_norm(w, fam)) << ',' << arcs << '\n';
  }
  out.emit("weights.csv", csv.str());
  return kExitOk;
}

// ---------------------------------------------------------------- split

struct SplitArgs {
  double p = 2.0;
  std::string w1 = "const", w2 = "const";
  int n = 64;
  std::uint64_t seed = 1;
  int degree = 4;
  int k = 2;
  bool oracle = false;
  bool dump = false;
  bool serial = false;
};

int run_split(const SplitArgs& a, const Output& out) {
  require_pow2(a.n);
  SplitConfig cfg;
  cfg.p = a.p;
  cfg.k = a.k;
  if (a.serial) cfg.exec = kernels::Exec::kSerial;
  cfg.validate();
  const Weight2D w1 = weight_2d(a.w1, a.n), w2 = weight_2d(a.w2, a.n);
  // Instance drawn in the predual couple (L_1(w2), L_q(w1^{1-q})).
  const CoupleSpec predual{w2, pow(w1, 1.0 - cfg.q()), 1.0, cfg.q()};
  Rng rng(a.seed);
  const Instance inst = make_instance(predual, a.degree, rng);
  const SplitReport rep = split_inf(InfProblem{inst.f, inst.g, inst.h, w1, w2}, cfg);

  std::ostringstream os;
  os << "command: split\n"
     << "w1: " << to_string(parse_weight_spec(a.w1)) << '\n'
     << "w2: " << to_string(parse_weight_spec(a.w2)) << '\n'
     << "p: " << format_double(a.p) << '\n'
     << "q: " << format_double(cfg.q()) << '\n'
     << "n: " << a.n << '\n'
     << "seed: " << a.seed << '\n'
     << "tolerance: " << format_double(cfg.tol_membership) << '\n';
  write_report(os, rep);
  if (a.oracle) {
    OracleProblem op = oracle_problem(predual, inst);
    op.warm_starts.emplace_back(rep.g_prime.values().begin(), rep.g_prime.values().end());
    const OracleResult res = solve_oracle(op);
    os << "oracle.method: " << res.method << '\n'
       << "oracle.C1: " << format_double(res.c1) << '\n'
       << "oracle.C2: " << format_double(res.c2) << '\n'
       << "oracle.objective: " << format_double(res.objective) << '\n'
       << "oracle.converged: " << (res.converged ? "true" : "false") << '\n';
  }
  out.emit("split_report.txt", os.str());
  if (a.dump) {
    out.dump("g_prime.torus", rep.g_prime);
    out.dump("h_prime.torus", rep.h_prime);
  }
  return rep.warnings() ? kExitWarning : kExitOk;
}

// ---------------------------------------------------------------- sweep

int run_sweep(SweepSpec spec, const Output& out) {
  require_pow2(spec.n);
  if (spec.params.empty()) throw InputError("--params needs at least one value");
  const std::vector<SweepRow> rows = kconstant_sweep(spec);
  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  out.emit("sweep.csv", csv.str());
  return kExitOk;
}

// ---------------------------------------------------------------- glue

struct GlueArgs {
  std::string w1 = "const", w2 = "const";
  std::vector<double> theta{0.2, 0.4, 0.6, 0.8};
  int n = 16;
  std::uint64_t seed = 1;
};

int run_glue(const GlueArgs& a, const Output& out) {
  require_pow2(a.n);
  const GlueReport rep = glue_driver(weight_2d(a.w1, a.n), weight_2d(a.w2, a.n), a.theta, a.seed);
  std::ostringstream os;
  os << "command: glue\n"
     << "w1: " << to_string(parse_weight_spec(a.w1)) << '\n'
     << "w2: " << to_string(parse_weight_spec(a.w2)) << '\n'
     << "n: " << a.n << '\n'
     << "seed: " << a.seed << '\n';
  write_report(os, rep);
  out.emit("glue_report.txt", os.str());
  return rep.hypotheses.all_pass() ? kExitOk : kExitWarning;
}

// ---------------------------------------------------------------- verify-lemma

int run_verify_lemma(const LemmaSpec& spec, const Output& out) {
  require_pow2(spec.n);
  std::ostringstream csv;
  write_lemma_csv(csv, spec, verify_lemma(spec));
  out.emit("lemma.csv", csv.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  kernels::apply_thread_limit_from_env();

  CLI::App app{"Weighted K-closedness experiments on the torus"};
  app.set_config("--config", "", "TOML/INI file with default flag values (flags win)");
  app.require_subcommand(1);
  Output out;
  app.add_option("--out", out.dir, "Directory for CSV, reports and dumps");

  CheckWeightsArgs cw;
  auto* c_cw = app.add_subcommand("check-weights", "Condition constants of a 1-D weight");
  c_cw->add_option("--family", cw.family, "power | exp-cos | const");
  c_cw->add_option("--alpha", cw.alpha, "Power-weight exponent");
  c_cw->add_option("--eps", cw.eps, "exp-cos amplitude");
  c_cw->add_option("--weight", cw.weight, "Full weight spec (overrides --family)");
  c_cw->add_option("--p", cw.p, "A_p exponent");
  c_cw->add_option("--delta", cw.delta, "Reverse Hoelder exponent");
  c_cw->add_option("--n", cw.n, "Grid sizes")->delimiter(',');

  SplitArgs sa;
  auto* c_split = app.add_subcommand("split", "Constructive split for (L_p(w1), L_inf(w2))");
  c_split->add_option("--p", sa.p, "Exponent of the L_p end");
  c_split->add_option("--w1", sa.w1, "Weight spec of the L_p end");
  c_split->add_option("--w2", sa.w2, "Weight spec of the L_inf end");
  c_split->add_option("--n", sa.n, "Grid size per axis");
  c_split->add_option("--seed", sa.seed, "Instance seed")->required();
  c_split->add_option("--degree", sa.degree, "Degree of the random instance");
  c_split->add_option("--k", sa.k, "Corrector exponent k");
  c_split->add_flag("--oracle", sa.oracle, "Also run the numerical oracle");
  c_split->add_flag("--dump", sa.dump, "Write g' and h' as TORUS v1 files");
  c_split->add_flag("--serial", sa.serial, "Use the serial kernels");

  SweepSpec sw;
  auto* c_sweep = app.add_subcommand("sweep", "Worst oracle constant over a weight family");
  c_sweep->add_option("--family", sw.family, "power | exp-cos | const");
  c_sweep->add_option("--params", sw.params, "Family parameters")->delimiter(',')->required();
  c_sweep->add_option("--r", sw.r, "Exponent of the first space");
  c_sweep->add_option("--p", sw.p, "Exponent of the second space");
  c_sweep->add_option("--trials", sw.trials, "Instances per parameter");
  c_sweep->add_option("--n", sw.n, "Grid size per axis");
  c_sweep->add_option("--seed", sw.seed, "Base seed")->required();
  c_sweep->add_option("--couple", sw.couple, "hardy | inf");
  c_sweep->add_option("--axis", sw.axis, "Power weight: 0 radial, 1 or 2 one axis");
  c_sweep->add_option("--degree", sw.degree, "Degree of the random instances");
  c_sweep->add_option("--spike", sw.spike, "Relative spike amplitude near z2 = 1");
  c_sweep->add_option("--iterations", sw.oracle.max_iterations, "Oracle iteration cap");

  GlueArgs ga;
  auto* c_glue = app.add_subcommand("glue", "Constants of the three intermediate couples");
  c_glue->add_option("--w1", ga.w1, "Weight spec w1");
  c_glue->add_option("--w2", ga.w2, "Weight spec w2");
  c_glue->add_option("--theta", ga.theta, "Four increasing values in (0, 1)")->delimiter(',');
  c_glue->add_option("--n", ga.n, "Grid size per axis");
  c_glue->add_option("--seed", ga.seed, "Instance seed")->required();

  LemmaSpec ls;
  auto* c_lemma = app.add_subcommand("verify-lemma", "Poisson-smoothed norm against boundary norm");
  c_lemma->add_option("--r", ls.r, "Exponent");
  c_lemma->add_option("--weight", ls.weight, "Weight spec");
  c_lemma->add_option("--n", ls.n, "Grid size");
  c_lemma->add_option("--trials", ls.trials, "Random polynomials");
  c_lemma->add_option("--max-degree", ls.max_degree, "Largest degree");
  c_lemma->add_option("--seed", ls.seed, "Base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*c_cw) return run_check_weights(cw, out);
    if (*c_split) return run_split(sa, out);
    if (*c_sweep) return run_sweep(sw, out);
    if (*c_glue) return run_glue(ga, out);
    if (*c_lemma) return run_verify_lemma(ls, out);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
