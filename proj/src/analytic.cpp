#include "ksplit/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "ksplit/spectral.hpp"
#include "ksplit/torus_io.hpp"

namespace ksplit {

TorusFn1D outer_log(const Weight1D& w) {
  const int n = w.size();
  std::vector<cplx> logs(n);
  for (int k = 0; k < n; ++k) logs[k] = std::log(w[k]);
  const TorusFn1D logw(w.grid(), std::move(logs));
  const auto& c = logw.spectrum();
  std::vector<cplx> out(n, 0.0);
  out[0] = c[0].real();
  for (int m = 1; m < n / 2; ++m) out[fft::index_of(m, n)] = 2.0 * c[fft::index_of(m, n)];
  // The Nyquist mode is real on the grid, so it stays as it is.
  out[fft::index_of(-n / 2, n)] = c[fft::index_of(-n / 2, n)].real();
  return TorusFn1D::from_spectrum(w.grid(), std::move(out));
}

OuterFn outer_function(const Weight1D& w) {
  TorusFn1D logf = outer_log(w);
  std::vector<cplx> v(w.size());
  for (int k = 0; k < w.size(); ++k) v[k] = std::exp(logf[k]);
  TorusFn1D values(w.grid(), std::move(v));
  const double leak = analytic_leakage(values);
  return OuterFn{std::move(values), w, leak};
}

InnerOuter inner_outer(const TorusFn1D& f, double eps) {
  const double top = f.sup_abs();
  if (top == 0.0) throw InputError("inner-outer factorization of the zero function");
  if (!(eps > 0.0)) throw InputError("regularization must be positive");
  std::vector<double> mod(f.size());
  for (int k = 0; k < f.size(); ++k) mod[k] = std::max(std::abs(f[k]), eps * top);
  OuterFn outer = outer_function(Weight1D(f.grid(), std::move(mod)));
  std::vector<cplx> inner(f.size());
  for (int k = 0; k < f.size(); ++k) inner[k] = f[k] / outer.values[k];
  return InnerOuter{TorusFn1D(f.grid(), std::move(inner)), std::move(outer)};
}

LevelRange default_levels(const Weight1D& a) {
  return {static_cast<int>(std::floor(std::log2(a.min()))) - 1,
          static_cast<int>(std::ceil(std::log2(a.max())))};
}

namespace {

TorusFn1D level_function(const Weight1D& a, int j, int power) {
  std::vector<double> mod(a.size());
  for (int k = 0; k < a.size(); ++k) {
    const double ratio = std::ldexp(1.0, j) / a[k];
    mod[k] = std::max(std::min(1.0, std::pow(ratio, power)), 1e-300);
  }
  return riesz(outer_function(Weight1D(a.grid(), std::move(mod))).values);
}

PartitionAtom make_atom(int level, TorusFn1D phi, int power, double eps,
                        double* inner_defect) {
  PartitionAtom atom{level, false, phi, phi, OuterFn{phi, Weight1D::constant(phi.grid(), 1.0), 0.0}, phi};
  const double top = phi.sup_abs();
  if (top == 0.0) {
    atom.empty = true;
    atom.theta = TorusFn1D::constant(phi.grid(), 0.0);
    atom.psi = outer_function(Weight1D::constant(phi.grid(), 1.0));
    atom.psi_half = TorusFn1D::constant(phi.grid(), 0.0);
    return atom;
  }
  const int n = phi.size();
  std::vector<double> mod(n);
  for (int k = 0; k < n; ++k)
    mod[k] = std::pow(std::max(std::abs(phi[k]), eps * top), 1.0 / power);
  atom.psi = outer_function(Weight1D(phi.grid(), std::move(mod)));
  std::vector<cplx> theta(n), half(n);
  double defect = 0.0;
  for (int k = 0; k < n; ++k) {
    const cplx p = atom.psi.values[k];
    theta[k] = phi[k] / std::pow(p, power);
    half[k] = std::pow(p, power / 2);
    if (std::abs(phi[k]) >= eps * top) defect = std::max(defect, std::abs(std::abs(theta[k]) - 1.0));
  }
  atom.theta = TorusFn1D(phi.grid(), std::move(theta));
  atom.psi_half = TorusFn1D(phi.grid(), std::move(half));
  *inner_defect = defect;
  return atom;
}

}  // namespace

Partition build_partition(const Weight1D& a, int jmin, int jmax, int power,
                          double eps) {
  if (jmax <= jmin) throw InputError("partition needs jmax > jmin");
  if (power < 2 || power % 2 != 0) throw InputError("partition power must be even and >= 2");
  if (std::ldexp(1.0, jmin) > a.min() || std::ldexp(1.0, jmax) < a.max())
    throw InputError("partition levels do not cover the range of the weight");
  const Grid1D& grid = a.grid();
  const int n = a.size();
  const int count = jmax - jmin + 1;

  // V_jmin = 0 and V_jmax = 1; interior levels are independent.
  std::vector<std::optional<TorusFn1D>> v(count);
  v.front() = TorusFn1D::constant(grid, 0.0);
  v.back() = TorusFn1D::constant(grid, 1.0);
#pragma omp parallel for schedule(dynamic)
  for (int i = 1; i < count - 1; ++i) v[i] = level_function(a, jmin + i, power);

  Partition part{{}, a, jmin, jmax, power};
  std::vector<double> defects(count, 0.0);
  std::vector<std::optional<PartitionAtom>> atoms(count);
  atoms[0] = make_atom(jmin, TorusFn1D::constant(grid, 0.0), power, eps, &defects[0]);
#pragma omp parallel for schedule(dynamic)
  for (int i = 1; i < count; ++i)
    atoms[i] = make_atom(jmin + i, *v[i] - *v[i - 1], power, eps, &defects[i]);
  for (auto& at : atoms) part.atoms.push_back(std::move(*at));

  std::vector<double> sum_root(n, 0.0), sum_weighted(n, 0.0);
  std::vector<cplx> total(n, 0.0);
  for (int i = 0; i < count; ++i) {
    const PartitionAtom& at = part.atoms[i];
    part.inner_defect = std::max(part.inner_defect, defects[i]);
    if (at.empty) continue;
    part.max_leakage = std::max(part.max_leakage, analytic_leakage(at.phi));
    const double scale = std::ldexp(1.0, at.level);
    for (int k = 0; k < n; ++k) {
      const double root = std::pow(std::abs(at.phi[k]), 1.0 / power);
      part.c_lower = std::max(part.c_lower, root * a[k] / scale);
      sum_root[k] += root;
      sum_weighted[k] += root * scale;
      total[k] += at.phi[k];
    }
  }
  for (int k = 0; k < n; ++k) {
    part.c_sum = std::max(part.c_sum, sum_root[k]);
    part.c_upper = std::max(part.c_upper, sum_weighted[k] / a[k]);
    part.sum_error = std::max(part.sum_error, std::abs(total[k] - 1.0));
  }
  return part;
}

Partition build_partition(const Weight1D& a, int power) {
  const LevelRange r = default_levels(a);
  return build_partition(a, r.jmin, r.jmax, power);
}

void write_partition_manifest(std::ostream& os, const Partition& p) {
  os.precision(17);
  os << "n: " << p.weight.size() << '\n'
     << "jmin: " << p.jmin << '\n'
     << "jmax: " << p.jmax << '\n'
     << "power: " << p.power << '\n'
     << "c_lower: " << p.c_lower << '\n'
     << "c_upper: " << p.c_upper << '\n'
     << "c_sum: " << p.c_sum << '\n'
     << "sum_error: " << p.sum_error << '\n'
     << "max_leakage: " << p.max_leakage << '\n'
     << "inner_defect: " << p.inner_defect << '\n';
  for (const auto& at : p.atoms)
    os << "atom: " << at.level << (at.empty ? " empty" : " active") << '\n';
}

void save_partition(const Partition& p, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream manifest(dir / "manifest.txt");
  if (!manifest) throw InputError("cannot write " + (dir / "manifest.txt").string());
  write_partition_manifest(manifest, p);
  for (const auto& at : p.atoms) {
    const std::string j = std::to_string(at.level);
    io::save_torus((dir / ("phi_" + j + ".torus")).string(), at.phi);
    io::save_torus((dir / ("theta_" + j + ".torus")).string(), at.theta);
    io::save_torus((dir / ("psi_" + j + ".torus")).string(), at.psi.values);
  }
}

}  // namespace ksplit
