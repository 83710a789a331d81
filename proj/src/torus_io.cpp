#include "ksplit/torus_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace ksplit::io {
namespace {

static_assert(sizeof(double) == 8);

void put_double(std::ostream& out, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  char bytes[8];
  for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xff);
  out.write(bytes, 8);
}

double get_double(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8))
    throw InputError("TORUS payload truncated");
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
  return std::bit_cast<double>(bits);
}

void write_values(std::ostream& out, std::span<const cplx> values) {
  for (const auto& v : values) {
    put_double(out, v.real());
    put_double(out, v.imag());
  }
}

void write_real(std::ostream& out, std::span<const double> values) {
  for (double v : values) {
    put_double(out, v);
    put_double(out, 0.0);
  }
}

}  // namespace

void write_torus(std::ostream& out, const TorusFn1D& f) {
  out << "TORUS v1 1 " << f.size() << '\n';
  write_values(out, f.values());
}

void write_torus(std::ostream& out, const TorusFn2D& f) {
  out << "TORUS v1 2 " << f.n1() << ' ' << f.n2() << '\n';
  write_values(out, f.values());
}

void write_torus(std::ostream& out, const Weight1D& w) {
  out << "TORUS v1 1 " << w.size() << '\n';
  write_real(out, w.values());
}

void write_torus(std::ostream& out, const Weight2D& w) {
  out << "TORUS v1 2 " << w.n1() << ' ' << w.n2() << '\n';
  write_real(out, w.values());
}

TorusPayload read_torus(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw InputError("missing TORUS header");
  std::istringstream hs(header);
  std::string magic, version;
  int dims = 0;
  hs >> magic >> version >> dims;
  if (magic != "TORUS" || version != "v1")
    throw InputError("not a TORUS v1 file");
  if (dims == 1) {
    int n = 0;
    if (!(hs >> n)) throw InputError("TORUS header missing n1");
    Grid1D grid(n);
    std::vector<cplx> v(n);
    for (auto& x : v) {
      double re = get_double(in);
      x = cplx(re, get_double(in));
    }
    return TorusFn1D(grid, std::move(v));
  }
  if (dims == 2) {
    int n1 = 0, n2 = 0;
    if (!(hs >> n1 >> n2)) throw InputError("TORUS header missing n1/n2");
    Grid1D g1(n1), g2(n2);
    std::vector<cplx> v(static_cast<size_t>(n1) * n2);
    for (auto& x : v) {
      double re = get_double(in);
      x = cplx(re, get_double(in));
    }
    return TorusFn2D(g1, g2, std::move(v));
  }
  throw InputError("TORUS dims must be 1 or 2");
}

void save_torus(const std::string& path, const TorusPayload& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open " + path + " for writing");
  std::visit([&](const auto& fn) { write_torus(out, fn); }, f);
}

TorusPayload load_torus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  return read_torus(in);
}

namespace {
std::vector<double> real_parts(std::span<const cplx> values) {
  std::vector<double> out(values.size());
  for (size_t k = 0; k < values.size(); ++k) {
    if (values[k].imag() != 0.0)
      throw InputError("weight file has nonzero imaginary part");
    out[k] = values[k].real();
  }
  return out;
}
}  // namespace

Weight1D to_weight_1d(const TorusPayload& payload) {
  const auto* f = std::get_if<TorusFn1D>(&payload);
  if (f == nullptr) throw InputError("expected a 1-D TORUS payload");
  return Weight1D(f->grid(), real_parts(f->values()));
}

Weight2D to_weight_2d(const TorusPayload& payload) {
  const auto* f = std::get_if<TorusFn2D>(&payload);
  if (f == nullptr) throw InputError("expected a 2-D TORUS payload");
  return Weight2D(f->grid1(), f->grid2(), real_parts(f->values()));
}

}  // namespace ksplit::io
