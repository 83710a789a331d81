#pragma once

// "TORUS v1" grid files: an ASCII header line `TORUS v1 <dims> <n1> [<n2>]`
// followed by row-major little-endian float64 (re, im) pairs.

#include <iosfwd>
#include <string>
#include <variant>

#include "ksplit/torus.hpp"

namespace ksplit::io {

void write_torus(std::ostream& out, const TorusFn1D& f);
void write_torus(std::ostream& out, const TorusFn2D& f);
void write_torus(std::ostream& out, const Weight1D& w);
void write_torus(std::ostream& out, const Weight2D& w);

using TorusPayload = std::variant<TorusFn1D, TorusFn2D>;

/// Throws InputError on malformed headers or truncated payloads.
TorusPayload read_torus(std::istream& in);

void save_torus(const std::string& path, const TorusPayload& f);
TorusPayload load_torus(const std::string& path);

/// Real parts of a payload as a weight; rejects nonzero imaginary parts.
Weight1D to_weight_1d(const TorusPayload& payload);
Weight2D to_weight_2d(const TorusPayload& payload);

}  // namespace ksplit::io
