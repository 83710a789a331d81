#pragma once

#include <complex>
#include <span>

namespace ksplit {

using cplx = std::complex<double>;

namespace fft {

/// Forward transform normalized so that out[m] is the coefficient of z^m,
/// i.e. out = (1/N) sum_x in[x] e^{-i m x}. Shape (n1, n2); n1 == 1 means 1-D.
/// Output is in FFT order (negative frequencies wrap to the upper half).
void forward(std::span<const cplx> in, std::span<cplx> out, int n1, int n2);

/// Inverse of forward(): synthesizes grid values from coefficients.
void inverse(std::span<const cplx> in, std::span<cplx> out, int n1, int n2);

/// Signed frequency of FFT-order index i on an axis of length n.
inline int frequency(int i, int n) { return i < n - n / 2 ? i : i - n; }

/// FFT-order index of signed frequency m in -n/2..n/2-1.
inline int index_of(int m, int n) { return m >= 0 ? m : m + n; }

}  // namespace fft
}  // namespace ksplit
