#include "sgdlog/kernels/kernels.hpp"

namespace sgdlog::kern::scalar {

void cmul(const cd* a, const cd* b, cd* out, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = cd(ar * br - ai * bi, ar * bi + ai * br);
  }
}

void mag2(const cd* a, double* out, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    const double re = a[i].real(), im = a[i].imag();
    out[i] = re * re + im * im;
  }
}

double sum(const double* a, size_t n) {
  // Four accumulators, matching the AVX2 lane layout so both variants agree
  // to rounding on the same input.
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i];
    s1 += a[i + 1];
    s2 += a[i + 2];
    s3 += a[i + 3];
  }
  double tail = 0;
  for (; i < n; ++i) tail += a[i];
  return ((s0 + s2) + (s1 + s3)) + tail;
}

void reflect(double* a, size_t n, double c) {
  for (size_t i = 0; i < n; ++i) a[i] = c - a[i];
}

// len = 2 butterflies: no twiddles.
void fft_stage_first(cd* x, size_t n) {
  for (size_t p = 0; p < n; p += 2) {
    const cd u = x[p], v = x[p + 1];
    x[p] = u + v;
    x[p + 1] = u - v;
  }
}

// One stage of the iterative radix-2 DIT transform, block length `len`,
// twiddle table tw[0..len/2).
void fft_stage(cd* x, size_t n, size_t len, const cd* tw) {
  const size_t half = len / 2;
  for (size_t p = 0; p < n; p += len) {
    for (size_t i = 0; i < half; ++i) {
      const cd u = x[p + i];
      const cd w = tw[i];
      const cd b = x[p + i + half];
      const cd v(b.real() * w.real() - b.imag() * w.imag(),
                 b.real() * w.imag() + b.imag() * w.real());
      x[p + i] = u + v;
      x[p + i + half] = u - v;
    }
  }
}

}  // namespace sgdlog::kern::scalar
