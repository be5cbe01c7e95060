#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace sgdlog::kern {

using cd = std::complex<double>;

// Runtime-dispatched numeric kernels backing the statevector simulator:
// radix-2 FFT stages, pointwise complex multiply (Bluestein chirp),
// squared magnitudes, reduction, and the Grover diffusion reflection.
// Scalar variants are the reference; the AVX2 variants must agree with them
// to rounding (equivalence-tested).

enum class Backend { scalar, avx2 };

// Active backend: resolved once from CPU features and the SGDLOG_SIMD
// environment variable ("scalar" | "avx2" | "auto"). set_backend() overrides
// at runtime (tests); requesting avx2 on a CPU without it throws.
Backend active_backend();
void set_backend(Backend b);
bool avx2_supported();
std::string backend_name(Backend b);

// out[i] = a[i] * b[i]
void cmul(const cd* a, const cd* b, cd* out, size_t n);
// out[i] = |a[i]|^2
void mag2(const cd* a, double* out, size_t n);
// sum of a[0..n)
double sum(const double* a, size_t n);
// a[i] = c - a[i]
void reflect(double* a, size_t n, double c);

// In-place radix-2 DFT, n a power of two. Forward: X_k = sum_j x_j w^{jk},
// w = exp(-2*pi*i/n). Inverse includes the 1/n factor.
void fft(cd* x, size_t n, bool inverse);

// In-place DFT of arbitrary size via Bluestein's chirp transform.
void dft(cd* x, size_t n, bool inverse);

// Raw kernel entry points (exposed for the equivalence tests).
namespace scalar {
void cmul(const cd* a, const cd* b, cd* out, size_t n);
void mag2(const cd* a, double* out, size_t n);
double sum(const double* a, size_t n);
void reflect(double* a, size_t n, double c);
void fft_stage_first(cd* x, size_t n);
void fft_stage(cd* x, size_t n, size_t len, const cd* tw);
}  // namespace scalar

#if defined(SGDLOG_WITH_AVX2)
namespace avx2 {
void cmul(const cd* a, const cd* b, cd* out, size_t n);
void mag2(const cd* a, double* out, size_t n);
double sum(const double* a, size_t n);
void reflect(double* a, size_t n, double c);
void fft_stage_first(cd* x, size_t n);
void fft_stage(cd* x, size_t n, size_t len, const cd* tw);
}  // namespace avx2
#endif

}  // namespace sgdlog::kern
