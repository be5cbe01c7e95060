#include "sgdlog/kernels/kernels.hpp"

#if defined(SGDLOG_WITH_AVX2)

#include <immintrin.h>

namespace sgdlog::kern::avx2 {

namespace {

// Pointwise complex multiply of two packed complex<double> pairs.
// a = [ar0, ai0, ar1, ai1], b likewise.
inline __m256d cmul_pd(__m256d a, __m256d b) {
  const __m256d are = _mm256_movedup_pd(a);           // [ar0, ar0, ar1, ar1]
  const __m256d aim = _mm256_permute_pd(a, 0xF);      // [ai0, ai0, ai1, ai1]
  const __m256d bsw = _mm256_permute_pd(b, 0x5);      // [bi0, br0, bi1, br1]
  return _mm256_fmaddsub_pd(are, b, _mm256_mul_pd(aim, bsw));
}

}  // namespace

void cmul(const cd* a, const cd* b, cd* out, size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* po = reinterpret_cast<double*>(out);
  size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * i);
    const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    _mm256_storeu_pd(po + 2 * i, cmul_pd(va, vb));
  }
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = cd(ar * br - ai * bi, ar * bi + ai * br);
  }
}

void mag2(const cd* a, double* out, size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x0 = _mm256_loadu_pd(pa + 2 * i);      // c0, c1
    const __m256d x1 = _mm256_loadu_pd(pa + 2 * i + 4);  // c2, c3
    const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(x0, x0), _mm256_mul_pd(x1, x1));
    // h = [|c0|^2, |c2|^2, |c1|^2, |c3|^2] -> restore order
    _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(h, 0xD8));
  }
  for (; i < n; ++i) {
    const double re = a[i].real(), im = a[i].imag();
    out[i] = re * re + im * im;
  }
}

double sum(const double* a, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  const __m128d t = _mm_add_pd(lo, hi);  // [s0+s2, s1+s3]
  double s = _mm_cvtsd_f64(t) + _mm_cvtsd_f64(_mm_unpackhi_pd(t, t));
  double tail = 0;
  for (; i < n; ++i) tail += a[i];
  return s + tail;
}

void reflect(double* a, size_t n, double c) {
  const __m256d vc = _mm256_set1_pd(c);
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(a + i, _mm256_sub_pd(vc, _mm256_loadu_pd(a + i)));
  for (; i < n; ++i) a[i] = c - a[i];
}

void fft_stage_first(cd* x, size_t n) {
  double* px = reinterpret_cast<double*>(x);
  size_t p = 0;
  for (; p + 2 <= n; p += 2) {
    const __m256d v = _mm256_loadu_pd(px + 2 * p);         // [u, v]
    const __m256d sw = _mm256_permute2f128_pd(v, v, 0x01); // [v, u]
    const __m256d s = _mm256_add_pd(v, sw);                // [u+v, *]
    const __m256d d = _mm256_sub_pd(v, sw);                // [u-v, *]
    _mm256_storeu_pd(px + 2 * p, _mm256_permute2f128_pd(s, d, 0x20));
  }
  for (; p < n; p += 2) {
    const cd u = x[p], v = x[p + 1];
    x[p] = u + v;
    x[p + 1] = u - v;
  }
}

void fft_stage(cd* x, size_t n, size_t len, const cd* tw) {
  const size_t half = len / 2;  // >= 2 here; len = 2 goes to fft_stage_first
  double* px = reinterpret_cast<double*>(x);
  const double* ptw = reinterpret_cast<const double*>(tw);
  for (size_t p = 0; p < n; p += len) {
    for (size_t i = 0; i < half; i += 2) {
      const size_t top = 2 * (p + i);
      const size_t bot = 2 * (p + i + half);
      const __m256d u = _mm256_loadu_pd(px + top);
      const __m256d b = _mm256_loadu_pd(px + bot);
      const __m256d w = _mm256_loadu_pd(ptw + 2 * i);
      const __m256d v = cmul_pd(b, w);
      _mm256_storeu_pd(px + top, _mm256_add_pd(u, v));
      _mm256_storeu_pd(px + bot, _mm256_sub_pd(u, v));
    }
  }
}

}  // namespace sgdlog::kern::avx2

#endif  // SGDLOG_WITH_AVX2
