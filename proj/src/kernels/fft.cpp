#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "sgdlog/kernels/kernels.hpp"

namespace sgdlog::kern {

void fft_stage_dispatch(cd* x, size_t n, size_t len, const cd* tw);

namespace {

// Per-stage twiddle tables, shared across transform sizes (a stage of block
// length `len` uses exp(-2*pi*i*k/len), independent of n). Grown on demand,
// thread-local so parallel experiment trials need no locking.
const cd* twiddles_for(size_t len) {
  thread_local std::vector<std::vector<cd>> cache;  // index = log2(len)
  size_t lg = 0;
  while ((size_t(1) << lg) < len) ++lg;
  if (cache.size() <= lg) cache.resize(lg + 1);
  auto& tw = cache[lg];
  if (tw.empty()) {
    tw.resize(len / 2);
    for (size_t k = 0; k < len / 2; ++k) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(len);
      tw[k] = cd(std::cos(ang), std::sin(ang));
    }
  }
  return tw.data();
}

void bit_reverse_permute(cd* x, size_t n) {
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
}

void fft_forward(cd* x, size_t n) {
  bit_reverse_permute(x, n);
  for (size_t len = 2; len <= n; len <<= 1)
    fft_stage_dispatch(x, n, len, len == 2 ? nullptr : twiddles_for(len));
}

}  // namespace

void fft(cd* x, size_t n, bool inverse) {
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("fft size must be a power of two");
  if (n == 1) return;
  if (!inverse) {
    fft_forward(x, n);
    return;
  }
  for (size_t i = 0; i < n; ++i) x[i] = std::conj(x[i]);
  fft_forward(x, n);
  const double inv = 1.0 / static_cast<double>(n);
  for (size_t i = 0; i < n; ++i) x[i] = std::conj(x[i]) * inv;
}

void dft(cd* x, size_t n, bool inverse) {
  if (n == 0) throw std::invalid_argument("dft size must be positive");
  if ((n & (n - 1)) == 0) {
    fft(x, n, inverse);
    return;
  }
  if (inverse) {
    for (size_t i = 0; i < n; ++i) x[i] = std::conj(x[i]);
    dft(x, n, false);
    const double inv = 1.0 / static_cast<double>(n);
    for (size_t i = 0; i < n; ++i) x[i] = std::conj(x[i]) * inv;
    return;
  }

  // Bluestein: X_k = chirp(k) * (a (*) b)_k with a_j = x_j chirp(j),
  // b_j = conj(chirp(j)), chirp(j) = exp(-pi*i*j^2/n). The squared index is
  // reduced mod 2n exactly before going to double.
  size_t m = 1;
  while (m < 2 * n - 1) m <<= 1;
  const double pi_over_n = std::numbers::pi / static_cast<double>(n);
  auto chirp = [&](size_t j) {
    const uint64_t q = static_cast<uint64_t>((static_cast<unsigned __int128>(j) * j) % (2 * n));
    const double ang = -pi_over_n * static_cast<double>(q);
    return cd(std::cos(ang), std::sin(ang));
  };

  std::vector<cd> a(m, cd(0, 0)), b(m, cd(0, 0));
  for (size_t j = 0; j < n; ++j) {
    const cd w = chirp(j);
    a[j] = x[j] * w;
    b[j] = std::conj(w);
    if (j > 0) b[m - j] = std::conj(w);
  }
  fft(a.data(), m, false);
  fft(b.data(), m, false);
  cmul(a.data(), b.data(), a.data(), m);
  fft(a.data(), m, true);
  for (size_t k = 0; k < n; ++k) x[k] = chirp(k) * a[k];
}

}  // namespace sgdlog::kern
