#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "sgdlog/kernels/kernels.hpp"

namespace sgdlog::kern {

bool avx2_supported() {
#if defined(SGDLOG_WITH_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

Backend resolve_initial() {
  const char* env = std::getenv("SGDLOG_SIMD");
  const std::string want = env ? env : "auto";
  if (want == "scalar") return Backend::scalar;
  if (want == "avx2") {
    if (!avx2_supported())
      throw std::runtime_error("SGDLOG_SIMD=avx2 but CPU/build lacks AVX2+FMA");
    return Backend::avx2;
  }
  return avx2_supported() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend> g_backend{resolve_initial()};

}  // namespace

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_supported())
    throw std::runtime_error("AVX2 backend unavailable on this CPU/build");
  g_backend.store(b, std::memory_order_relaxed);
}

std::string backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

#if defined(SGDLOG_WITH_AVX2)
#define SGDLOG_DISPATCH(fn, ...)                    \
  do {                                              \
    if (active_backend() == Backend::avx2)          \
      return avx2::fn(__VA_ARGS__);                 \
    return scalar::fn(__VA_ARGS__);                 \
  } while (0)
#else
#define SGDLOG_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

void cmul(const cd* a, const cd* b, cd* out, size_t n) {
  SGDLOG_DISPATCH(cmul, a, b, out, n);
}

void mag2(const cd* a, double* out, size_t n) {
  SGDLOG_DISPATCH(mag2, a, out, n);
}

double sum(const double* a, size_t n) { SGDLOG_DISPATCH(sum, a, n); }

void reflect(double* a, size_t n, double c) { SGDLOG_DISPATCH(reflect, a, n, c); }

void fft_stage_dispatch(cd* x, size_t n, size_t len, const cd* tw) {
  if (len == 2) {
    SGDLOG_DISPATCH(fft_stage_first, x, n);
  }
  SGDLOG_DISPATCH(fft_stage, x, n, len, tw);
}

#undef SGDLOG_DISPATCH

}  // namespace sgdlog::kern
