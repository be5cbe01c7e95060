#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace sgdlog {

// Exponents and moduli are arbitrary precision throughout: the Fourier
// modulus M exceeds N^2, which overflows 64 bits already for N near 2^32.
using BigInt = boost::multiprecision::cpp_int;

inline size_t bit_length(const BigInt& v) {
  if (v <= 0) return 0;
  return boost::multiprecision::msb(v) + 1;
}

// Least power of two strictly greater than v.
inline BigInt pow2_above(const BigInt& v) {
  BigInt m = 1;
  m <<= bit_length(v);
  if (m <= v) m <<= 1;
  return m;
}

inline bool is_pow2(const BigInt& v) {
  if (v <= 0) return false;
  return (v & (v - 1)) == 0;
}

inline uint64_t to_u64(const BigInt& v, const char* what = "value") {
  if (v < 0 || v > BigInt(UINT64_MAX))
    throw std::overflow_error(std::string(what) + " does not fit in 64 bits");
  return static_cast<uint64_t>(v);
}

inline double to_double_ratio(const BigInt& num, const BigInt& den) {
  return num.convert_to<double>() / den.convert_to<double>();
}

}  // namespace sgdlog
