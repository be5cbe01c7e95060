#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace sgdlog {

// Canonical element encoding: a fixed-width byte string, unique per element
// within one semigroup. Equality of elements is byte equality of codes and
// costs no queries.
struct ElementCode {
  std::string bytes;

  friend bool operator==(const ElementCode& a, const ElementCode& b) = default;
};

inline void append_u64_be(std::string& out, uint64_t v) {
  for (int i = 7; i >= 0; --i)
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline uint64_t read_u64_be(const std::string& s, size_t off) {
  uint64_t v = 0;
  for (size_t i = 0; i < 8; ++i)
    v = (v << 8) | static_cast<uint8_t>(s[off + i]);
  return v;
}

inline void append_u32_be(std::string& out, uint32_t v) {
  for (int i = 3; i >= 0; --i)
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline uint32_t read_u32_be(const std::string& s, size_t off) {
  uint32_t v = 0;
  for (size_t i = 0; i < 4; ++i)
    v = (v << 8) | static_cast<uint8_t>(s[off + i]);
  return v;
}

std::string to_hex(const ElementCode& code);

}  // namespace sgdlog

template <>
struct std::hash<sgdlog::ElementCode> {
  size_t operator()(const sgdlog::ElementCode& c) const noexcept {
    return std::hash<std::string>{}(c.bytes);
  }
};
