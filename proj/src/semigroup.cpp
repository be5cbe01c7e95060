#include "sgdlog/semigroup.hpp"

#include <unordered_set>

namespace sgdlog {

std::string to_hex(const ElementCode& code) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(code.bytes.size() * 2);
  for (unsigned char c : code.bytes) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 0xf]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rho family

RhoSemigroup::RhoSemigroup(const RhoSemigroupSpec& spec)
    : Semigroup(BigInt(spec.t) + spec.r), t_(spec.t), r_(spec.r) {
  if (t_ < 1 || r_ < 1) throw MalformedSpec("rho family requires t >= 1 and r >= 1");
  if (t_ > (uint64_t(1) << 62) - r_)
    throw MalformedSpec("rho family: t + r too large");
}

uint64_t RhoSemigroup::canonical(uint64_t j) const {
  if (j < t_ + r_) return j;
  return t_ + (j - t_) % r_;
}

ElementCode RhoSemigroup::element(uint64_t exponent) const {
  if (exponent < 1) throw MalformedSpec("exponent must be >= 1");
  ElementCode c;
  append_u64_be(c.bytes, canonical(exponent));
  return c;
}

ElementCode RhoSemigroup::element(const BigInt& exponent) const {
  if (exponent < 1) throw MalformedSpec("exponent must be >= 1");
  if (exponent < BigInt(t_) + r_)
    return element(static_cast<uint64_t>(exponent));
  BigInt j = t_ + (exponent - t_) % r_;
  return element(static_cast<uint64_t>(j));
}

uint64_t RhoSemigroup::exponent_of(const ElementCode& code) const {
  return read_u64_be(code.bytes, 0);
}

std::vector<ElementCode> RhoSemigroup::generators() const {
  return {element(uint64_t(1))};
}

ElementCode RhoSemigroup::multiply(const ElementCode& a, const ElementCode& b,
                                   bool /*metered*/) const {
  ElementCode c;
  append_u64_be(c.bytes, canonical(read_u64_be(a.bytes, 0) + read_u64_be(b.bytes, 0)));
  return c;
}

// ---------------------------------------------------------------------------
// Transformation family

namespace {

// t + r <= N must hold for every element. The closure size itself can be off
// by one (the distinct powers of g need not include a repeat inside the
// closure), hence the +1; n^n is safe for n >= 2 because the powers of a
// single map commute and therefore cannot exhaust all n^n maps.
BigInt transformation_order_bound(uint32_t n,
                                  const std::vector<ElementCode>& gens,
                                  const Semigroup& s);

}  // namespace

TransformationSemigroup::TransformationSemigroup(
    const TransformationSemigroupSpec& spec)
    : Semigroup(0), n_(spec.ground_set_size) {
  if (n_ < 1 || n_ > 255)
    throw MalformedSpec("ground_set_size must be in [1, 255]");
  if (spec.generators.empty())
    throw MalformedSpec("at least one generator required");
  for (const auto& images : spec.generators) {
    if (images.size() != n_)
      throw MalformedSpec("generator is not a total function on the ground set");
    for (uint32_t v : images)
      if (v < 1 || v > n_)
        throw MalformedSpec("generator image out of range");
    gens_.push_back(element(images));
  }
  order_bound_ = transformation_order_bound(n_, gens_, *this);
}

ElementCode TransformationSemigroup::element(
    const std::vector<uint32_t>& images_1based) const {
  ElementCode c;
  c.bytes.reserve(n_);
  for (uint32_t v : images_1based)
    c.bytes.push_back(static_cast<char>(v & 0xff));
  return c;
}

std::vector<uint32_t> TransformationSemigroup::images_of(
    const ElementCode& code) const {
  std::vector<uint32_t> images(n_);
  for (uint32_t i = 0; i < n_; ++i)
    images[i] = static_cast<uint8_t>(code.bytes[i]);
  return images;
}

std::vector<ElementCode> TransformationSemigroup::generators() const {
  return gens_;
}

ElementCode TransformationSemigroup::multiply(const ElementCode& a,
                                              const ElementCode& b,
                                              bool /*metered*/) const {
  ElementCode c;
  c.bytes.resize(n_);
  for (uint32_t i = 0; i < n_; ++i) {
    const uint8_t ai = static_cast<uint8_t>(a.bytes[i]);
    c.bytes[i] = b.bytes[ai - 1];
  }
  return c;
}

// ---------------------------------------------------------------------------
// Matrix family

MatrixSemigroup::MatrixSemigroup(const MatrixSemigroupSpec& spec)
    : Semigroup(0), d_(spec.dimension), m_(spec.modulus) {
  if (d_ < 1 || d_ > 16) throw MalformedSpec("dimension must be in [1, 16]");
  if (m_ < 2) throw MalformedSpec("modulus must be >= 2");
  if (m_ > (uint64_t(1) << 31)) throw MalformedSpec("modulus must fit in 31 bits");
  if (spec.generators.empty())
    throw MalformedSpec("at least one generator required");
  for (const auto& entries : spec.generators) {
    if (entries.size() != static_cast<size_t>(d_) * d_)
      throw MalformedSpec("generator has wrong matrix shape");
    std::vector<uint64_t> reduced(entries);
    for (auto& e : reduced) e %= m_;
    gens_.push_back(element(reduced));
  }
  BigInt bound = 1;
  for (uint32_t i = 0; i < d_ * d_; ++i) bound *= m_;
  order_bound_ = bound;
}

ElementCode MatrixSemigroup::element(
    const std::vector<uint64_t>& entries_row_major) const {
  ElementCode c;
  c.bytes.reserve(entries_row_major.size() * 8);
  for (uint64_t e : entries_row_major) append_u64_be(c.bytes, e % m_);
  return c;
}

std::vector<uint64_t> MatrixSemigroup::entries_of(const ElementCode& code) const {
  std::vector<uint64_t> entries(static_cast<size_t>(d_) * d_);
  for (size_t i = 0; i < entries.size(); ++i)
    entries[i] = read_u64_be(code.bytes, i * 8);
  return entries;
}

std::vector<ElementCode> MatrixSemigroup::generators() const { return gens_; }

ElementCode MatrixSemigroup::multiply(const ElementCode& a, const ElementCode& b,
                                      bool /*metered*/) const {
  const size_t d = d_;
  std::vector<uint64_t> out(d * d);
  for (size_t i = 0; i < d; ++i) {
    for (size_t j = 0; j < d; ++j) {
      unsigned __int128 acc = 0;
      for (size_t l = 0; l < d; ++l) {
        acc += static_cast<unsigned __int128>(read_u64_be(a.bytes, (i * d + l) * 8)) *
               read_u64_be(b.bytes, (l * d + j) * 8);
      }
      out[i * d + j] = static_cast<uint64_t>(acc % m_);
    }
  }
  return element(out);
}

// ---------------------------------------------------------------------------

std::unique_ptr<Semigroup> make_handle(const RhoSemigroupSpec& spec) {
  return std::make_unique<RhoSemigroup>(spec);
}
std::unique_ptr<Semigroup> make_handle(const TransformationSemigroupSpec& spec) {
  return std::make_unique<TransformationSemigroup>(spec);
}
std::unique_ptr<Semigroup> make_handle(const MatrixSemigroupSpec& spec) {
  return std::make_unique<MatrixSemigroup>(spec);
}

namespace {

template <typename Mult>
ElementCode pow_impl(const ElementCode& g, const BigInt& j, Mult&& mult) {
  if (j < 1) throw MalformedSpec("pow requires exponent >= 1");
  const size_t bits = bit_length(j);
  ElementCode acc = g;
  for (size_t i = bits - 1; i-- > 0;) {
    acc = mult(acc, acc);
    if (boost::multiprecision::bit_test(j, static_cast<unsigned>(i)))
      acc = mult(acc, g);
  }
  return acc;
}

BigInt transformation_order_bound(uint32_t n,
                                  const std::vector<ElementCode>& gens,
                                  const Semigroup& s) {
  // Lazily sized: enumerate the closure when small, fall back to n^n above
  // the cap. Either way add slack for the t+r <= N edge cases (n = 1, or a
  // closure exactly filled by the powers of one generator).
  constexpr size_t kClosureCap = 100000;
  std::unordered_set<ElementCode> seen(gens.begin(), gens.end());
  std::vector<ElementCode> frontier(gens.begin(), gens.end());
  bool capped = false;
  while (!frontier.empty() && !capped) {
    std::vector<ElementCode> next;
    for (const auto& e : frontier) {
      for (const auto& g : gens) {
        ElementCode p = s.product_unmetered(e, g);
        if (seen.insert(p).second) next.push_back(p);
        if (seen.size() > kClosureCap) {
          capped = true;
          break;
        }
      }
      if (capped) break;
    }
    frontier = std::move(next);
  }
  if (!capped) return BigInt(seen.size()) + 1;
  BigInt bound = 1;
  for (uint32_t i = 0; i < n; ++i) bound *= n;
  return n == 1 ? BigInt(2) : bound;
}

}  // namespace

ElementCode pow(const Semigroup& h, const ElementCode& g, const BigInt& j) {
  return pow_impl(g, j, [&h](const ElementCode& a, const ElementCode& b) {
    return h.product(a, b);
  });
}

ElementCode pow_unmetered(const Semigroup& h, const ElementCode& g,
                          const BigInt& j) {
  return pow_impl(g, j, [&h](const ElementCode& a, const ElementCode& b) {
    return h.product_unmetered(a, b);
  });
}

std::optional<std::vector<ElementCode>> enumerate_closure(const Semigroup& h,
                                                          size_t cap) {
  const auto gens = h.generators();
  std::vector<ElementCode> order;
  std::unordered_set<ElementCode> seen;
  for (const auto& g : gens)
    if (seen.insert(g).second) order.push_back(g);
  for (size_t head = 0; head < order.size(); ++head) {
    for (const auto& g : gens) {
      ElementCode p = h.product_unmetered(order[head], g);
      if (seen.insert(p).second) {
        order.push_back(p);
        if (order.size() > cap) return std::nullopt;
      }
    }
  }
  return order;
}

}  // namespace sgdlog
