#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sgdlog/bigint.hpp"
#include "sgdlog/element_code.hpp"
#include "sgdlog/errors.hpp"
#include "sgdlog/meter.hpp"

namespace sgdlog {

// A black-box finite semigroup. Algorithm code may touch only product(),
// code equality, order_bound() and the meter; everything else on the
// concrete families exists for the test harness and the quantum-subroutine
// simulator, which must know ground truth to sample measurement outcomes.
//
// The handle is immutable after construction except for the meter, which is
// owned by one experiment run at a time (single-threaded access).
class Semigroup {
 public:
  virtual ~Semigroup() = default;

  Semigroup(const Semigroup&) = delete;
  Semigroup& operator=(const Semigroup&) = delete;

  // One product call = one query. Equality of codes is free.
  ElementCode product(const ElementCode& a, const ElementCode& b) const {
    ++meter_.product_queries;
    return multiply(a, b, /*metered=*/true);
  }

  // Simulator/harness access; does not touch the meter.
  ElementCode product_unmetered(const ElementCode& a,
                                const ElementCode& b) const {
    return multiply(a, b, /*metered=*/false);
  }

  // N with t + r <= N for every element.
  const BigInt& order_bound() const { return order_bound_; }

  QueryMeter& meter() const { return meter_; }

  virtual std::vector<ElementCode> generators() const = 0;
  virtual std::string family() const = 0;

 protected:
  explicit Semigroup(BigInt order_bound)
      : order_bound_(std::move(order_bound)) {}

  virtual ElementCode multiply(const ElementCode& a, const ElementCode& b,
                               bool metered) const = 0;

  mutable QueryMeter meter_;
  BigInt order_bound_;
};

// ---------------------------------------------------------------------------
// Family specs (JSON field names match these member names).

struct RhoSemigroupSpec {
  uint64_t t = 1;
  uint64_t r = 1;
};

struct TransformationSemigroupSpec {
  uint32_t ground_set_size = 1;
  // 1-based image tuples, one per generator.
  std::vector<std::vector<uint32_t>> generators;
};

struct MatrixSemigroupSpec {
  uint32_t dimension = 1;
  uint64_t modulus = 2;
  // Row-major d*d entry lists, one per generator.
  std::vector<std::vector<uint64_t>> generators;
};

// ---------------------------------------------------------------------------
// Concrete families. Ground-truth accessors are harness-side only.

// The abstract cyclic semigroup with tail length t and cycle length r:
// powers g, g^2, ..., g^{t+r-1} distinct, g^{t+r} = g^t.
class RhoSemigroup final : public Semigroup {
 public:
  explicit RhoSemigroup(const RhoSemigroupSpec& spec);

  uint64_t t() const { return t_; }
  uint64_t r() const { return r_; }

  // Canonical code of g^j (j >= 1).
  ElementCode element(uint64_t exponent) const;
  ElementCode element(const BigInt& exponent) const;
  uint64_t exponent_of(const ElementCode& code) const;

  std::vector<ElementCode> generators() const override;
  std::string family() const override { return "rho"; }

 private:
  ElementCode multiply(const ElementCode& a, const ElementCode& b,
                       bool metered) const override;
  uint64_t canonical(uint64_t j) const;

  uint64_t t_, r_;
};

// Total functions on {1..n} under composition, (a*b)(i) = b(a(i)).
class TransformationSemigroup final : public Semigroup {
 public:
  explicit TransformationSemigroup(const TransformationSemigroupSpec& spec);

  uint32_t ground_set_size() const { return n_; }
  ElementCode element(const std::vector<uint32_t>& images_1based) const;
  std::vector<uint32_t> images_of(const ElementCode& code) const;

  std::vector<ElementCode> generators() const override;
  std::string family() const override { return "transformation"; }

 private:
  ElementCode multiply(const ElementCode& a, const ElementCode& b,
                       bool metered) const override;

  uint32_t n_;
  std::vector<ElementCode> gens_;
};

// d x d matrices over Z_m, row-major entry-tuple encoding.
class MatrixSemigroup final : public Semigroup {
 public:
  explicit MatrixSemigroup(const MatrixSemigroupSpec& spec);

  uint32_t dimension() const { return d_; }
  uint64_t modulus() const { return m_; }
  ElementCode element(const std::vector<uint64_t>& entries_row_major) const;
  std::vector<uint64_t> entries_of(const ElementCode& code) const;

  std::vector<ElementCode> generators() const override;
  std::string family() const override { return "matrix"; }

 private:
  ElementCode multiply(const ElementCode& a, const ElementCode& b,
                       bool metered) const override;

  uint32_t d_;
  uint64_t m_;
  std::vector<ElementCode> gens_;
};

std::unique_ptr<Semigroup> make_handle(const RhoSemigroupSpec& spec);
std::unique_ptr<Semigroup> make_handle(const TransformationSemigroupSpec& spec);
std::unique_ptr<Semigroup> make_handle(const MatrixSemigroupSpec& spec);

// ---------------------------------------------------------------------------
// g^j by repeated squaring, O(log j) products. j >= 1 and arbitrary
// precision: callers build superpositions over j up to M > N^2 + N.
ElementCode pow(const Semigroup& h, const ElementCode& g, const BigInt& j);
ElementCode pow_unmetered(const Semigroup& h, const ElementCode& g,
                          const BigInt& j);

// BFS closure of the generator set under unmetered products. nullopt if the
// closure exceeds `cap` elements.
std::optional<std::vector<ElementCode>> enumerate_closure(const Semigroup& h,
                                                          size_t cap);

}  // namespace sgdlog
