#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "sgdlog/bigint.hpp"
#include "sgdlog/element_code.hpp"
#include "sgdlog/oracle_sim.hpp"
#include "sgdlog/rng.hpp"
#include "sgdlog/semigroup.hpp"

namespace sgdlog {

// Witness for x = g_1^{a_1} ... g_k^{a_k}, sum a_i >= 1.
struct ExponentVector {
  std::vector<BigInt> a;

  BigInt total() const {
    BigInt s = 0;
    for (const auto& v : a) s += v;
    return s;
  }
};

// ---------------------------------------------------------------------------
// The truncated free abelian semigroup with zero whose boundary layer hides
// a permutation: elements are exponent tuples with 1 <= sum <= n plus an
// absorbing zero; products add tuples and truncate to zero past n. Interior
// tuples encode as themselves; tuples with sum = n encode through pi over
// Sigma = {(a_1..a_{k-1}) : sum <= n}; computing any product touches pi at
// most once.
struct LowerBoundSemigroupSpec {
  uint32_t n = 1;
  uint32_t k = 2;
  // pi as a permutation of Sigma indices (lex rank order); empty = identity.
  std::vector<uint32_t> pi;
};

class LowerBoundSemigroup final : public Semigroup {
 public:
  explicit LowerBoundSemigroup(const LowerBoundSemigroupSpec& spec);

  uint32_t n() const { return n_; }
  uint32_t k() const { return k_; }

  std::vector<ElementCode> generators() const override;
  std::string family() const override { return "lowerbound"; }

  // Harness surface -------------------------------------------------------
  size_t sigma_size() const { return sigma_.size(); }
  const std::vector<uint32_t>& sigma_tuple(size_t rank) const {
    return sigma_[rank];
  }
  size_t sigma_rank(const std::vector<uint32_t>& tuple) const;
  uint32_t pi_of(size_t rank) const { return pi_[rank]; }
  uint32_t pi_inverse_of(size_t rank) const { return pi_inv_[rank]; }

  bool is_zero(const ElementCode& code) const;
  // enc of the element with exponent tuple `a` (1 <= sum <= n).
  ElementCode element(const std::vector<uint32_t>& a) const;
  // The boundary element whose encoding is the Sigma tuple of rank `rank`.
  ElementCode element_for_sigma_code(size_t rank) const;
  // Full exponent tuple of a nonzero element (uses pi^{-1} for the boundary).
  std::vector<uint32_t> tuple_of(const ElementCode& code) const;

  std::vector<ElementCode> all_elements() const;

 private:
  ElementCode multiply(const ElementCode& a, const ElementCode& b,
                       bool metered) const override;
  ElementCode encode_tuple(const std::vector<uint32_t>& a, bool metered) const;
  ElementCode zero_code() const;

  uint32_t n_, k_;
  std::vector<std::vector<uint32_t>> sigma_;  // lex order
  std::vector<uint32_t> pi_, pi_inv_;
};

std::unique_ptr<LowerBoundSemigroup> build_lower_bound_semigroup(
    const LowerBoundSemigroupSpec& spec);

std::vector<uint32_t> random_sigma_permutation(size_t size, Rng& rng);

// ---------------------------------------------------------------------------
// Indexable search space of exponent tuples with prod (a_i + 1) <= budget,
// optionally capped per coordinate (a cap set to an element's rho bound
// t+r-1 loses no witnesses). Materialized in lex order.
class BoundedTupleSpace {
 public:
  BoundedTupleSpace(size_t slots, uint64_t budget,
                    std::vector<uint64_t> caps = {},
                    size_t max_size = size_t(1) << 24);

  size_t size() const { return tuples_.size(); }
  const std::vector<uint64_t>& tuple(size_t rank) const { return tuples_[rank]; }
  uint64_t budget() const { return budget_; }

 private:
  uint64_t budget_;
  std::vector<std::vector<uint64_t>> tuples_;
};

// ---------------------------------------------------------------------------
// Exhaustive lexicographic-first decomposition; the independent test oracle.
// Enumeration is pruned to prod (a_i+1) <= |S| (the lex-first witness always
// satisfies it) and aborts past `cap` enumerated tuples.
std::optional<ExponentVector> lex_first_decomposition_oracle(
    const Semigroup& h, const ElementCode& x,
    const std::vector<ElementCode>& generators, uint64_t cap = 10000000);

struct MembershipOptions {
  QueryAccounting accounting = QueryAccounting::unit;
  int boost_attempts = 32;
};

struct MembershipResult {
  ExponentVector witness;
  uint64_t grover_oracle_calls = 0;  // BBHT-schedule total across coordinates
};

// Finds exponents with x = g_1^{a_1} ... g_k^{a_k} by, per coordinate j, a
// Grover search over the bounded tuple space of the other coordinates with a
// shifted-dlog inner solve for a_j. Throws NotMember when every coordinate
// search is exhausted.
MembershipResult constructive_membership(
    const Semigroup& h, const ElementCode& x,
    const std::vector<ElementCode>& generators, SimMode mode, Rng& rng,
    const MembershipOptions& opts = {});

// ---------------------------------------------------------------------------
// Permutation-inversion experiment on the lower-bound construction.

struct PermInversionTrial {
  size_t sigma_rank = 0;
  bool success = false;
  QueryMeter queries;
};

struct PermInversionReport {
  BigInt semigroup_size;
  size_t sigma_size = 0;
  double expected_query_exponent = 0;  // 1/2 - 1/(2k)
  std::vector<PermInversionTrial> trials;
};

PermInversionReport permutation_inversion_experiment(uint32_t n, uint32_t k,
                                                     int trials, Rng& rng,
                                                     SimMode mode,
                                                     const MembershipOptions& opts = {});

}  // namespace sgdlog
