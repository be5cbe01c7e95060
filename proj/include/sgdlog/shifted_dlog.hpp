#pragma once

#include <functional>

#include "sgdlog/bigint.hpp"
#include "sgdlog/dlog.hpp"
#include "sgdlog/element_code.hpp"
#include "sgdlog/oracle_sim.hpp"
#include "sgdlog/rng.hpp"
#include "sgdlog/semigroup.hpp"

namespace sgdlog {

// Index and period of the orbit j -> y g^j.
struct ShiftedRho {
  BigInt t;  // t~
  BigInt r;  // r~
};

// The two rows of the dihedral hiding function: f0(j) = y g^{t~+j} injective
// on Z_r~, f1(j) = x g^j = f0(j + shift) when x lies in the orbit cycle.
// `shift` is ground truth held by the harness; solver code sees only f0/f1.
struct HiddenShiftInstance {
  uint64_t order = 1;
  uint64_t shift = 0;
  std::function<ElementCode(uint64_t)> f0;
  std::function<ElementCode(uint64_t)> f1;
};

// Builds the instance for tests. Throws NoSolution when x is not in the
// orbit cycle of y under g. Function evaluations are unmetered.
HiddenShiftInstance make_hidden_shift_instance(const Semigroup& h,
                                               const ElementCode& x,
                                               const ElementCode& y,
                                               const ElementCode& g,
                                               const ShiftedRho& srho);

// Exact (t~, r~) via the same pipeline as find_rho, run on j -> y g^j.
ShiftedRho find_shifted_rho(const Semigroup& h, const ElementCode& y,
                            const ElementCode& g, SimMode mode, Rng& rng,
                            const DlogOptions& opts = {});

// Least a >= 1 with x = y g^a; throws NoSolution when none exists and
// TokenBudgetExhausted when the sieve runs out of tokens.
BigInt shifted_dlog(const Semigroup& h, const ElementCode& x,
                    const ElementCode& y, const ElementCode& g, SimMode mode,
                    Rng& rng, const DlogOptions& opts = {});

}  // namespace sgdlog
