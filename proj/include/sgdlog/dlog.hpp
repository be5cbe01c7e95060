#pragma once

#include "sgdlog/bigint.hpp"
#include "sgdlog/element_code.hpp"
#include "sgdlog/oracle_sim.hpp"
#include "sgdlog/rng.hpp"
#include "sgdlog/semigroup.hpp"

namespace sgdlog {

// Index and period of an element: g^t = g^{t+r}, powers g..g^{t+r-1}
// distinct, t + r <= N.
struct RhoStructure {
  BigInt t;
  BigInt r;
  BigInt N;
};

// The cycle C = {g^{t+j} : j in Z_r} is a group with identity g^{t+s},
// s = -t mod r, generated by g^{t+s+1} whose inverse is g^{t+s+r-1}.
struct CycleGroupView {
  RhoStructure rho;
  BigInt s;
  ElementCode identity;
  ElementCode generator;
  ElementCode generator_inverse;
};

struct DlogOptions {
  int boost_attempts = 32;
  QueryAccounting accounting = QueryAccounting::measured;
};

// Cycle membership test: 1 iff e * g^r = e. O(log r) products.
bool gamma(const Semigroup& h, const ElementCode& g, const BigInt& rho_r,
           const ElementCode& e);

// Exact (t, r) of g. Quantum modes run boosted Fourier period sampling plus
// continued fractions, then binary search for the first 1 in the monotone
// gamma list; classical mode runs Brent cycle detection.
RhoStructure find_rho(const Semigroup& h, const ElementCode& g, SimMode mode,
                      Rng& rng, const DlogOptions& opts = {});

CycleGroupView cycle_view(const Semigroup& h, const ElementCode& g,
                          const RhoStructure& rho);

// Least a >= 1 with g^a = x; throws NotAPower when x is not a power of g.
BigInt semigroup_dlog(const Semigroup& h, const ElementCode& g,
                      const ElementCode& x, SimMode mode, Rng& rng,
                      const DlogOptions& opts = {});

}  // namespace sgdlog
