#pragma once

#include <optional>
#include <utility>

#include "sgdlog/bigint.hpp"
#include "sgdlog/dlog.hpp"
#include "sgdlog/element_code.hpp"
#include "sgdlog/oracle_sim.hpp"
#include "sgdlog/semigroup.hpp"

namespace sgdlog::detail {

// The eventually periodic sequence j >= 1 -> y * g^j (or g^j when no base
// point). Both the plain and the shifted rho pipelines run on this.
struct PowerOrbit {
  const Semigroup* h = nullptr;
  std::optional<ElementCode> y;
  ElementCode g;

  ElementCode eval(const BigInt& j, bool metered) const {
    ElementCode p = metered ? pow(*h, g, j) : pow_unmetered(*h, g, j);
    if (!y) return p;
    return metered ? h->product(*y, p) : h->product_unmetered(*y, p);
  }

  ElementCode step(const ElementCode& e, bool metered) const {
    return metered ? h->product(e, g) : h->product_unmetered(e, g);
  }
};

// Brent cycle detection on the orbit; O(t + r) products. Returns (t, r).
std::pair<BigInt, BigInt> brent_rho(const PowerOrbit& orbit, bool metered);

// Exact (t, r) of the orbit; shared pipeline behind find_rho and
// find_shifted_rho.
std::pair<BigInt, BigInt> find_orbit_rho(const PowerOrbit& orbit, SimMode mode,
                                         Rng& rng, const DlogOptions& opts);

// First j in [1, N] with pred(j) = 1, given the 0*1* monotone structure.
// Requires pred(N) = 1.
BigInt first_one_binary_search(const BigInt& N,
                               const std::function<bool(const BigInt&)>& pred);

}  // namespace sgdlog::detail
