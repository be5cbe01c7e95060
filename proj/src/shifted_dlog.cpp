#include "sgdlog/shifted_dlog.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <unordered_map>

#include "sgdlog/detail/power_orbit.hpp"

namespace sgdlog {

namespace {

// Ground-truth shift: l in [0, r~) with x = y g^{t~+l}, by meet-in-the-middle
// on the orbit cycle (unmetered; simulator side).
std::optional<uint64_t> find_shift_truth(const Semigroup& h,
                                         const ElementCode& x,
                                         const ElementCode& y,
                                         const ElementCode& g,
                                         const ShiftedRho& srho) {
  const uint64_t r = to_u64(srho.r);
  const uint64_t m =
      static_cast<uint64_t>(std::ceil(std::sqrt(static_cast<double>(r))));
  std::unordered_map<ElementCode, uint64_t> baby;  // x g^j -> j, j in [0, m)
  ElementCode e = x;
  baby.emplace(e, 0);
  for (uint64_t j = 1; j < m; ++j) {
    e = h.product_unmetered(e, g);
    baby.emplace(e, j);
  }
  ElementCode cur = pow_unmetered(h, g, srho.t);
  cur = h.product_unmetered(y, cur);  // y g^{t~}
  const ElementCode giant = pow_unmetered(h, g, BigInt(m));
  for (uint64_t i = 0; i * m <= r + m; ++i) {
    if (auto it = baby.find(cur); it != baby.end()) {
      // y g^{t~ + i m} = x g^j  =>  x = y g^{t~ + (i m - j mod r)}
      const uint64_t l =
          static_cast<uint64_t>((static_cast<unsigned __int128>(i) * m + r -
                                 it->second % r) % r);
      return l;
    }
    cur = h.product_unmetered(cur, giant);
  }
  return std::nullopt;
}

}  // namespace

HiddenShiftInstance make_hidden_shift_instance(const Semigroup& h,
                                               const ElementCode& x,
                                               const ElementCode& y,
                                               const ElementCode& g,
                                               const ShiftedRho& srho) {
  const auto shift = find_shift_truth(h, x, y, g, srho);
  if (!shift) throw NoSolution("x is not in the orbit cycle of y");
  HiddenShiftInstance inst;
  inst.order = to_u64(srho.r);
  inst.shift = *shift;
  const BigInt t = srho.t;
  inst.f0 = [&h, y, g, t](uint64_t j) {
    return h.product_unmetered(y, pow_unmetered(h, g, t + j));
  };
  inst.f1 = [&h, x, g](uint64_t j) {
    return j == 0 ? x : h.product_unmetered(x, pow_unmetered(h, g, BigInt(j)));
  };
  return inst;
}

ShiftedRho find_shifted_rho(const Semigroup& h, const ElementCode& y,
                            const ElementCode& g, SimMode mode, Rng& rng,
                            const DlogOptions& opts) {
  detail::PowerOrbit orbit{&h, y, g};
  auto [t, r] = detail::find_orbit_rho(orbit, mode, rng, opts);
  return {t, r};
}

BigInt shifted_dlog(const Semigroup& h, const ElementCode& x,
                    const ElementCode& y, const ElementCode& g, SimMode mode,
                    Rng& rng, const DlogOptions& opts) {
  const ShiftedRho srho = find_shifted_rho(h, y, g, mode, rng, opts);
  const BigInt& N = h.order_bound();

  auto verified = [&](const BigInt& a) {
    return h.product(y, pow(h, g, a)) == x;
  };

  // Orbit-cycle membership of x: x g^{r~} = x.
  const bool in_cycle = gamma(h, g, srho.r, x);

  if (!in_cycle) {
    // Tail case, treated exactly like the plain dlog tail: find the least p
    // with x g^p in the cycle, then a = t~ - p.
    auto shifted_in_cycle = [&](const BigInt& p) {
      return gamma(h, g, srho.r, h.product(x, pow(h, g, p)));
    };
    if (!shifted_in_cycle(N)) throw NoSolution("x never reaches the orbit cycle");
    const BigInt p = detail::first_one_binary_search(N, shifted_in_cycle);
    if (p >= srho.t) throw NoSolution("no tail solution exists");
    const BigInt a = srho.t - p;
    if (!verified(a)) throw NoSolution("tail-branch verification failed");
    return a;
  }

  // Cycle case: dihedral hidden shift on the two rows f0/f1.
  const uint64_t r = to_u64(srho.r);
  SimMode sieve_mode = mode;
  if (mode != SimMode::classical && (r & (r - 1)) != 0) {
    std::fprintf(stderr,
                 "sgdlog: sieve order %llu is not a power of two; "
                 "falling back to classical scan\n",
                 static_cast<unsigned long long>(r));
    sieve_mode = SimMode::classical;
  }

  uint64_t shift_found;
  if (sieve_mode == SimMode::classical) {
    // Incremental scan: l tested in ascending order, one product each.
    ElementCode cur = h.product(y, pow(h, g, srho.t));
    uint64_t next = 0;
    auto test = [&](uint64_t l) {
      if (l != next) throw SubroutineFailure("classical scan out of order");
      if (l > 0) cur = h.product(cur, g);
      ++next;
      return cur == x;
    };
    DihedralSim dummy(r, 0, nullptr, 0);
    try {
      shift_found = sieve_solve_shift(dummy, r, SimMode::classical, rng, test);
    } catch (const NoSolution&) {
      throw NoSolution("x is absorbed into the cycle but unreachable from y");
    }
  } else {
    const auto truth = find_shift_truth(h, x, y, g, srho);
    if (!truth)
      throw NoSolution("x is absorbed into the cycle but unreachable from y");
    uint64_t token_charge = 0;
    if (opts.accounting == QueryAccounting::measured)
      token_charge = 2 * static_cast<uint64_t>(bit_length(N)) + 2;
    if (opts.accounting == QueryAccounting::query_efficient) {
      // Flat polylog bill for the query-efficient dihedral solver; the sieve
      // still runs as simulation machinery but its token draws are free.
      const BigInt M = pow2_above(N * N + N);
      const uint64_t lr = bit_length(BigInt(r)) + 1;
      h.meter().charged_queries += lr * lr * (bit_length(M) + 1);
    }
    DihedralSim sim(r, *truth, &h.meter(), token_charge);
    shift_found = sieve_solve_shift(sim, r, sieve_mode, rng);
  }

  const BigInt a = srho.t + shift_found;
  if (!verified(a)) throw NoSolution("cycle-branch verification failed");
  return a;
}

}  // namespace sgdlog
