#include "sgdlog/dlog.hpp"

#include <vector>

#include "sgdlog/detail/power_orbit.hpp"

namespace sgdlog {

namespace detail {

std::pair<BigInt, BigInt> brent_rho(const PowerOrbit& orbit, bool metered) {
  // Brent's algorithm on x_{j+1} = x_j * g starting from x_1.
  const ElementCode x1 = orbit.eval(1, metered);
  BigInt power = 1, lam = 1;
  ElementCode tortoise = x1;
  ElementCode hare = orbit.step(x1, metered);
  while (!(tortoise == hare)) {
    if (power == lam) {
      tortoise = hare;
      power *= 2;
      lam = 0;
    }
    hare = orbit.step(hare, metered);
    ++lam;
  }
  // lam = r. Advance a runner lam steps ahead, then walk both to the meet
  // point; the step count is the 0-based tail length.
  hare = x1;
  for (BigInt i = 0; i < lam; ++i) hare = orbit.step(hare, metered);
  tortoise = x1;
  BigInt mu = 0;
  while (!(tortoise == hare)) {
    tortoise = orbit.step(tortoise, metered);
    hare = orbit.step(hare, metered);
    ++mu;
  }
  return {mu + 1, lam};
}

BigInt first_one_binary_search(const BigInt& N,
                               const std::function<bool(const BigInt&)>& pred) {
  BigInt lo = 1, hi = N;
  while (lo < hi) {
    BigInt mid = (lo + hi) / 2;
    if (pred(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

namespace {

// Least divisor of `candidate` that still validates; the validated candidate
// is always a multiple of the true period, never a proper divisor.
BigInt minimize_validated_period(
    const BigInt& candidate,
    const std::function<bool(const BigInt&)>& validate) {
  if (candidate > (BigInt(1) << 62)) return candidate;  // out of desk scale
  const uint64_t c = to_u64(candidate);
  std::vector<uint64_t> divisors;
  for (uint64_t d = 1; d * d <= c; ++d) {
    if (c % d) continue;
    divisors.push_back(d);
    if (d != c / d) divisors.push_back(c / d);
  }
  std::sort(divisors.begin(), divisors.end());
  for (uint64_t d : divisors)
    if (validate(BigInt(d))) return BigInt(d);
  return candidate;
}

}  // namespace

std::pair<BigInt, BigInt> find_orbit_rho(const PowerOrbit& orbit, SimMode mode,
                                         Rng& rng, const DlogOptions& opts) {
  const Semigroup& h = *orbit.h;
  const BigInt& N = h.order_bound();

  if (mode == SimMode::classical) return brent_rho(orbit, true);

  const ElementCode end = orbit.eval(N, true);
  auto validate = [&](const BigInt& d) {
    return h.product(end, pow(h, orbit.g, d)) == end;
  };

  // Degenerate period 1: the k = 0 outcome carries nothing, skip sampling.
  if (validate(1)) {
    BigInt r = 1;
    auto in_cycle = [&](const BigInt& j) {
      return gamma(h, orbit.g, r, orbit.eval(j, true));
    };
    return {first_one_binary_search(N, in_cycle), r};
  }

  // Simulator side: ground truth for the sampling distribution.
  const auto [t_true, r_true] = brent_rho(orbit, false);
  const BigInt M = pow2_above(N * N + N);
  const uint64_t prep_charge =
      opts.accounting == QueryAccounting::unit
          ? 0
          : 2 * static_cast<uint64_t>(bit_length(M));

  // A good sample whose peak index shares a factor with r yields only the
  // divisor r/gcd as a convergent denominator; stepping through small
  // multiples of each candidate against the black box recovers the full
  // period without combining samples by lcm.
  BigInt validated = 0;
  auto validate_multiples = [&](const BigInt& d) {
    BigInt limit = N / d;
    if (limit > 64) limit = 64;
    for (BigInt m = 1; m <= limit; ++m) {
      if (validate(m * d)) {
        validated = m * d;
        return true;
      }
    }
    return false;
  };

  std::optional<BigInt> period;
  for (int attempt = 0; attempt < opts.boost_attempts && !period; ++attempt) {
    h.meter().charged_queries += prep_charge;
    // Second-register collapse: position v uniform over the cycle support
    // determines the offset x0 with the exact marginal L(x0)/(M - t + 1).
    const BigInt v = t_true + rng.below_big(M - t_true + 1);
    PeriodSamplingInstance inst{M, t_true, r_true,
                                t_true + (v - t_true) % r_true};
    const PeriodSample s = fourier_sample_period(inst, mode, rng);
    if (s.tail || s.k == 0) continue;
    if (recover_period({s.k}, M, N, validate_multiples))
      period = minimize_validated_period(validated, validate);
  }
  if (!period)
    throw SubroutineFailure("period sampling failed after boosting");

  auto in_cycle = [&](const BigInt& j) {
    return gamma(h, orbit.g, *period, orbit.eval(j, true));
  };
  return {first_one_binary_search(N, in_cycle), *period};
}

}  // namespace detail

bool gamma(const Semigroup& h, const ElementCode& g, const BigInt& rho_r,
           const ElementCode& e) {
  return h.product(e, pow(h, g, rho_r)) == e;
}

RhoStructure find_rho(const Semigroup& h, const ElementCode& g, SimMode mode,
                      Rng& rng, const DlogOptions& opts) {
  detail::PowerOrbit orbit{&h, std::nullopt, g};
  auto [t, r] = detail::find_orbit_rho(orbit, mode, rng, opts);
  return {t, r, h.order_bound()};
}

CycleGroupView cycle_view(const Semigroup& h, const ElementCode& g,
                          const RhoStructure& rho) {
  const BigInt s = (rho.r - rho.t % rho.r) % rho.r;
  CycleGroupView view;
  view.rho = rho;
  view.s = s;
  view.identity = pow(h, g, rho.t + s);
  view.generator = pow(h, g, rho.t + s + 1);
  view.generator_inverse = pow(h, g, rho.t + s + rho.r - 1);
  if (!(h.product(view.generator, view.generator_inverse) == view.identity))
    throw InconsistentRho("generator * inverse != identity; rho is wrong");
  return view;
}

BigInt semigroup_dlog(const Semigroup& h, const ElementCode& g,
                      const ElementCode& x, SimMode mode, Rng& rng,
                      const DlogOptions& opts) {
  const RhoStructure rho = find_rho(h, g, mode, rng, opts);
  const BigInt& N = rho.N;

  auto verified = [&](const BigInt& a) { return pow(h, g, a) == x; };

  if (gamma(h, g, rho.r, x)) {
    // Cycle case: Shor in the cycle group C, then t + [(s + log) mod r].
    const CycleGroupView view = cycle_view(h, g, rho);
    uint64_t log_in_c;
    try {
      log_in_c =
          shor_dlog_cyclic(h, view.generator, x, to_u64(rho.r), view.identity,
                           view.generator_inverse, mode, rng, opts.accounting);
    } catch (const NotInGroup&) {
      // x satisfies x g^r = x without being a power of g (absorbed foreign
      // element); do not loop on it.
      throw NotAPower("x is cycle-absorbed but not a power of g");
    }
    const BigInt a = rho.t + (view.s + log_in_c) % rho.r;
    if (!verified(a)) throw NotAPower("cycle-branch verification failed");
    return a;
  }

  // Tail case: p = least positive integer with gamma(x g^p) = 1, then t - p.
  auto shifted_in_cycle = [&](const BigInt& p) {
    return gamma(h, g, rho.r, h.product(x, pow(h, g, p)));
  };
  if (!shifted_in_cycle(N))
    throw NotAPower("x never reaches the cycle of g");
  const BigInt p = detail::first_one_binary_search(N, shifted_in_cycle);
  if (p >= rho.t) throw NotAPower("no tail exponent exists");
  const BigInt a = rho.t - p;
  if (!verified(a)) throw NotAPower("tail-branch verification failed");
  return a;
}

}  // namespace sgdlog
