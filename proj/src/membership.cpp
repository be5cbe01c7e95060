#include "sgdlog/membership.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sgdlog/dlog.hpp"
#include "sgdlog/kernels/kernels.hpp"
#include "sgdlog/shifted_dlog.hpp"

namespace sgdlog {

namespace {

void enumerate_sigma(uint32_t n, uint32_t slots, std::vector<uint32_t>& cur,
                     uint32_t used, std::vector<std::vector<uint32_t>>& out) {
  if (cur.size() == slots) {
    out.push_back(cur);
    return;
  }
  for (uint32_t v = 0; v + used <= n; ++v) {
    cur.push_back(v);
    enumerate_sigma(n, slots, cur, used + v, out);
    cur.pop_back();
  }
}

BigInt binomial(uint64_t n, uint64_t k) {
  BigInt r = 1;
  for (uint64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

// Smallest B >= 1 with B^k >= S^(k-1), i.e. ceil(S^((k-1)/k)).
BigInt ceil_root_power(const BigInt& S, uint32_t k) {
  if (k <= 1) return 1;
  BigInt target = 1;
  for (uint32_t i = 0; i + 1 < k; ++i) target *= S;
  BigInt lo = 1, hi = S;
  while (lo < hi) {
    BigInt mid = (lo + hi) / 2;
    BigInt p = 1;
    bool over = false;
    for (uint32_t i = 0; i < k && !over; ++i) {
      p *= mid;
      if (p >= target) over = true;
    }
    if (over || p >= target)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

}  // namespace

// ---------------------------------------------------------------------------
// Lower-bound semigroup

LowerBoundSemigroup::LowerBoundSemigroup(const LowerBoundSemigroupSpec& spec)
    : Semigroup(0), n_(spec.n), k_(spec.k) {
  if (n_ < 1) throw MalformedSpec("n must be >= 1");
  if (k_ < 2) throw MalformedSpec("k must be >= 2");
  std::vector<uint32_t> cur;
  enumerate_sigma(n_, k_ - 1, cur, 0, sigma_);
  if (sigma_.size() > 1000000)
    throw MalformedSpec("Sigma too large to materialize");
  if (spec.pi.empty()) {
    pi_.resize(sigma_.size());
    for (size_t i = 0; i < pi_.size(); ++i) pi_[i] = static_cast<uint32_t>(i);
  } else {
    pi_ = spec.pi;
  }
  if (pi_.size() != sigma_.size())
    throw MalformedSpec("pi must be a permutation of Sigma");
  pi_inv_.assign(pi_.size(), UINT32_MAX);
  for (size_t i = 0; i < pi_.size(); ++i) {
    if (pi_[i] >= pi_.size() || pi_inv_[pi_[i]] != UINT32_MAX)
      throw MalformedSpec("pi is not a bijection on Sigma");
    pi_inv_[pi_[i]] = static_cast<uint32_t>(i);
  }
  order_bound_ = binomial(n_ + k_, k_);  // exactly |S|
}

size_t LowerBoundSemigroup::sigma_rank(const std::vector<uint32_t>& tuple) const {
  const auto it = std::lower_bound(sigma_.begin(), sigma_.end(), tuple);
  if (it == sigma_.end() || *it != tuple)
    throw MalformedSpec("tuple not in Sigma");
  return static_cast<size_t>(it - sigma_.begin());
}

ElementCode LowerBoundSemigroup::zero_code() const {
  ElementCode c;
  c.bytes.assign(1 + 4 * static_cast<size_t>(k_), '\0');
  return c;
}

bool LowerBoundSemigroup::is_zero(const ElementCode& code) const {
  return code.bytes[0] == 0;
}

ElementCode LowerBoundSemigroup::encode_tuple(const std::vector<uint32_t>& a,
                                              bool metered) const {
  uint64_t sum = 0;
  for (uint32_t v : a) sum += v;
  if (sum < 1 || sum > n_) throw MalformedSpec("tuple sum out of [1, n]");
  ElementCode c;
  if (sum < n_) {
    c.bytes.push_back(1);
    for (uint32_t v : a) append_u32_be(c.bytes, v);
    return c;
  }
  // Boundary layer: route through pi on the first k-1 coordinates.
  std::vector<uint32_t> head(a.begin(), a.end() - 1);
  const size_t rank = sigma_rank(head);
  if (metered) ++meter_.permutation_queries;
  const auto& image = sigma_[pi_[rank]];
  c.bytes.push_back(2);
  for (uint32_t v : image) append_u32_be(c.bytes, v);
  append_u32_be(c.bytes, 0);  // fixed width
  return c;
}

ElementCode LowerBoundSemigroup::element(const std::vector<uint32_t>& a) const {
  if (a.size() != k_) throw MalformedSpec("tuple arity mismatch");
  return encode_tuple(a, false);
}

ElementCode LowerBoundSemigroup::element_for_sigma_code(size_t rank) const {
  ElementCode c;
  c.bytes.push_back(2);
  for (uint32_t v : sigma_[rank]) append_u32_be(c.bytes, v);
  append_u32_be(c.bytes, 0);
  return c;
}

std::vector<uint32_t> LowerBoundSemigroup::tuple_of(const ElementCode& code) const {
  const uint8_t tag = static_cast<uint8_t>(code.bytes[0]);
  if (tag == 0) throw MalformedSpec("the zero element has no exponent tuple");
  std::vector<uint32_t> a;
  if (tag == 1) {
    for (uint32_t i = 0; i < k_; ++i)
      a.push_back(read_u32_be(code.bytes, 1 + 4 * i));
    return a;
  }
  std::vector<uint32_t> image;
  for (uint32_t i = 0; i + 1 < k_; ++i)
    image.push_back(read_u32_be(code.bytes, 1 + 4 * i));
  const size_t rank = sigma_rank(image);
  a = sigma_[pi_inv_[rank]];
  uint32_t sum = 0;
  for (uint32_t v : a) sum += v;
  a.push_back(n_ - sum);
  return a;
}

std::vector<ElementCode> LowerBoundSemigroup::generators() const {
  std::vector<ElementCode> gens;
  for (uint32_t i = 0; i < k_; ++i) {
    std::vector<uint32_t> e(k_, 0);
    e[i] = 1;
    gens.push_back(encode_tuple(e, false));
  }
  return gens;
}

std::vector<ElementCode> LowerBoundSemigroup::all_elements() const {
  std::vector<ElementCode> out;
  std::vector<uint32_t> cur;
  // All k-tuples with sum <= n, skipping the all-zero one.
  std::vector<std::vector<uint32_t>> tuples;
  enumerate_sigma(n_, k_, cur, 0, tuples);
  for (const auto& a : tuples) {
    uint64_t sum = 0;
    for (uint32_t v : a) sum += v;
    if (sum >= 1) out.push_back(encode_tuple(a, false));
  }
  out.push_back(zero_code());
  return out;
}

ElementCode LowerBoundSemigroup::multiply(const ElementCode& a,
                                          const ElementCode& b,
                                          bool metered) const {
  const uint8_t ta = static_cast<uint8_t>(a.bytes[0]);
  const uint8_t tb = static_cast<uint8_t>(b.bytes[0]);
  // Zero absorbs; a boundary factor already has full weight n, so any
  // product involving it truncates without consulting pi.
  if (ta != 1 || tb != 1) return zero_code();
  std::vector<uint32_t> sum(k_);
  uint64_t total = 0;
  for (uint32_t i = 0; i < k_; ++i) {
    sum[i] = read_u32_be(a.bytes, 1 + 4 * i) + read_u32_be(b.bytes, 1 + 4 * i);
    total += sum[i];
  }
  if (total > n_) return zero_code();
  return encode_tuple(sum, metered);
}

std::unique_ptr<LowerBoundSemigroup> build_lower_bound_semigroup(
    const LowerBoundSemigroupSpec& spec) {
  return std::make_unique<LowerBoundSemigroup>(spec);
}

std::vector<uint32_t> random_sigma_permutation(size_t size, Rng& rng) {
  std::vector<uint32_t> pi(size);
  for (size_t i = 0; i < size; ++i) pi[i] = static_cast<uint32_t>(i);
  for (size_t i = size; i > 1; --i)
    std::swap(pi[i - 1], pi[rng.below(i)]);
  return pi;
}

// ---------------------------------------------------------------------------
// Bounded tuple space

BoundedTupleSpace::BoundedTupleSpace(size_t slots, uint64_t budget,
                                     std::vector<uint64_t> caps,
                                     size_t max_size)
    : budget_(budget) {
  if (budget < 1) throw MalformedSpec("budget must be >= 1");
  if (!caps.empty() && caps.size() != slots)
    throw MalformedSpec("cap arity mismatch");
  std::vector<uint64_t> cur(slots, 0);
  // Lex-order recursive descent; (v+1) divides the remaining budget floor.
  auto rec = [&](auto&& self, size_t slot, uint64_t left) -> void {
    if (slot == slots) {
      tuples_.push_back(cur);
      if (tuples_.size() > max_size)
        throw CapExceeded("tuple space exceeds materialization cap");
      return;
    }
    uint64_t vmax = left - 1;
    if (!caps.empty()) vmax = std::min(vmax, caps[slot]);
    for (uint64_t v = 0; v <= vmax; ++v) {
      cur[slot] = v;
      self(self, slot + 1, left / (v + 1));
    }
    cur[slot] = 0;
  };
  rec(rec, 0, budget);
}

// ---------------------------------------------------------------------------
// Lexicographically first decomposition (brute-force oracle)

std::optional<ExponentVector> lex_first_decomposition_oracle(
    const Semigroup& h, const ElementCode& x,
    const std::vector<ElementCode>& generators, uint64_t cap) {
  const auto closure = enumerate_closure(h, 1 << 20);
  if (!closure)
    throw CapExceeded("semigroup too large for the brute-force oracle");
  const uint64_t size = closure->size();
  const size_t k = generators.size();

  uint64_t visited = 0;
  std::vector<BigInt> a(k, 0);
  std::optional<ExponentVector> found;

  // Nested ascending loops in lex order; the lex-first witness satisfies
  // prod (a_i + 1) <= |S|, so the pruned scan cannot miss it.
  auto rec = [&](auto&& self, size_t i, uint64_t budget,
                 const std::optional<ElementCode>& prefix, bool any) -> bool {
    if (i == k) {
      if (++visited > cap) throw CapExceeded("oracle enumeration cap hit");
      return any && prefix && *prefix == x;
    }
    std::optional<ElementCode> cur = prefix;
    for (uint64_t v = 0; v + 1 <= budget; ++v) {
      if (v > 0)
        cur = cur ? h.product_unmetered(*cur, generators[i]) : generators[i];
      a[i] = v;
      if (self(self, i + 1, budget / (v + 1), cur, any || v > 0)) return true;
    }
    a[i] = 0;
    return false;
  };
  if (rec(rec, 0, size, std::nullopt, false)) {
    ExponentVector w;
    w.a = a;
    return w;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Constructive membership

namespace {

struct TupleProbe {
  bool hit = false;
  BigInt exponent;  // the found a_j
};

// Tests one tuple of the non-j exponents: does some a_j >= 0 complete it?
TupleProbe probe_tuple(const Semigroup& h, const ElementCode& x,
                       const std::vector<ElementCode>& gens, size_t j,
                       const std::vector<uint64_t>& tuple, SimMode mode,
                       Rng& rng, const DlogOptions& inner) {
  bool any = false;
  std::optional<ElementCode> y;
  size_t slot = 0;
  for (size_t i = 0; i < gens.size(); ++i) {
    if (i == j) continue;
    const uint64_t e = tuple[slot++];
    if (e == 0) continue;
    any = true;
    const ElementCode p = pow(h, gens[i], BigInt(e));
    y = y ? h.product(*y, p) : p;
  }
  try {
    if (!any) {
      // All other exponents zero: x must be a pure power of g_j.
      return {true, semigroup_dlog(h, gens[j], x, mode, rng, inner)};
    }
    if (*y == x) return {true, BigInt(0)};  // a_j = 0, tested by equality
    return {true, shifted_dlog(h, x, *y, gens[j], mode, rng, inner)};
  } catch (const NotAPower&) {
  } catch (const NoSolution&) {
  } catch (const TokenBudgetExhausted&) {
    // Sieve budget ran out; treated as a miss for this tuple.
  }
  return {false, 0};
}

uint64_t bbht_calls(size_t space, uint64_t hits) {
  const double s = static_cast<double>(space) /
                   static_cast<double>(std::max<uint64_t>(1, hits));
  return static_cast<uint64_t>(
      std::ceil(std::numbers::pi / 4.0 * std::sqrt(s)));
}

}  // namespace

MembershipResult constructive_membership(
    const Semigroup& h, const ElementCode& x,
    const std::vector<ElementCode>& generators, SimMode mode, Rng& rng,
    const MembershipOptions& opts) {
  const size_t k = generators.size();
  if (k == 0) throw MalformedSpec("at least one generator required");

  DlogOptions inner;
  inner.boost_attempts = opts.boost_attempts;
  inner.accounting = QueryAccounting::unit;  // the Grover layer charges

  const BigInt B_big =
      ceil_root_power(h.order_bound(), static_cast<uint32_t>(k));
  const uint64_t B = to_u64(B_big, "tuple budget");

  // Exponents above an element's rho bound duplicate smaller ones, so they
  // can be capped out of the search space without losing witnesses.
  std::vector<uint64_t> rho_caps(k);
  for (size_t i = 0; i < k; ++i) {
    const RhoStructure rho = find_rho(h, generators[i], mode, rng, inner);
    rho_caps[i] = to_u64(rho.t + rho.r - 1, "rho cap");
  }

  uint64_t total_calls = 0;
  for (size_t j = 0; j < k; ++j) {
    std::vector<uint64_t> caps;
    for (size_t i = 0; i < k; ++i)
      if (i != j) caps.push_back(rho_caps[i]);
    const BoundedTupleSpace space(k - 1, B, caps);

    const QueryMeter before = h.meter();
    uint64_t hits = 0;
    std::optional<size_t> first_rank;
    BigInt first_exp;
    uint64_t grover_applications = 0;

    const bool amplitude_sim =
        mode == SimMode::statevector && space.size() <= (size_t(1) << 16);

    if (!amplitude_sim) {
      for (size_t rank = 0; rank < space.size(); ++rank) {
        const TupleProbe p =
            probe_tuple(h, x, generators, j, space.tuple(rank), mode, rng, inner);
        if (p.hit) {
          if (!first_rank) {
            first_rank = rank;
            first_exp = p.exponent;
          }
          ++hits;
        }
      }
      grover_applications = bbht_calls(space.size(), hits);
    } else {
      // Actual amplitude-level Grover with the growing-iterate schedule for
      // an unknown number of solutions.
      std::vector<char> marked(space.size(), 0);
      std::vector<BigInt> exps(space.size());
      for (size_t rank = 0; rank < space.size(); ++rank) {
        const TupleProbe p =
            probe_tuple(h, x, generators, j, space.tuple(rank), mode, rng, inner);
        if (p.hit) {
          marked[rank] = 1;
          exps[rank] = p.exponent;
          ++hits;
        }
      }
      const size_t dim = space.size();
      const double sqrt_dim = std::sqrt(static_cast<double>(dim));
      double m = 1.0;
      std::vector<double> amp(dim);
      for (int round = 0; round < 64 && !first_rank; ++round) {
        const uint64_t iters = rng.below(static_cast<uint64_t>(m) + 1);
        std::fill(amp.begin(), amp.end(), 1.0 / sqrt_dim);
        for (uint64_t it = 0; it < iters; ++it) {
          for (size_t i = 0; i < dim; ++i)
            if (marked[i]) amp[i] = -amp[i];
          const double mean = kern::sum(amp.data(), dim) / static_cast<double>(dim);
          kern::reflect(amp.data(), dim, 2.0 * mean);
          ++grover_applications;
        }
        double pick = 0;
        for (size_t i = 0; i < dim; ++i) pick += amp[i] * amp[i];
        pick *= rng.unit();
        size_t idx = dim - 1;
        for (size_t i = 0; i < dim; ++i) {
          pick -= amp[i] * amp[i];
          if (pick < 0) {
            idx = i;
            break;
          }
        }
        if (marked[idx]) {
          first_rank = idx;
          first_exp = exps[idx];
          break;
        }
        m = std::min(1.2 * m, sqrt_dim);
        if (round > 24 && hits == 0) break;  // schedule exhausted, no solution
      }
      if (!first_rank && hits > 0) {
        // The schedule is overwhelmingly likely to land on a solution; fall
        // back to the recorded bitmap rather than reporting a false miss.
        for (size_t i = 0; i < dim && !first_rank; ++i)
          if (marked[i]) {
            first_rank = i;
            first_exp = exps[i];
          }
      }
    }

    // Charged-query bill for this coordinate's search.
    uint64_t per_tuple = 1;
    if (opts.accounting == QueryAccounting::measured) {
      const QueryMeter delta = h.meter() - before;
      per_tuple = std::max<uint64_t>(
          1, (delta.product_queries + space.size() - 1) / space.size());
    } else if (opts.accounting == QueryAccounting::query_efficient) {
      const BigInt& N = h.order_bound();
      const BigInt M = pow2_above(N * N + N);
      const uint64_t ln = bit_length(N) + 1;
      per_tuple = ln * ln * (bit_length(M) + 1);
    }
    total_calls += grover_applications;
    h.meter().charged_queries += grover_applications * per_tuple;

    if (first_rank) {
      ExponentVector w;
      w.a.assign(k, 0);
      size_t slot = 0;
      const auto& tup = space.tuple(*first_rank);
      for (size_t i = 0; i < k; ++i)
        if (i != j) w.a[i] = BigInt(tup[slot++]);
      w.a[j] = first_exp;
      // Hard postcondition: the witness must reproduce x.
      std::optional<ElementCode> prod;
      for (size_t i = 0; i < k; ++i) {
        if (w.a[i] == 0) continue;
        const ElementCode p = pow(h, generators[i], w.a[i]);
        prod = prod ? h.product(*prod, p) : p;
      }
      if (!prod || !(*prod == x))
        throw SubroutineFailure("membership witness failed verification");
      return {std::move(w), total_calls};
    }
  }
  throw NotMember("x is not a product of the given generators");
}

// ---------------------------------------------------------------------------

PermInversionReport permutation_inversion_experiment(
    uint32_t n, uint32_t k, int trials, Rng& rng, SimMode mode,
    const MembershipOptions& opts) {
  PermInversionReport report;
  report.semigroup_size = binomial(n + k, k);
  report.expected_query_exponent = 0.5 - 0.5 / static_cast<double>(k);

  for (int trial = 0; trial < trials; ++trial) {
    LowerBoundSemigroupSpec spec;
    spec.n = n;
    spec.k = k;
    // Size pi off a throwaway handle so each trial draws a fresh random
    // permutation of the same Sigma.
    if (trial == 0) {
      LowerBoundSemigroup probe(spec);
      report.sigma_size = probe.sigma_size();
    }
    spec.pi = random_sigma_permutation(report.sigma_size, rng);
    LowerBoundSemigroup h(spec);

    PermInversionTrial row;
    row.sigma_rank = rng.below(report.sigma_size);
    const ElementCode x = h.element_for_sigma_code(row.sigma_rank);
    try {
      const MembershipResult res =
          constructive_membership(h, x, h.generators(), mode, rng, opts);
      // Inverting pi: the witness head must equal pi^{-1}(sigma).
      const auto& expect = h.sigma_tuple(h.pi_inverse_of(row.sigma_rank));
      row.success = res.witness.a.size() == k;
      for (uint32_t i = 0; i + 1 < k && row.success; ++i)
        row.success = res.witness.a[i] == expect[i];
    } catch (const NotMember&) {
      row.success = false;
    }
    row.queries = h.meter();
    report.trials.push_back(row);
  }
  return report;
}

}  // namespace sgdlog
