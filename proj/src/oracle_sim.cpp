#include "sgdlog/oracle_sim.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <unordered_map>
#include <vector>

#include "sgdlog/kernels/kernels.hpp"

namespace sgdlog {

using std::numbers::pi;

SimMode parse_sim_mode(const std::string& s) {
  if (s == "statevector") return SimMode::statevector;
  if (s == "sampling") return SimMode::sampling;
  if (s == "classical") return SimMode::classical;
  throw MalformedSpec("unknown mode: " + s);
}

std::string to_string(SimMode mode) {
  switch (mode) {
    case SimMode::statevector: return "statevector";
    case SimMode::sampling: return "sampling";
    case SimMode::classical: return "classical";
  }
  return "?";
}

QueryAccounting parse_accounting(const std::string& s) {
  if (s == "measured") return QueryAccounting::measured;
  if (s == "query-efficient") return QueryAccounting::query_efficient;
  if (s == "unit") return QueryAccounting::unit;
  throw MalformedSpec("unknown accounting: " + s);
}

std::string to_string(QueryAccounting a) {
  switch (a) {
    case QueryAccounting::measured: return "measured";
    case QueryAccounting::query_efficient: return "query-efficient";
    case QueryAccounting::unit: return "unit";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Period sampling

BigInt PeriodSamplingInstance::support_count() const {
  return (M - x0) / r + 1;
}

void PeriodSamplingInstance::validate() const {
  if (t < 1 || r < 1) throw MalformedSpec("instance requires t >= 1, r >= 1");
  if (x0 < t || x0 >= t + r) throw MalformedSpec("x0 must lie in [t, t+r)");
  const BigInt n = t + r;
  if (M <= n * n + n) throw MalformedSpec("M must exceed N^2 + N");
}

namespace {

// sin(pi * a / M) with a reduced into [0, 2M) exactly beforehand.
double sin_pi_ratio(const BigInt& a, const BigInt& M) {
  return std::sin(pi * to_double_ratio(a, M));
}

}  // namespace

double fourier_outcome_probability(const PeriodSamplingInstance& inst,
                                   const BigInt& k) {
  const BigInt L = inst.support_count();
  const BigInt s = (k * inst.r) % inst.M;
  const double LM = inst.M.convert_to<double>() * L.convert_to<double>();
  if (s == 0) return L.convert_to<double>() / inst.M.convert_to<double>();
  const BigInt u = (s * L) % (2 * inst.M);
  const double sn = sin_pi_ratio(u, inst.M);
  const double sd = sin_pi_ratio(s, inst.M);
  return (sn * sn) / (LM * sd * sd);
}

std::vector<double> fourier_outcome_table(const PeriodSamplingInstance& inst) {
  if (inst.M > (BigInt(1) << 26))
    throw MalformedSpec("outcome table limited to M <= 2^26");
  const uint64_t M = to_u64(inst.M);
  const uint64_t r = to_u64(inst.r % inst.M);
  const uint64_t L = to_u64(inst.support_count());
  const uint64_t two_m = 2 * M;
  const uint64_t rl = static_cast<uint64_t>(
      (static_cast<unsigned __int128>(r) * L) % two_m);
  const double inv_lm =
      1.0 / (static_cast<double>(M) * static_cast<double>(L));
  std::vector<double> table(M);
  uint64_t s = 0;   // k*r mod M
  uint64_t u = 0;   // k*r*L mod 2M
  for (uint64_t k = 0; k < M; ++k) {
    if (s == 0) {
      table[k] = static_cast<double>(L) / static_cast<double>(M);
    } else {
      const double sn = std::sin(pi * static_cast<double>(u) / M);
      const double sd = std::sin(pi * static_cast<double>(s) / M);
      table[k] = sn * sn / (sd * sd) * inv_lm;
    }
    s += r;
    if (s >= M) s -= M;
    u += rl;
    if (u >= two_m) u -= two_m;
  }
  return table;
}

BigInt closest_integer_to_peak(const PeriodSamplingInstance& inst, uint64_t c) {
  return ((2 * c * inst.M + inst.r) / (2 * inst.r)) % inst.M;
}

double closest_peak_mass(const PeriodSamplingInstance& inst) {
  double mass = 0;
  for (uint64_t c = 0; c < to_u64(inst.r); ++c)
    mass += fourier_outcome_probability(inst, closest_integer_to_peak(inst, c));
  return mass;
}

namespace {

// Exact sampler for the outcome distribution: rejection against a proposal
// concentrated near the peaks c*M/r with an inverse-square falloff in the
// integer offset u from the nearest peak. Dominance follows from
// Pr(k) <= (2/r)/max(1,u^2), via sin(L*th) <= L*sin(th) at the peak and
// sin(th) >= 2*th/pi in the tails.
BigInt sample_outcome_rejection(const PeriodSamplingInstance& inst, Rng& rng) {
  const BigInt& M = inst.M;
  const BigInt& r = inst.r;
  const uint64_t r64 = to_u64(r);
  const BigInt U = M / (2 * r) + 2;  // max |u| for a canonical offset
  const double Ud = U.convert_to<double>();
  // Proposal: coin -> u = 0, else sign and |u| = floor(1/V) (density
  // 1/(j(j+1))), restart when |u| > U. Kept-mass normalizer W is exact.
  const double W = 0.5 + 0.5 * (Ud / (Ud + 1.0));
  const double rd = r.convert_to<double>();
  constexpr double kEnvelope = 16.0;

  for (int guard = 0; guard < 100000; ++guard) {
    const uint64_t c = rng.below(r64);
    BigInt u = 0;
    double rho;  // proposal weight of u before the 1/(r*W) factor
    if (rng.coin()) {
      rho = 0.5;
    } else {
      double v = rng.unit();
      while (v == 0.0) v = rng.unit();
      const double jd = std::floor(1.0 / v);
      if (jd > Ud) continue;  // restart
      const uint64_t j = static_cast<uint64_t>(jd);
      u = rng.coin() ? BigInt(j) : BigInt(-static_cast<int64_t>(0)) - j;
      rho = 0.25 / (static_cast<double>(j) * (static_cast<double>(j) + 1.0));
    }
    BigInt k = (closest_integer_to_peak(inst, c) + u) % M;
    if (k < 0) k += M;
    // Keep only the canonical path: c must be k's nearest peak.
    const BigInt c_near = ((2 * k * r + M) / (2 * M)) % r;
    if (c_near != c) continue;
    const double q = rho / (rd * W);
    const double p = fourier_outcome_probability(inst, k);
    const double ratio = p / (kEnvelope * q);
    if (ratio > 1.0 + 1e-9)
      throw SubroutineFailure("sampling envelope violated");
    if (rng.unit() < ratio) return k;
  }
  throw SubroutineFailure("rejection sampler failed to accept");
}

// Cached statevector outcome distribution for the most recent instance.
const std::vector<double>& statevector_distribution(
    const PeriodSamplingInstance& inst) {
  struct CacheEntry {
    BigInt M, t, r, x0;
    std::vector<double> probs;
  };
  thread_local CacheEntry cache;
  if (cache.M == inst.M && cache.t == inst.t && cache.r == inst.r &&
      cache.x0 == inst.x0 && !cache.probs.empty())
    return cache.probs;

  const uint64_t M = to_u64(inst.M);
  const uint64_t L = to_u64(inst.support_count());
  const uint64_t x0 = to_u64(inst.x0);
  const uint64_t r = to_u64(inst.r);
  std::vector<kern::cd> amps(M, kern::cd(0, 0));
  const double amp = 1.0 / std::sqrt(static_cast<double>(L));
  for (uint64_t j = 0; j < L; ++j) amps[(x0 + j * r) % M] = amp;
  kern::fft(amps.data(), M, false);
  std::vector<double> probs(M);
  kern::mag2(amps.data(), probs.data(), M);
  const double inv_m = 1.0 / static_cast<double>(M);
  for (auto& p : probs) p *= inv_m;

  cache = CacheEntry{inst.M, inst.t, inst.r, inst.x0, std::move(probs)};
  return cache.probs;
}

}  // namespace

PeriodSample fourier_sample_period(const PeriodSamplingInstance& inst,
                                   SimMode mode, Rng& rng) {
  inst.validate();
  if (mode == SimMode::classical)
    throw ModeUnavailable("classical mode has no Fourier sampling step");

  // Second-register measurement lands in the tail with probability (t-1)/M,
  // leaving a useless computational basis state.
  if (inst.t > 1 && rng.below_big(inst.M) < inst.t - 1)
    return {true, BigInt(0)};

  if (mode == SimMode::statevector) {
    if (inst.M > kStatevectorMaxDim)
      throw ModeUnavailable("statevector mode limited to M <= 2^22");
    if (!is_pow2(inst.M))
      throw ModeUnavailable("statevector mode requires power-of-two M");
    const auto& probs = statevector_distribution(inst);
    double u = rng.unit();
    for (size_t k = 0; k < probs.size(); ++k) {
      u -= probs[k];
      if (u < 0) return {false, BigInt(k)};
    }
    return {false, BigInt(probs.size() - 1)};
  }

  return {false, sample_outcome_rejection(inst, rng)};
}

// ---------------------------------------------------------------------------
// Continued fractions

std::optional<BigInt> recover_period(
    const std::vector<BigInt>& samples, const BigInt& M, const BigInt& N,
    const std::function<bool(const BigInt&)>& validate) {
  if (samples.empty())
    throw InsufficientSamples("recover_period needs at least one sample");

  auto consistent = [&](const BigInt& d) {
    for (const BigInt& k : samples) {
      if (k == 0) continue;  // carries no period information
      BigInt s = (k * d) % M;
      BigInt res = std::min(s, BigInt(M - s));
      if (2 * res > d) return false;
    }
    return true;
  };

  std::vector<BigInt> candidates;
  for (const BigInt& k : samples) {
    if (k == 0) continue;
    // Convergent denominators of k/M via the Euclidean quotients.
    BigInt u = k % M, v = M;
    BigInt q_prev = 1, q_prev2 = 0;
    // First quotient a0 = floor(k/M) = 0 yields denominator 1.
    candidates.push_back(1);
    while (u != 0) {
      BigInt a = v / u;
      BigInt rem = v - a * u;
      BigInt q = a * q_prev + q_prev2;
      if (q > N) break;
      candidates.push_back(q);
      q_prev2 = q_prev;
      q_prev = q;
      v = u;
      u = rem;
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());

  for (const BigInt& d : candidates) {
    if (d < 1 || !consistent(d)) continue;
    if (!validate || validate(d)) return d;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Shor discrete log in the cycle group

namespace {

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

uint64_t gcd_u64(uint64_t a, uint64_t b) {
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

// Inverse of a mod m for gcd(a, m) = 1.
uint64_t invmod_u64(uint64_t a, uint64_t m) {
  int64_t t = 0, new_t = 1;
  int64_t r = static_cast<int64_t>(m), new_r = static_cast<int64_t>(a % m);
  while (new_r != 0) {
    const int64_t q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  if (t < 0) t += static_cast<int64_t>(m);
  return static_cast<uint64_t>(t);
}

// Baby-step giant-step for base^a = target in the cycle group; a in [0, r).
// `metered` selects black-box vs simulator-side products.
std::optional<uint64_t> bsgs_cycle_log(const Semigroup& h,
                                       const ElementCode& base,
                                       const ElementCode& target, uint64_t r,
                                       const ElementCode& identity,
                                       const ElementCode& base_inverse,
                                       bool metered) {
  auto mult = [&](const ElementCode& a, const ElementCode& b) {
    return metered ? h.product(a, b) : h.product_unmetered(a, b);
  };
  auto power = [&](const ElementCode& g, uint64_t e) {
    return metered ? pow(h, g, BigInt(e)) : pow_unmetered(h, g, BigInt(e));
  };
  const uint64_t m =
      static_cast<uint64_t>(std::ceil(std::sqrt(static_cast<double>(r))));
  std::unordered_map<ElementCode, uint64_t> baby;  // target*binv^j -> j
  ElementCode e = target;
  baby.emplace(e, 0);
  for (uint64_t j = 1; j < m; ++j) {
    e = mult(e, base_inverse);
    baby.emplace(e, j);
  }
  const ElementCode giant = power(base, m);
  ElementCode cur = identity;
  for (uint64_t i = 0; i * m <= r + m; ++i) {
    if (auto it = baby.find(cur); it != baby.end()) {
      const uint64_t a = (i * m + it->second) % r;
      return a;
    }
    cur = mult(cur, giant);
  }
  return std::nullopt;
}

}  // namespace

uint64_t shor_dlog_cyclic(const Semigroup& h, const ElementCode& base,
                          const ElementCode& target, uint64_t r,
                          const ElementCode& identity,
                          const ElementCode& base_inverse, SimMode mode,
                          Rng& rng, QueryAccounting accounting) {
  if (r == 0) throw MalformedSpec("group order must be positive");
  auto verified = [&](uint64_t a) {
    return pow(h, base, BigInt(a)) == target;
  };
  if (target == identity) {
    if (!verified(r)) throw NotInGroup("claimed identity does not verify");
    return r;
  }
  if (mode == SimMode::classical) {
    const auto a =
        bsgs_cycle_log(h, base, target, r, identity, base_inverse, true);
    if (!a || *a == 0 || !verified(*a))
      throw NotInGroup("target is not a power of the base");
    return *a;
  }

  // Simulator side learns the answer (unmetered); the algorithm side then
  // consumes annihilator samples (c, d) with c + d*a = 0 (mod r) exactly as
  // Fourier sampling of the hiding function would produce them.
  const auto truth =
      bsgs_cycle_log(h, base, target, r, identity, base_inverse, false);
  if (!truth) throw NotInGroup("target is not in the cycle group");
  const uint64_t a_true = *truth;

  const uint64_t charge =
      accounting == QueryAccounting::measured
          ? 4 * static_cast<uint64_t>(bit_length(BigInt(r))) + 4
          : 0;

  std::optional<uint64_t> a;
  for (int tries = 0; tries < 4096 && !a; ++tries) {
    uint64_t c, d;
    if (mode == SimMode::statevector) {
      if (r > (uint64_t(1) << 10))
        throw ModeUnavailable("statevector discrete log limited to r <= 2^10");
      // Double-register Fourier sampling of a uniformly random coset of the
      // hidden subgroup <(1, a)>.
      const uint64_t a0 = rng.below(r), b0 = rng.below(r);
      std::vector<kern::cd> grid(r * r, kern::cd(0, 0));
      const double amp = 1.0 / std::sqrt(static_cast<double>(r));
      for (uint64_t i = 0; i < r; ++i)
        grid[((a0 + i) % r) * r + (b0 + mulmod_u64(i, a_true, r)) % r] =
            amp;
      for (uint64_t row = 0; row < r; ++row)
        kern::dft(grid.data() + row * r, r, false);
      std::vector<kern::cd> col(r);
      for (uint64_t j = 0; j < r; ++j) {
        for (uint64_t row = 0; row < r; ++row) col[row] = grid[row * r + j];
        kern::dft(col.data(), r, false);
        for (uint64_t row = 0; row < r; ++row) grid[row * r + j] = col[row];
      }
      std::vector<double> probs(r * r);
      kern::mag2(grid.data(), probs.data(), r * r);
      const double total = kern::sum(probs.data(), probs.size());
      double pick = rng.unit() * total;
      size_t idx = probs.size() - 1;
      for (size_t i = 0; i < probs.size(); ++i) {
        pick -= probs[i];
        if (pick < 0) {
          idx = i;
          break;
        }
      }
      c = static_cast<uint64_t>(idx / r);
      d = static_cast<uint64_t>(idx % r);
    } else {
      d = rng.below(r);
      c = (r - mulmod_u64(d, a_true, r)) % r;
    }
    h.meter().charged_queries += charge;
    if (gcd_u64(d, r) != 1) continue;  // d must be invertible mod r
    a = mulmod_u64((r - c) % r, invmod_u64(d, r), r);
  }
  if (!a) throw SubroutineFailure("annihilator sampling failed to converge");
  const uint64_t result = *a == 0 ? r : *a;
  if (!verified(result)) throw NotInGroup("discrete log verification failed");
  return result;
}

// ---------------------------------------------------------------------------
// Dihedral sieve

DihedralSim::DihedralSim(uint64_t order, uint64_t shift, QueryMeter* meter,
                         uint64_t charge_per_token)
    : order_(order), shift_(shift % order), meter_(meter),
      charge_(charge_per_token) {
  if (order_ == 0) throw MalformedSpec("dihedral order must be positive");
}

SieveToken DihedralSim::draw(Rng& rng) {
  ++drawn_;
  if (meter_) meter_->charged_queries += charge_;
  const uint64_t label = rng.below(order_);
  return SieveToken(label, mulmod_u64(label, shift_, order_));
}

SieveToken DihedralSim::combine(const SieveToken& a, const SieveToken& b,
                                SimMode mode, Rng& rng) {
  bool take_sum;
  if (mode == SimMode::statevector) {
    // Joint two-qubit state (1/2)[1, w^p2, w^p1, w^(p1+p2)], CNOT, then a
    // computational measurement of the second qubit. Both outcomes carry
    // probability exactly 1/2 regardless of the hidden phases.
    const double w1 = 2 * pi * static_cast<double>(a.phase_) / order_;
    const double w2 = 2 * pi * static_cast<double>(b.phase_) / order_;
    const kern::cd amps[4] = {
        kern::cd(0.5, 0), 0.5 * std::polar(1.0, w2),
        0.5 * std::polar(1.0, w1 + w2), 0.5 * std::polar(1.0, w1)};
    const double p0 = std::norm(amps[0]) + std::norm(amps[2]);
    take_sum = rng.unit() < p0;
  } else {
    take_sum = rng.coin();
  }
  if (take_sum)
    return SieveToken((a.label_ + b.label_) % order_,
                      (a.phase_ + b.phase_) % order_);
  return SieveToken((a.label_ + order_ - b.label_) % order_,
                    (a.phase_ + order_ - b.phase_) % order_);
}

void DihedralSim::apply_phase_rotation(SieveToken& t, uint64_t amount) const {
  t.phase_ = (t.phase_ + order_ - amount % order_) % order_;
}

int DihedralSim::measure_phase_bit(const SieveToken& t, SimMode mode,
                                   Rng& rng) const {
  double p1;
  if (mode == SimMode::statevector) {
    const kern::cd a0(std::sqrt(0.5), 0);
    const kern::cd a1 = std::sqrt(0.5) *
        std::polar(1.0, 2 * pi * static_cast<double>(t.phase_) / order_);
    p1 = std::norm((a0 - a1) / std::sqrt(2.0));
  } else {
    const double s =
        std::sin(pi * static_cast<double>(t.phase_) / static_cast<double>(order_));
    p1 = s * s;
  }
  return rng.unit() < p1 ? 1 : 0;
}

uint64_t default_token_budget(uint64_t order) {
  uint64_t c = 0;
  while ((uint64_t(1) << c) < order) ++c;
  const uint64_t shift =
      static_cast<uint64_t>(std::ceil(2.0 * std::sqrt(static_cast<double>(std::max<uint64_t>(c, 1))))) + 4;
  return uint64_t(1) << shift;
}

namespace {

int valuation(uint64_t k) { return __builtin_ctzll(k); }

struct SievePools {
  std::vector<std::vector<SieveToken>> by_val;

  explicit SievePools(int c) : by_val(c) {}

  void file(const SieveToken& t, int c) {
    if (t.label() == 0) return;  // trivial phase, useless
    const int v = valuation(t.label());
    if (v < c) by_val[v].push_back(t);
  }
};

// One pass of pairwise combines aimed at valuation `target`. Tokens at
// valuation v are bucketed on the next min(stage_bits, target-v)-1 label
// bits; a combined pair gains at least one cleared bit (sum branch) or
// clears the whole window (difference branch).
bool cascade_pass(SievePools& pools, int c, int target, int stage_bits,
                  DihedralSim& sim, SimMode mode, Rng& rng) {
  bool progressed = false;
  for (int v = 0; v < target; ++v) {
    auto& pool = pools.by_val[v];
    if (pool.size() < 2) continue;
    const int w = std::min<int>(stage_bits, target - v);
    std::map<uint64_t, std::vector<SieveToken>> buckets;
    const uint64_t mask = (w >= 2) ? ((uint64_t(1) << (w - 1)) - 1) : 0;
    for (const auto& t : pool)
      buckets[(t.label() >> (v + 1)) & mask].push_back(t);
    pool.clear();
    for (auto& [key, toks] : buckets) {
      // Pair extremes after sorting so equal labels meet only when
      // unavoidable (equal pairs lose the difference branch to label 0).
      std::sort(toks.begin(), toks.end(),
                [](const SieveToken& a, const SieveToken& b) {
                  return a.label() < b.label();
                });
      size_t lo = 0, hi = toks.size();
      while (hi - lo >= 2) {
        const SieveToken out = sim.combine(toks[lo], toks[hi - 1], mode, rng);
        ++lo;
        --hi;
        pools.file(out, c);
        progressed = true;
      }
      if (hi > lo) pool.push_back(toks[lo]);
    }
  }
  return progressed;
}

}  // namespace

uint64_t sieve_solve_shift(DihedralSim& sim, uint64_t order, SimMode mode,
                           Rng& rng,
                           const std::function<bool(uint64_t)>& classical_test,
                           const SieveOptions& opts) {
  if (order != sim.order()) throw MalformedSpec("order mismatch with source");
  if (order == 1) return 0;

  if (mode == SimMode::classical) {
    if (!classical_test)
      throw MalformedSpec("classical sieve mode needs a shift test");
    for (uint64_t l = 0; l < order; ++l)
      if (classical_test(l)) return l;
    throw NoSolution("no shift satisfies the classical test");
  }

  if ((order & (order - 1)) != 0)
    throw ModeUnavailable("quantum sieve modes require power-of-two order");

  int c = 0;
  while ((uint64_t(1) << c) < order) ++c;
  const uint64_t budget =
      opts.token_budget ? opts.token_budget : default_token_budget(order);
  const int stage_bits =
      std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(c)))));
  uint64_t batch =
      opts.first_batch
          ? opts.first_batch
          : std::max<uint64_t>(
                8, static_cast<uint64_t>(std::ceil(
                       6.0 * std::pow(2.0, 1.1 * std::sqrt(static_cast<double>(c))))));

  SievePools pools(c);
  auto refill = [&](uint64_t want) {
    uint64_t room = budget > sim.tokens_drawn() ? budget - sim.tokens_drawn() : 0;
    if (room == 0)
      throw TokenBudgetExhausted("token budget exhausted before all bits recovered");
    const uint64_t n = std::min(want, room);
    for (uint64_t i = 0; i < n; ++i) pools.file(sim.draw(rng), c);
  };

  uint64_t shift = 0;
  for (int j = 0; j < c; ++j) {
    const int target = c - 1 - j;
    while (pools.by_val[target].empty()) {
      if (!cascade_pass(pools, c, target, stage_bits, sim, mode, rng)) {
        refill(batch);
        batch = std::max<uint64_t>(8, batch / 2);
      }
    }
    SieveToken tok = pools.by_val[target].back();
    pools.by_val[target].pop_back();
    // Remove the known contribution of the recovered low bits; the residual
    // phase is then 0 or order/2 and the +/- measurement is deterministic.
    sim.apply_phase_rotation(tok, mulmod_u64(tok.label(), shift, order));
    const int bit = sim.measure_phase_bit(tok, mode, rng);
    shift |= static_cast<uint64_t>(bit) << j;
  }
  return shift;
}

}  // namespace sgdlog
