#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sgdlog/bigint.hpp"
#include "sgdlog/element_code.hpp"
#include "sgdlog/errors.hpp"
#include "sgdlog/meter.hpp"
#include "sgdlog/rng.hpp"
#include "sgdlog/semigroup.hpp"

namespace sgdlog {

// Simulation fidelity for the quantum subroutines.
//   statevector: build the amplitude vector and transform it (small dims).
//   sampling:    draw outcomes from the exact closed-form distributions.
//   classical:   no quantum simulation; classical fallbacks throughout.
enum class SimMode { statevector, sampling, classical };

SimMode parse_sim_mode(const std::string& s);
std::string to_string(SimMode mode);

// How simulated quantum subroutines bill the meter's charged_queries.
//   measured:        cost the quantum circuit would incur per invocation
//                    (state preparations at ~2 log M products each).
//   query_efficient: flat polylog bill per dihedral solve; token draws free.
//   unit:            subroutines bill nothing; the caller (Grover layer)
//                    charges one query per oracle evaluation.
enum class QueryAccounting { measured, query_efficient, unit };

QueryAccounting parse_accounting(const std::string& s);
std::string to_string(QueryAccounting a);

inline constexpr size_t kStatevectorMaxDim = size_t(1) << 22;

// ---------------------------------------------------------------------------
// Period finding over Z_M.

// The post-measurement state of one period-finding shot: an r-periodic
// superposition over {x0, x0+r, ...} inside {1..M}, destined for the Fourier
// transform. x0 in [t, t+r); M > N^2 + N with N >= t + r.
struct PeriodSamplingInstance {
  BigInt M;
  BigInt t;
  BigInt r;
  BigInt x0;

  // Number of support points L = floor((M - x0)/r) + 1.
  BigInt support_count() const;
  void validate() const;  // throws MalformedSpec on invariant violation
};

struct PeriodSample {
  bool tail = false;  // second register landed in the tail; k meaningless
  BigInt k;
};

// Exact outcome distribution Pr(k) = sin^2(pi k r L / M) / (L M sin^2(pi k r / M)),
// with the degenerate k r = 0 (mod M) term evaluated as L/M.
double fourier_outcome_probability(const PeriodSamplingInstance& inst,
                                   const BigInt& k);

// Dense table of Pr(k) for k in [0, M); requires M <= 2^26.
std::vector<double> fourier_outcome_table(const PeriodSamplingInstance& inst);

// The integer closest to c*M/r (ties rounded up), i.e. the c-th peak.
BigInt closest_integer_to_peak(const PeriodSamplingInstance& inst, uint64_t c);

// Total mass on the r closest integers to the multiples of M/r.
double closest_peak_mass(const PeriodSamplingInstance& inst);

// One period-finding shot. Emits a tail event with probability (t-1)/M,
// otherwise an outcome k drawn exactly from Pr(k).
PeriodSample fourier_sample_period(const PeriodSamplingInstance& inst,
                                   SimMode mode, Rng& rng);

// ---------------------------------------------------------------------------
// Classical postprocessing: continued fractions.

// Expands each sample k/M, collects convergent denominators <= N that are
// consistent with every nonzero sample (k*d within d/2 of a multiple of M),
// and returns the least candidate accepted by `validate` (every candidate, in
// ascending order, is offered). Pass an empty function to accept the least
// consistent candidate outright. Throws InsufficientSamples on empty input;
// returns nullopt when no candidate validates.
std::optional<BigInt> recover_period(
    const std::vector<BigInt>& samples, const BigInt& M, const BigInt& N,
    const std::function<bool(const BigInt&)>& validate = {});

// ---------------------------------------------------------------------------
// Discrete log in a cyclic group of known order r (the cycle of g).

// Returns the least positive a in [1, r] with base^a = target (the identity
// maps to r). `base_inverse * base = identity` is required; the hiding
// function of the sampling path is f(a,b) = target^a * base_inverse^b.
// Throws NotInGroup when no exponent verifies.
uint64_t shor_dlog_cyclic(const Semigroup& h, const ElementCode& base,
                          const ElementCode& target, uint64_t r,
                          const ElementCode& identity,
                          const ElementCode& base_inverse, SimMode mode,
                          Rng& rng,
                          QueryAccounting accounting = QueryAccounting::measured);

// ---------------------------------------------------------------------------
// Dihedral hidden-shift sieve.

class DihedralSim;

// One dihedral coset-state surrogate. The algorithm side may read only the
// label; the phase numerator is simulator state (the qubit is
// |0> + exp(2 pi i phase/order)|1>, phase = label * shift for fresh tokens).
class SieveToken {
 public:
  uint64_t label() const { return label_; }

 private:
  friend class DihedralSim;
  SieveToken(uint64_t label, uint64_t phase) : label_(label), phase_(phase) {}
  uint64_t label_;
  uint64_t phase_;
};

// Simulator for tokens hiding a fixed shift l in Z_order. Measurement
// outcomes are sampled from the exact quantum distribution determined by
// (label, l, order); combine branches are exactly fair coins independent
// of l. Token draws bill charged_queries at `charge_per_token` (0 under
// query-efficient/unit accounting).
class DihedralSim {
 public:
  DihedralSim(uint64_t order, uint64_t shift, QueryMeter* meter,
              uint64_t charge_per_token);

  uint64_t order() const { return order_; }
  uint64_t tokens_drawn() const { return drawn_; }

  SieveToken draw(Rng& rng);

  // Consumes both inputs; yields label k1+k2 or k1-k2 (mod order), each with
  // probability exactly 1/2.
  SieveToken combine(const SieveToken& a, const SieveToken& b, SimMode mode,
                     Rng& rng);

  // Known unitary exp(-2 pi i amount/order) on the |1> component.
  void apply_phase_rotation(SieveToken& t, uint64_t amount) const;

  // Measurement in the +/- basis; Pr(1) = sin^2(pi phase / order).
  int measure_phase_bit(const SieveToken& t, SimMode mode, Rng& rng) const;

 private:
  uint64_t order_;
  uint64_t shift_;
  QueryMeter* meter_;
  uint64_t charge_;
  uint64_t drawn_ = 0;
};

struct SieveOptions {
  uint64_t token_budget = 0;  // 0: default 2^(ceil(2 sqrt(log2 order)) + 4)
  uint64_t first_batch = 0;   // 0: auto
};

uint64_t default_token_budget(uint64_t order);

// Recovers the hidden shift (order a power of two in statevector/sampling
// modes). CLASSICAL mode scans l in [0, order) with `classical_test`.
// Throws TokenBudgetExhausted when the budget runs out mid-recursion.
uint64_t sieve_solve_shift(DihedralSim& source, uint64_t order, SimMode mode,
                           Rng& rng,
                           const std::function<bool(uint64_t)>& classical_test = {},
                           const SieveOptions& opts = {});

}  // namespace sgdlog
