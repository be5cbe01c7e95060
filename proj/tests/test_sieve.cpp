#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "sgdlog/oracle_sim.hpp"

using namespace sgdlog;

TEST_SUITE("sieve") {

TEST_CASE("label r/2 measures the parity of the shift deterministically") {
  for (SimMode mode : {SimMode::sampling, SimMode::statevector}) {
    Rng rng(1);
    DihedralSim odd(2, 1, nullptr, 0);
    DihedralSim even(2, 0, nullptr, 0);
    for (int i = 0; i < 32; ++i) {
      SieveToken t1 = odd.draw(rng);
      while (t1.label() != 1) t1 = odd.draw(rng);
      CHECK(odd.measure_phase_bit(t1, mode, rng) == 1);
      SieveToken t0 = even.draw(rng);
      while (t0.label() != 1) t0 = even.draw(rng);
      CHECK(even.measure_phase_bit(t0, mode, rng) == 0);
    }
  }
}

TEST_CASE("smallest dihedral case: order 2, shift 1") {
  Rng rng(2);
  DihedralSim sim(2, 1, nullptr, 0);
  CHECK(sieve_solve_shift(sim, 2, SimMode::sampling, rng) == 1);
}

TEST_CASE("order 8, shift 5 (bits 1,0,1 from the least significant up)") {
  for (SimMode mode : {SimMode::sampling, SimMode::statevector}) {
    Rng rng(3);
    DihedralSim sim(8, 5, nullptr, 0);
    CHECK(sieve_solve_shift(sim, 8, mode, rng) == 5);
  }
}

TEST_CASE("combine outcomes are fair coins independent of the shift") {
  for (uint64_t shift : {0ull, 3ull, 13ull}) {
    for (SimMode mode : {SimMode::sampling, SimMode::statevector}) {
      Rng rng(4 + shift);
      DihedralSim sim(16, shift, nullptr, 0);
      int sums = 0, total = 0;
      while (total < 10000) {
        const SieveToken a = sim.draw(rng);
        const SieveToken b = sim.draw(rng);
        const uint64_t sum_label = (a.label() + b.label()) % 16;
        const uint64_t diff_label = (a.label() + 16 - b.label()) % 16;
        if (sum_label == diff_label) continue;  // branches indistinguishable
        const SieveToken c = sim.combine(a, b, mode, rng);
        ++total;
        if (c.label() == sum_label) ++sums;
      }
      CHECK(std::abs(sums / double(total) - 0.5) <= 0.02);
    }
  }
}

TEST_CASE("token budget exhaustion is reported") {
  Rng rng(5);
  DihedralSim sim(1 << 10, 321, nullptr, 0);
  SieveOptions opts;
  opts.token_budget = 4;  // far too small for ten bits
  CHECK_THROWS_AS(
      sieve_solve_shift(sim, 1 << 10, SimMode::sampling, rng, {}, opts),
      TokenBudgetExhausted);
}

TEST_CASE("classical mode scans shifts in order") {
  Rng rng(6);
  DihedralSim sim(12, 0, nullptr, 0);
  uint64_t calls = 0;
  const auto test = [&](uint64_t l) {
    CHECK(l == calls);
    ++calls;
    return l == 7;
  };
  CHECK(sieve_solve_shift(sim, 12, SimMode::classical, rng, test) == 7);
  CHECK(calls == 8);
}

TEST_CASE("quantum sieve requires a power-of-two order") {
  Rng rng(7);
  DihedralSim sim(12, 3, nullptr, 0);
  CHECK_THROWS_AS(sieve_solve_shift(sim, 12, SimMode::sampling, rng),
                  ModeUnavailable);
}

TEST_CASE("random shifts across sizes") {
  int failures = 0;
  int wrong = 0;
  for (int c = 1; c <= 10; ++c) {
    const uint64_t order = uint64_t(1) << c;
    for (int rep = 0; rep < 10; ++rep) {
      Rng rng(100 * c + rep);
      const uint64_t shift = rng.below(order);
      DihedralSim sim(order, shift, nullptr, 0);
      try {
        if (sieve_solve_shift(sim, order, SimMode::sampling, rng) != shift)
          ++wrong;
      } catch (const TokenBudgetExhausted&) {
        ++failures;
      }
    }
  }
  CHECK(wrong == 0);
  CHECK(failures <= 5);
}

TEST_CASE("token draws bill the meter at the configured rate") {
  Rng rng(8);
  QueryMeter meter;
  DihedralSim sim(8, 3, &meter, 11);
  sim.draw(rng);
  sim.draw(rng);
  CHECK(meter.charged_queries == 22);
  CHECK(sim.tokens_drawn() == 2);
}

TEST_CASE("median token usage grows with the order") {
  auto median_tokens = [](int c) {
    std::vector<uint64_t> used;
    for (int rep = 0; rep < 15; ++rep) {
      Rng rng(1000 * c + rep);
      const uint64_t order = uint64_t(1) << c;
      DihedralSim sim(order, rng.below(order), nullptr, 0);
      try {
        sieve_solve_shift(sim, order, SimMode::sampling, rng);
      } catch (const TokenBudgetExhausted&) {
      }
      used.push_back(sim.tokens_drawn());
    }
    std::sort(used.begin(), used.end());
    return used[used.size() / 2];
  };
  const auto m4 = median_tokens(4);
  const auto m8 = median_tokens(8);
  const auto m12 = median_tokens(12);
  CHECK(m4 <= m8);
  CHECK(m8 <= m12);
}

}  // TEST_SUITE
