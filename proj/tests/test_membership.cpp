#include <doctest.h>

#include <algorithm>
#include <set>
#include <unordered_set>

#include "sgdlog/membership.hpp"

using namespace sgdlog;

namespace {

LowerBoundSemigroup make_lb(uint32_t n, uint32_t k, uint64_t pi_seed = 0) {
  LowerBoundSemigroupSpec spec;
  spec.n = n;
  spec.k = k;
  if (pi_seed) {
    LowerBoundSemigroup probe(spec);
    Rng rng(pi_seed);
    spec.pi = random_sigma_permutation(probe.sigma_size(), rng);
  }
  return LowerBoundSemigroup(spec);
}

}  // namespace

TEST_SUITE("membership") {

TEST_CASE("smallest lower-bound instance: n=1, k=2") {
  auto h = make_lb(1, 2);
  const auto gens = h.generators();
  REQUIRE(gens.size() == 2);
  const auto elements = h.all_elements();
  CHECK(elements.size() == 3);  // g1, g2, 0
  CHECK(h.is_zero(h.product_unmetered(gens[0], gens[0])));
}

TEST_CASE("lower-bound size formula and exhaustive laws for n=2, k=2") {
  auto h = make_lb(2, 2, 99);
  const auto elements = h.all_elements();
  CHECK(elements.size() == 6);
  CHECK(h.order_bound() == 6);
  for (uint64_t n = 1; n <= 7; ++n) {
    auto g = make_lb(static_cast<uint32_t>(n), 2);
    CHECK(g.order_bound() == n * (n + 3) / 2 + 1);
  }
  for (const auto& a : elements)
    for (const auto& b : elements) {
      CHECK(h.product_unmetered(a, b) == h.product_unmetered(b, a));
      for (const auto& c : elements)
        CHECK(h.product_unmetered(h.product_unmetered(a, b), c) ==
              h.product_unmetered(a, h.product_unmetered(b, c)));
    }
}

TEST_CASE("encoding is a bijection onto the stated code space") {
  auto h = make_lb(4, 2, 5);
  const auto elements = h.all_elements();
  std::unordered_set<ElementCode> codes(elements.begin(), elements.end());
  CHECK(codes.size() == elements.size());
  // Boundary codes sweep Sigma exactly once.
  std::set<size_t> boundary_ranks;
  for (const auto& e : elements) {
    if (h.is_zero(e)) continue;
    if (static_cast<uint8_t>(e.bytes[0]) == 2) {
      std::vector<uint32_t> image;
      image.push_back(read_u32_be(e.bytes, 1));
      boundary_ranks.insert(h.sigma_rank(image));
    }
  }
  CHECK(boundary_ranks.size() == h.sigma_size());
}

TEST_CASE("pi is consulted at most once per product, only on the boundary") {
  auto h = make_lb(4, 2, 6);
  h.meter().reset();
  const ElementCode a = h.element({1, 1});
  const ElementCode b = h.element({1, 0});
  h.product(a, b);  // sum 3 < n: interior
  CHECK(h.meter().permutation_queries == 0);
  h.product(a, h.element({2, 0}));  // sum 4 = n: boundary
  CHECK(h.meter().permutation_queries == 1);
  h.product(h.element({2, 2}), b);  // boundary operand: truncates, no pi
  CHECK(h.meter().permutation_queries == 1);
  CHECK(h.meter().product_queries == 3);
}

TEST_CASE("malformed pi is rejected") {
  LowerBoundSemigroupSpec spec;
  spec.n = 2;
  spec.k = 2;
  spec.pi = {0, 1};  // |Sigma| = 3 for n=2,k=2
  CHECK_THROWS_AS(LowerBoundSemigroup{spec}, MalformedSpec);
  spec.pi = {0, 1, 1};
  CHECK_THROWS_AS(LowerBoundSemigroup{spec}, MalformedSpec);
}

TEST_CASE("bounded tuple space enumerates exactly the budgeted tuples") {
  for (const auto& [slots, budget] : std::vector<std::pair<size_t, uint64_t>>{
           {1, 10000}, {2, 2000}, {3, 120}, {4, 48}}) {
    const BoundedTupleSpace space(slots, budget);
    std::set<std::vector<uint64_t>> got;
    for (size_t i = 0; i < space.size(); ++i) got.insert(space.tuple(i));
    CHECK(got.size() == space.size());

    // Independent filter of the full grid.
    uint64_t count = 0;
    std::vector<uint64_t> cur(slots, 0);
    auto rec = [&](auto&& self, size_t i) -> void {
      if (i == slots) {
        unsigned __int128 prod = 1;
        for (uint64_t v : cur) prod *= v + 1;
        if (prod <= budget) {
          ++count;
          CHECK(got.count(cur) == 1);
        }
        return;
      }
      for (uint64_t v = 0; v < budget; ++v) {
        cur[i] = v;
        unsigned __int128 prod = 1;
        for (size_t s = 0; s <= i; ++s) prod *= cur[s] + 1;
        if (prod > budget) break;
        self(self, i + 1);
      }
      cur[i] = 0;
    };
    rec(rec, 0);
    CHECK(count == space.size());
  }
}

TEST_CASE("per-coordinate caps restrict the space") {
  const BoundedTupleSpace capped(2, 100, {2, 1000});
  for (size_t i = 0; i < capped.size(); ++i)
    CHECK(capped.tuple(i)[0] <= 2);
  const BoundedTupleSpace uncapped(2, 100);
  CHECK(capped.size() < uncapped.size());
}

TEST_CASE("lex-first oracle on the spec examples") {
  auto h = make_lb(3, 2, 11);
  const auto gens = h.generators();
  const auto w1 = lex_first_decomposition_oracle(h, gens[0], gens);
  REQUIRE(w1.has_value());
  CHECK(w1->a == std::vector<BigInt>{1, 0});

  const ElementCode x = h.element({1, 2});
  const auto w2 = lex_first_decomposition_oracle(h, x, gens);
  REQUIRE(w2.has_value());
  CHECK(w2->a == std::vector<BigInt>{1, 2});
}

TEST_CASE("lex-first witness satisfies the product bound") {
  Rng rng(41);
  for (int it = 0; it < 20; ++it) {
    auto h = make_lb(1 + static_cast<uint32_t>(rng.below(6)),
                     2 + static_cast<uint32_t>(rng.below(2)),
                     1 + rng.next_u64() % 1000);
    const auto gens = h.generators();
    const auto elements = h.all_elements();
    const BigInt S = elements.size();
    for (const auto& x : elements) {
      const auto w = lex_first_decomposition_oracle(h, x, gens);
      REQUIRE(w.has_value());
      BigInt prod = 1;
      for (const auto& a : w->a) prod *= a + 1;
      CHECK(prod <= S);
      // Cheap coordinate: some j with the off-j product under |S|^((k-1)/k).
      const size_t k = w->a.size();
      double best = 1e300;
      for (size_t j = 0; j < k; ++j) {
        double p = 1;
        for (size_t i = 0; i < k; ++i)
          if (i != j) p *= (w->a[i] + 1).convert_to<double>();
        best = std::min(best, p);
      }
      const double budget = std::pow(S.convert_to<double>(),
                                     (double(k) - 1.0) / double(k));
      CHECK(best <= budget + 1e-9);
    }
  }
}

TEST_CASE("oracle returns nothing for non-members") {
  TransformationSemigroupSpec spec;
  spec.ground_set_size = 5;
  spec.generators = {{2, 3, 1, 4, 5}, {1, 2, 3, 5, 4}};  // disjoint, commute
  TransformationSemigroup h(spec);
  const ElementCode foreign = h.element({1, 1, 1, 1, 1});
  CHECK(!lex_first_decomposition_oracle(h, foreign, h.generators()).has_value());
}

TEST_CASE("constructive membership on the spec examples") {
  Rng rng(42);
  {
    auto h = make_lb(3, 2, 12);
    const auto gens = h.generators();
    const auto res =
        constructive_membership(h, gens[1], gens, SimMode::classical, rng);
    CHECK(res.witness.a == std::vector<BigInt>{0, 1});
  }
  {
    auto h = make_lb(4, 2, 13);
    const ElementCode x = h.element({2, 1});
    const auto res = constructive_membership(h, x, h.generators(),
                                             SimMode::classical, rng);
    CHECK(res.witness.a == std::vector<BigInt>{2, 1});
    CHECK(res.grover_oracle_calls > 0);
  }
}

TEST_CASE("membership witnesses always multiply back to x") {
  Rng rng(43);
  for (int it = 0; it < 10; ++it) {
    auto h = make_lb(2 + static_cast<uint32_t>(rng.below(5)), 2,
                     1 + rng.next_u64() % 1000);
    const auto gens = h.generators();
    const auto elements = h.all_elements();
    const ElementCode& x = elements[rng.below(elements.size() - 1)];  // skip 0
    const auto res =
        constructive_membership(h, x, gens, SimMode::classical, rng);
    std::optional<ElementCode> prod;
    for (size_t i = 0; i < gens.size(); ++i) {
      if (res.witness.a[i] == 0) continue;
      const ElementCode p = pow_unmetered(h, gens[i], res.witness.a[i]);
      prod = prod ? h.product_unmetered(*prod, p) : p;
    }
    REQUIRE(prod.has_value());
    CHECK(*prod == x);
  }
}

TEST_CASE("non-members raise NotMember") {
  Rng rng(44);
  TransformationSemigroupSpec spec;
  spec.ground_set_size = 5;
  spec.generators = {{2, 3, 1, 4, 5}, {1, 2, 3, 5, 4}};
  TransformationSemigroup h(spec);
  const ElementCode foreign = h.element({1, 1, 1, 1, 1});
  CHECK_THROWS_AS(constructive_membership(h, foreign, h.generators(),
                                          SimMode::classical, rng),
                  NotMember);
}

TEST_CASE("statevector mode runs amplitude-level search") {
  Rng rng(45);
  auto h = make_lb(3, 2, 14);
  const ElementCode x = h.element({1, 1});
  const auto res = constructive_membership(h, x, h.generators(),
                                           SimMode::statevector, rng);
  CHECK(res.grover_oracle_calls > 0);
  std::optional<ElementCode> prod;
  const auto gens = h.generators();
  for (size_t i = 0; i < gens.size(); ++i) {
    if (res.witness.a[i] == 0) continue;
    const ElementCode p = pow_unmetered(h, gens[i], res.witness.a[i]);
    prod = prod ? h.product_unmetered(*prod, p) : p;
  }
  CHECK(*prod == x);
}

TEST_CASE("permutation inversion on an exhaustive small instance") {
  Rng rng(46);
  auto h = make_lb(4, 2, 77);
  const auto gens = h.generators();
  for (size_t rank = 0; rank < h.sigma_size(); ++rank) {
    const ElementCode x = h.element_for_sigma_code(rank);
    const auto res =
        constructive_membership(h, x, gens, SimMode::classical, rng);
    const auto& expect = h.sigma_tuple(h.pi_inverse_of(rank));
    REQUIRE(res.witness.a.size() == 2);
    CHECK(res.witness.a[0] == expect[0]);
  }
}

TEST_CASE("permutation inversion experiment reports successes") {
  Rng rng(47);
  const auto report =
      permutation_inversion_experiment(4, 2, 8, rng, SimMode::classical);
  CHECK(report.trials.size() == 8);
  for (const auto& t : report.trials) {
    CHECK(t.success);
    CHECK(t.queries.charged_queries > 0);
  }
  CHECK(report.expected_query_exponent == doctest::Approx(0.25));
}

}  // TEST_SUITE
