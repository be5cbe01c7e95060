#include <doctest.h>

#include <optional>
#include <unordered_set>
#include <vector>

#include "sgdlog/dlog.hpp"
#include "sgdlog/semigroup.hpp"

using namespace sgdlog;

namespace {

// Brute-force least exponent via the power table; nullopt when x is not a
// power of g.
std::optional<uint64_t> brute_dlog(const Semigroup& h, const ElementCode& g,
                                   const ElementCode& x, uint64_t limit) {
  ElementCode e = g;
  if (e == x) return 1;
  for (uint64_t j = 2; j <= limit; ++j) {
    e = h.product_unmetered(e, g);
    if (e == x) return j;
  }
  return std::nullopt;
}

TransformationSemigroup example_transformation() {
  TransformationSemigroupSpec spec;
  spec.ground_set_size = 4;
  spec.generators = {{2, 3, 4, 3}};
  return TransformationSemigroup(spec);
}

}  // namespace

TEST_SUITE("dlog") {

TEST_CASE("gamma distinguishes tail from cycle") {
  RhoSemigroup idem(RhoSemigroupSpec{1, 1});
  CHECK(gamma(idem, idem.generators()[0], 1, idem.generators()[0]));

  RhoSemigroup h(RhoSemigroupSpec{3, 4});
  const ElementCode g = h.generators()[0];
  CHECK(!gamma(h, g, 4, h.element(uint64_t(2))));
  CHECK(gamma(h, g, 4, h.element(uint64_t(3))));

  auto tf = example_transformation();
  const ElementCode f = tf.generators()[0];
  CHECK(!gamma(tf, f, 2, f));
  CHECK(gamma(tf, f, 2, pow_unmetered(tf, f, 2)));
}

TEST_CASE("find_rho across modes and families") {
  for (SimMode mode :
       {SimMode::classical, SimMode::sampling, SimMode::statevector}) {
    Rng rng(17);
    {
      RhoSemigroup h(RhoSemigroupSpec{1, 1});
      const auto rho = find_rho(h, h.generators()[0], mode, rng);
      CHECK(rho.t == 1);
      CHECK(rho.r == 1);
    }
    {
      RhoSemigroup h(RhoSemigroupSpec{7, 12});
      const auto rho = find_rho(h, h.generators()[0], mode, rng);
      CHECK(rho.t == 7);
      CHECK(rho.r == 12);
      CHECK(rho.N == 19);
    }
    {
      MatrixSemigroupSpec spec;
      spec.dimension = 1;
      spec.modulus = 7;
      spec.generators = {{3}};
      MatrixSemigroup h(spec);
      const auto rho = find_rho(h, h.generators()[0], mode, rng);
      CHECK(rho.t == 1);
      CHECK(rho.r == 6);
    }
  }
}

TEST_CASE("cycle view distinguished elements") {
  Rng rng(18);
  {
    RhoSemigroup h(RhoSemigroupSpec{1, 1});
    const ElementCode g = h.generators()[0];
    const auto view = cycle_view(h, g, find_rho(h, g, SimMode::classical, rng));
    CHECK(view.s == 0);
    CHECK(view.identity == g);
    CHECK(view.generator == g);
    CHECK(view.generator_inverse == g);
  }
  {
    RhoSemigroup h(RhoSemigroupSpec{3, 4});
    const ElementCode g = h.generators()[0];
    const auto view = cycle_view(h, g, find_rho(h, g, SimMode::classical, rng));
    CHECK(view.s == 1);
    CHECK(view.identity == h.element(uint64_t(4)));
    CHECK(view.generator == h.element(uint64_t(5)));
    CHECK(view.generator_inverse == h.element(uint64_t(7)));
    // identity fixes every cycle element
    for (uint64_t j = 3; j <= 6; ++j)
      CHECK(h.product_unmetered(h.element(j), view.identity) == h.element(j));
  }
  {
    auto h = example_transformation();
    const ElementCode f = h.generators()[0];
    const auto view = cycle_view(h, f, find_rho(h, f, SimMode::classical, rng));
    CHECK(view.s == 0);
    CHECK(view.identity == pow_unmetered(h, f, 2));
    CHECK(view.generator == pow_unmetered(h, f, 3));
    CHECK(view.generator_inverse == pow_unmetered(h, f, 3));
  }
}

TEST_CASE("cycle view rejects an inconsistent rho") {
  Rng rng(19);
  RhoSemigroup h(RhoSemigroupSpec{3, 4});
  RhoStructure wrong{BigInt(3), BigInt(3), BigInt(7)};
  CHECK_THROWS_AS(cycle_view(h, h.generators()[0], wrong), InconsistentRho);
}

TEST_CASE("semigroup_dlog spec examples") {
  for (SimMode mode : {SimMode::classical, SimMode::sampling}) {
    Rng rng(20);
    RhoSemigroup h(RhoSemigroupSpec{5, 3});
    const ElementCode g = h.generators()[0];
    CHECK(semigroup_dlog(h, g, g, mode, rng) == 1);
    CHECK(semigroup_dlog(h, g, h.element(uint64_t(6)), mode, rng) == 6);
    CHECK(semigroup_dlog(h, g, h.element(uint64_t(2)), mode, rng) == 2);
  }
}

TEST_CASE("dlog agrees with brute force exhaustively") {
  Rng rng(21);
  for (int it = 0; it < 6; ++it) {
    const uint64_t t = 1 + rng.below(40);
    const uint64_t r = 1 + rng.below(40);
    RhoSemigroup h(RhoSemigroupSpec{t, r});
    const ElementCode g = h.generators()[0];
    for (uint64_t j = 1; j < t + r; ++j) {
      const BigInt a = semigroup_dlog(h, g, h.element(j), SimMode::sampling, rng);
      CHECK(a == *brute_dlog(h, g, h.element(j), t + r));
    }
  }
}

TEST_CASE("foreign elements raise NotAPower, never a wrong exponent") {
  Rng rng(22);
  auto h = example_transformation();
  const ElementCode f = h.generators()[0];
  // A map outside the closure {f, f^2, f^3}.
  const ElementCode foreign = h.element({1, 2, 3, 4});
  for (SimMode mode : {SimMode::classical, SimMode::sampling})
    CHECK_THROWS_AS(semigroup_dlog(h, f, foreign, mode, rng), NotAPower);

  // Cycle-absorbed foreign element: x f^2 = x while x is not a power of f.
  const ElementCode absorbed = h.element({3, 3, 3, 3});
  CHECK(h.product_unmetered(absorbed, pow_unmetered(h, f, 2)) == absorbed);
  for (SimMode mode : {SimMode::classical, SimMode::sampling})
    CHECK_THROWS_AS(semigroup_dlog(h, f, absorbed, mode, rng), NotAPower);
}

TEST_CASE("gamma list is t-1 zeros then ones (spot checks)") {
  Rng rng(23);
  for (int it = 0; it < 4; ++it) {
    const uint64_t t = 1 + rng.below(500);
    const uint64_t r = 1 + rng.below(500);
    RhoSemigroup h(RhoSemigroupSpec{t, r});
    const ElementCode g = h.generators()[0];
    for (int probe = 0; probe < 64; ++probe) {
      const uint64_t j = 1 + rng.below(t + r);
      CHECK(gamma(h, g, r, h.element(j)) == (j >= t));
    }
  }
}

TEST_CASE("sampling-mode query growth stays polylog") {
  // product + charged <= C log2(N)^3 with C frozen after calibration.
  constexpr double kFrozenC = 24.0;
  Rng rng(24);
  for (int c = 6; c <= 12; ++c) {
    const uint64_t n = uint64_t(1) << c;
    const uint64_t t = n / 3 + 1, r = n - n / 3 - 1;
    RhoSemigroup h(RhoSemigroupSpec{t, r});
    h.meter().reset();
    const auto rho = find_rho(h, h.generators()[0], SimMode::sampling, rng);
    CHECK(rho.t == t);
    CHECK(rho.r == r);
    const double lg = static_cast<double>(bit_length(h.order_bound()));
    const auto& m = h.meter();
    CHECK(static_cast<double>(m.product_queries + m.charged_queries) <=
          kFrozenC * lg * lg * lg);
  }
}

}  // TEST_SUITE
