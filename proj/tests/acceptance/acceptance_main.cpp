// Acceptance suite: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line each. Exit status = number of failed criteria.
// SGDLOG_ACCEPT_ONLY=<id> runs a single criterion.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <unordered_set>
#include <vector>

#include "sgdlog/dlog.hpp"
#include "sgdlog/experiment.hpp"
#include "sgdlog/membership.hpp"
#include "sgdlog/oracle_sim.hpp"
#include "sgdlog/semigroup.hpp"
#include "sgdlog/shifted_dlog.hpp"

using namespace sgdlog;

namespace {

std::optional<uint64_t> brute_power_log(const Semigroup& h, const ElementCode& g,
                                        const ElementCode& x, uint64_t limit) {
  ElementCode e = g;
  if (e == x) return 1;
  for (uint64_t j = 2; j <= limit; ++j) {
    e = h.product_unmetered(e, g);
    if (e == x) return j;
  }
  return std::nullopt;
}

std::optional<uint64_t> brute_shifted_log(const Semigroup& h,
                                          const ElementCode& x,
                                          const ElementCode& y,
                                          const ElementCode& g, uint64_t limit) {
  ElementCode e = y;
  for (uint64_t a = 1; a <= limit; ++a) {
    e = h.product_unmetered(e, g);
    if (e == x) return a;
  }
  return std::nullopt;
}

// --------------------------------------------------------------------------

bool criterion1_peak_mass(std::ostream& out) {
  const double bound = 4.0 / (std::numbers::pi * std::numbers::pi);
  double worst = 1.0;
  for (uint64_t r : {2, 3, 5, 7, 12}) {
    for (uint64_t t : {1, 5}) {
      PeriodSamplingInstance inst{BigInt(1024), BigInt(t), BigInt(r), BigInt(t)};
      worst = std::min(worst, closest_peak_mass(inst));
    }
  }
  out << "min mass " << worst << " vs bound " << bound;
  return worst >= bound;
}

bool criterion2_exact_divisor(std::ostream& out) {
  PeriodSamplingInstance inst{BigInt(16), BigInt(4), BigInt(4), BigInt(4)};
  const auto table = fourier_outcome_table(inst);
  double worst = 0;
  for (uint64_t k = 0; k < 16; ++k) {
    const double want = (k % 4 == 0) ? 0.25 : 0.0;
    worst = std::max(worst, std::abs(table[k] - want));
  }
  out << "max deviation " << worst;
  return worst < 1e-12;
}

bool criterion3_index_period(std::ostream& out) {
  Rng rng(301);
  const int instances = 200;
  int exact = 0;
  for (int i = 0; i < instances; ++i) {
    const uint64_t total = 2 + rng.below(4095);  // t + r <= 2^12
    const uint64_t t = 1 + rng.below(total - 1);
    const uint64_t r = total - t;
    RhoSemigroup h(RhoSemigroupSpec{t, r});
    Rng run(Rng::derive(301, i));
    try {
      const auto rho =
          find_rho(h, h.generators()[0], SimMode::sampling, run);
      if (rho.t == t && rho.r == r) ++exact;
    } catch (const SubroutineFailure&) {
    }
  }
  out << exact << "/" << instances << " exact";
  return exact >= instances * 99 / 100;
}

bool criterion4_dlog_correctness(std::ostream& out) {
  Rng rng(401);
  int instances_done = 0;
  uint64_t values_checked = 0;
  int foreign_checked = 0;
  bool ok = true;

  for (int i = 0; i < 100 && ok; ++i) {
    std::unique_ptr<Semigroup> h;
    ElementCode foreign_candidate;
    bool have_foreign = false;
    const int kind = i % 3;
    if (kind == 0) {
      const uint64_t total = 2 + rng.below(1023);
      const uint64_t t = 1 + rng.below(total - 1);
      h = make_handle(RhoSemigroupSpec{t, total - t});
    } else if (kind == 1) {
      const uint32_t n = 3 + static_cast<uint32_t>(rng.below(6));
      TransformationSemigroupSpec spec;
      spec.ground_set_size = n;
      std::vector<uint32_t> images(n);
      for (auto& v : images) v = 1 + static_cast<uint32_t>(rng.below(n));
      spec.generators = {images};
      h = make_handle(spec);
    } else {
      MatrixSemigroupSpec spec;
      spec.dimension = 1;
      spec.modulus = 3 + rng.below(1000);
      spec.generators = {{1 + rng.below(spec.modulus - 1)}};
      h = make_handle(spec);
    }
    const ElementCode g = h->generators()[0];

    // Power table.
    std::vector<ElementCode> powers{g};
    std::unordered_set<ElementCode> power_set{g};
    for (;;) {
      ElementCode next = h->product_unmetered(powers.back(), g);
      if (power_set.count(next)) break;
      power_set.insert(next);
      powers.push_back(next);
    }

    Rng run(Rng::derive(401, i));
    for (uint64_t j = 1; j <= powers.size() && ok; ++j) {
      BigInt a;
      try {
        a = semigroup_dlog(*h, g, powers[j - 1], SimMode::sampling, run);
      } catch (const Error& e) {
        out << "instance " << i << " x=g^" << j << " raised " << e.code();
        ok = false;
        break;
      }
      if (a != *brute_power_log(*h, g, powers[j - 1], powers.size())) {
        out << "instance " << i << " wrong exponent for g^" << j;
        ok = false;
      }
      ++values_checked;
    }

    // Foreign elements exist only outside the rho family.
    if (ok && kind == 1) {
      auto* tf = dynamic_cast<TransformationSemigroup*>(h.get());
      for (int tries = 0; tries < 64 && !have_foreign; ++tries) {
        std::vector<uint32_t> images(tf->ground_set_size());
        for (auto& v : images)
          v = 1 + static_cast<uint32_t>(rng.below(tf->ground_set_size()));
        const ElementCode cand = tf->element(images);
        if (!power_set.count(cand)) {
          foreign_candidate = cand;
          have_foreign = true;
        }
      }
    } else if (ok && kind == 2) {
      auto* mat = dynamic_cast<MatrixSemigroup*>(h.get());
      for (uint64_t v = 0; v < mat->modulus() && !have_foreign; ++v) {
        const ElementCode cand = mat->element({v});
        if (!power_set.count(cand)) {
          foreign_candidate = cand;
          have_foreign = true;
        }
      }
    }
    if (ok && have_foreign && foreign_checked < 100) {
      ++foreign_checked;
      try {
        semigroup_dlog(*h, g, foreign_candidate, SimMode::sampling, run);
        out << "instance " << i << " accepted a foreign element";
        ok = false;
      } catch (const NotAPower&) {
      } catch (const Error& e) {
        out << "instance " << i << " foreign raised " << e.code();
        ok = false;
      }
    }
    ++instances_done;
  }
  if (ok)
    out << instances_done << " instances, " << values_checked
        << " members, " << foreign_checked << " foreign elements";
  return ok;
}

bool criterion5_shifted_dlog(std::ostream& out) {
  Rng rng(501);
  const int trials = 500;
  int good = 0, budget_failures = 0;
  for (int i = 0; i < trials; ++i) {
    const uint64_t r = uint64_t(1) << (1 + rng.below(11));
    const uint64_t t = 1 + rng.below((uint64_t(1) << 12) - r);
    RhoSemigroup h(RhoSemigroupSpec{t, r});
    const ElementCode g = h.generators()[0];
    const ElementCode y = h.element(1 + rng.below(t + r - 1));
    const uint64_t a_pick = 1 + rng.below(t + r);
    const ElementCode x =
        h.product_unmetered(y, pow_unmetered(h, g, BigInt(a_pick)));
    const auto want = brute_shifted_log(h, x, y, g, 2 * (t + r));
    Rng run(Rng::derive(501, i));
    try {
      const BigInt a = shifted_dlog(h, x, y, g, SimMode::sampling, run);
      if (a == *want) {
        ++good;
      } else {
        out << "trial " << i << ": wrong verified answer";
        return false;
      }
    } catch (const TokenBudgetExhausted&) {
      ++budget_failures;
    } catch (const Error& e) {
      out << "trial " << i << ": unexpected " << e.code();
      return false;
    }
  }

  // Exhaustive classical agreement on small instances.
  for (int i = 0; i < 8; ++i) {
    const uint64_t r = uint64_t(1) << (1 + rng.below(6));
    const uint64_t t = 1 + rng.below(uint64_t(1) << 9);
    if (t + r > (uint64_t(1) << 10)) continue;
    RhoSemigroup h(RhoSemigroupSpec{t, r});
    const ElementCode g = h.generators()[0];
    const ElementCode y = h.element(1 + rng.below(t + r - 1));
    Rng run(Rng::derive(502, i));
    for (uint64_t a = 1; a <= t + r; ++a) {
      const ElementCode x =
          h.product_unmetered(y, pow_unmetered(h, g, BigInt(a)));
      const auto want = brute_shifted_log(h, x, y, g, 2 * (t + r));
      if (shifted_dlog(h, x, y, g, SimMode::classical, run) != *want) {
        out << "classical disagreement at a=" << a;
        return false;
      }
    }
  }

  out << good << "/" << trials << " sieve successes, " << budget_failures
      << " token-budget misses";
  return good >= trials * 95 / 100 && good + budget_failures == trials;
}

bool criterion6_sieve_growth(std::ostream& out) {
  std::vector<double> medians;
  for (int c = 4; c <= 12; ++c) {
    std::vector<uint64_t> used;
    for (int rep = 0; rep < 50; ++rep) {
      Rng rng(Rng::derive(601, 100 * c + rep));
      const uint64_t order = uint64_t(1) << c;
      DihedralSim sim(order, rng.below(order), nullptr, 0);
      try {
        sieve_solve_shift(sim, order, SimMode::sampling, rng);
      } catch (const TokenBudgetExhausted&) {
      }
      used.push_back(sim.tokens_drawn());
    }
    std::sort(used.begin(), used.end());
    medians.push_back(
        (used[24] + used[25]) / 2.0);
  }
  out << "medians:";
  for (double m : medians) out << ' ' << m;
  for (size_t i = 1; i < medians.size(); ++i)
    if (medians[i] < medians[i - 1]) {
      out << " (not monotone)";
      return false;
    }
  // ratios for c >= 8: medians[4..8] cover c = 8..12
  std::vector<double> ratios;
  for (size_t i = 4; i + 1 < medians.size(); ++i)
    ratios.push_back(medians[i + 1] / medians[i]);
  for (size_t i = 1; i < ratios.size(); ++i)
    if (ratios[i] > ratios[i - 1] + 1e-9) {
      out << " (ratios not decreasing)";
      return false;
    }
  return true;
}

bool criterion7_lemma5(std::ostream& out) {
  ExperimentConfig cfg;
  cfg.experiment = "lemma5";
  cfg.trials = 1000;
  cfg.seed = 701;
  const auto result = run_experiment(cfg);
  const uint64_t violations = result.summary.at("violations").get<uint64_t>();
  out << result.rows.size() << " instances, " << violations << " violations";
  return violations == 0;
}

bool criterion8_lower_bound_construction(std::ostream& out) {
  Rng rng(801);
  for (uint32_t k : {2u, 3u}) {
    for (uint32_t n = 1; n <= 6; ++n) {
      LowerBoundSemigroupSpec spec;
      spec.n = n;
      spec.k = k;
      {
        LowerBoundSemigroup probe(spec);
        spec.pi = random_sigma_permutation(probe.sigma_size(), rng);
      }
      LowerBoundSemigroup h(spec);
      const auto elements = h.all_elements();

      // enc bijective onto the stated code space.
      std::unordered_set<ElementCode> codes(elements.begin(), elements.end());
      if (codes.size() != elements.size() ||
          BigInt(elements.size()) != h.order_bound()) {
        out << "enc not bijective at n=" << n << " k=" << k;
        return false;
      }

      // Exhaustive associativity and commutativity.
      for (const auto& a : elements)
        for (const auto& b : elements) {
          if (!(h.product_unmetered(a, b) == h.product_unmetered(b, a))) {
            out << "not commutative at n=" << n << " k=" << k;
            return false;
          }
          for (const auto& c : elements) {
            if (!(h.product_unmetered(h.product_unmetered(a, b), c) ==
                  h.product_unmetered(a, h.product_unmetered(b, c)))) {
              out << "not associative at n=" << n << " k=" << k;
              return false;
            }
          }
        }

      // Membership inverts pi on every boundary point.
      for (size_t rank = 0; rank < h.sigma_size(); ++rank) {
        const ElementCode x = h.element_for_sigma_code(rank);
        Rng run(Rng::derive(801, (n << 8) ^ (k << 16) ^ rank));
        MembershipResult res;
        try {
          res = constructive_membership(h, x, h.generators(),
                                        SimMode::classical, run);
        } catch (const Error& e) {
          out << "membership failed (" << e.code() << ") at n=" << n
              << " k=" << k;
          return false;
        }
        const auto& expect = h.sigma_tuple(h.pi_inverse_of(rank));
        for (uint32_t i = 0; i + 1 < k; ++i)
          if (res.witness.a[i] != expect[i]) {
            out << "pi inversion mismatch at n=" << n << " k=" << k;
            return false;
          }
      }
    }
  }
  out << "n in 1..6, k in {2,3}: laws, enc, and inversion all exact";
  return true;
}

bool criterion9_scaling_slopes(std::ostream& out) {
  bool ok = true;
  for (uint32_t k : {2u, 3u}) {
    ExperimentConfig cfg;
    cfg.experiment = "membership-scaling";
    cfg.k = k;
    cfg.sizes = {100, 1000, 10000, 100000, 1000000};
    cfg.trials = 20;
    cfg.seed = 901 + k;
    cfg.mode = SimMode::classical;
    cfg.accounting = QueryAccounting::unit;
    const auto result = run_experiment(cfg);
    for (const auto& row : result.rows)
      if (!row.success) {
        out << "k=" << k << " had a failed trial; ";
        ok = false;
      }
    const double slope = result.summary.at("slope_charged").get<double>();
    const double want = 0.5 - 0.5 / static_cast<double>(k);
    out << "k=" << k << " slope " << slope << " (want " << want
        << " +/- 0.05)  ";
    ok = ok && std::abs(slope - want) <= 0.05;
  }
  return ok;
}

bool criterion10_query_efficient_bound(std::ostream& out) {
  constexpr double kFrozenC = 8.0;
  DlogOptions opts;
  opts.accounting = QueryAccounting::query_efficient;
  double worst_ratio = 0;
  for (int c = 4; c <= 11; ++c) {
    Rng rng(Rng::derive(1001, c));
    const uint64_t r = uint64_t(1) << c;
    RhoSemigroup h(RhoSemigroupSpec{5, r});
    const ElementCode g = h.generators()[0];
    const ElementCode y = h.element(uint64_t(2));
    const ElementCode x =
        h.product_unmetered(y, pow_unmetered(h, g, BigInt(5 + r / 2)));
    h.meter().reset();
    try {
      shifted_dlog(h, x, y, g, SimMode::sampling, rng, opts);
    } catch (const TokenBudgetExhausted&) {
      // token draws are free in this accounting; the bill still stands
    }
    const double lg = static_cast<double>(bit_length(h.order_bound()));
    worst_ratio =
        std::max(worst_ratio, static_cast<double>(h.meter().charged_queries) /
                                  (lg * lg * lg));
  }
  out << "worst charged/(log2 N)^3 = " << worst_ratio << " vs C = " << kFrozenC;
  return worst_ratio <= kFrozenC;
}

struct Criterion {
  int id;
  const char* name;
  std::function<bool(std::ostream&)> fn;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Fourier mass on the closest peaks >= 4/pi^2", criterion1_peak_mass},
      {2, "exact 1/4 comb when the period divides M", criterion2_exact_divisor},
      {3, "index/period recovery, 200 sampled rho instances",
       criterion3_index_period},
      {4, "discrete log matches brute force; foreign elements rejected",
       criterion4_dlog_correctness},
      {5, "shifted discrete log: sieve and classical agreement",
       criterion5_shifted_dlog},
      {6, "sieve token growth is monotone and subexponential",
       criterion6_sieve_growth},
      {7, "lex-first witness product bound, 1000 abelian instances",
       criterion7_lemma5},
      {8, "lower-bound construction: laws, encoding, permutation inversion",
       criterion8_lower_bound_construction},
      {9, "charged-query scaling slope 1/2 - 1/(2k)", criterion9_scaling_slopes},
      {10, "query-efficient accounting stays within C (log2 N)^3",
       criterion10_query_efficient_bound},
  };

  const char* only = std::getenv("SGDLOG_ACCEPT_ONLY");
  int failures = 0;
  for (const auto& c : criteria) {
    if (only && std::atoi(only) != c.id) continue;
    std::ostringstream detail;
    bool ok = false;
    try {
      ok = c.fn(detail);
    } catch (const std::exception& e) {
      detail << "exception: " << e.what();
    }
    if (!ok) ++failures;
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": "
              << c.name << " :: " << detail.str() << std::endl;
  }
  return failures;
}
