#include "sgdlog/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

#include "sgdlog/membership.hpp"

namespace sgdlog {

ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
  ExperimentConfig c;
  c.experiment = j.at("experiment").get<std::string>();
  if (c.experiment != "membership-scaling" && c.experiment != "perm-inversion" &&
      c.experiment != "lemma5")
    throw MalformedSpec("unknown experiment: " + c.experiment);
  if (j.contains("k")) c.k = j.at("k").get<uint32_t>();
  if (j.contains("sizes")) c.sizes = j.at("sizes").get<std::vector<uint64_t>>();
  if (j.contains("trials")) c.trials = j.at("trials").get<int>();
  if (j.contains("seed")) c.seed = j.at("seed").get<uint64_t>();
  if (j.contains("mode")) c.mode = parse_sim_mode(j.at("mode").get<std::string>());
  if (j.contains("accounting"))
    c.accounting = parse_accounting(j.at("accounting").get<std::string>());
  if (c.k < 2) throw MalformedSpec("experiments require k >= 2");
  if (c.trials < 1) throw MalformedSpec("trials must be >= 1");
  return c;
}

double fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  size_t n = 0;
  for (const auto& [x, y] : points) {
    if (x <= 0 || y <= 0) continue;
    const double lx = std::log10(x), ly = std::log10(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double d = n * sxx - sx * sx;
  return (n * sxy - sx * sy) / d;
}

namespace {

uint64_t lower_bound_size(uint32_t n, uint32_t k) {
  // |S| = C(n+k, k)
  unsigned __int128 r = 1;
  for (uint32_t i = 1; i <= k; ++i) {
    r *= n + i;
    r /= i;
  }
  return static_cast<uint64_t>(r);
}

uint32_t degree_for_target_size(uint64_t target, uint32_t k) {
  uint32_t n = 1;
  while (lower_bound_size(n, k) < target) ++n;
  return n;
}

ExperimentRow run_membership_trial(uint64_t size_target, uint32_t k, int trial,
                                   uint64_t seed, SimMode mode,
                                   QueryAccounting accounting) {
  Rng rng(Rng::derive(seed, (size_target << 8) ^ static_cast<uint64_t>(trial)));
  const uint32_t n = degree_for_target_size(size_target, k);

  LowerBoundSemigroupSpec spec;
  spec.n = n;
  spec.k = k;
  {
    LowerBoundSemigroup probe(spec);
    spec.pi = random_sigma_permutation(probe.sigma_size(), rng);
  }
  LowerBoundSemigroup h(spec);

  // Uniform nonzero member: coordinates uniform on [0, n] conditioned on
  // 1 <= sum <= n (every element is a unique tuple).
  std::vector<uint32_t> tuple(k);
  for (;;) {
    uint64_t sum = 0;
    for (auto& v : tuple) {
      v = static_cast<uint32_t>(rng.below(n + 1));
      sum += v;
    }
    if (sum >= 1 && sum <= n) break;
  }
  const ElementCode x = h.element(tuple);

  ExperimentRow row;
  row.size = to_u64(h.order_bound());
  row.k = k;
  row.trial = trial;
  MembershipOptions opts;
  opts.accounting = accounting;
  try {
    constructive_membership(h, x, h.generators(), mode, rng, opts);
    row.success = true;
  } catch (const Error&) {
    row.success = false;
  }
  const QueryMeter& m = h.meter();
  row.product_queries = m.product_queries;
  row.permutation_queries = m.permutation_queries;
  row.charged_queries = m.charged_queries;
  return row;
}

void append_slopes(nlohmann::json& summary,
                   const std::vector<ExperimentRow>& rows) {
  std::map<uint64_t, std::vector<const ExperimentRow*>> by_size;
  for (const auto& r : rows) by_size[r.size].push_back(&r);
  std::vector<std::pair<double, double>> charged, product, perm;
  nlohmann::json per_size = nlohmann::json::array();
  for (const auto& [size, group] : by_size) {
    double mc = 0, mp = 0, mperm = 0, succ = 0;
    for (const auto* r : group) {
      mc += static_cast<double>(r->charged_queries);
      mp += static_cast<double>(r->product_queries);
      mperm += static_cast<double>(r->permutation_queries);
      succ += r->success ? 1 : 0;
    }
    const double cnt = static_cast<double>(group.size());
    mc /= cnt;
    mp /= cnt;
    mperm /= cnt;
    charged.emplace_back(static_cast<double>(size), mc);
    product.emplace_back(static_cast<double>(size), mp);
    perm.emplace_back(static_cast<double>(size), mperm);
    per_size.push_back({{"size", size},
                        {"mean_charged", mc},
                        {"mean_product", mp},
                        {"mean_permutation", mperm},
                        {"success_rate", succ / cnt}});
  }
  summary["per_size"] = per_size;
  summary["slope_charged"] = fit_loglog_slope(charged);
  summary["slope_product"] = fit_loglog_slope(product);
  summary["slope_permutation"] = fit_loglog_slope(perm);
}

ExperimentResult run_membership_scaling(const ExperimentConfig& c, int jobs) {
  ExperimentResult result;
  if (c.sizes.empty()) throw MalformedSpec("membership-scaling needs sizes");

  struct Task {
    uint64_t size;
    int trial;
  };
  std::vector<Task> tasks;
  for (uint64_t s : c.sizes)
    for (int t = 0; t < c.trials; ++t) tasks.push_back({s, t});
  result.rows.resize(tasks.size());

  const int workers = std::max(1, jobs);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      result.rows[i] = run_membership_trial(tasks[i].size, c.k, tasks[i].trial,
                                            c.seed, c.mode, c.accounting);
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::sort(result.rows.begin(), result.rows.end(),
            [](const ExperimentRow& a, const ExperimentRow& b) {
              return std::tie(a.size, a.k, a.trial) <
                     std::tie(b.size, b.k, b.trial);
            });
  result.summary = {{"schema_version", 1},
                    {"experiment", c.experiment},
                    {"k", c.k},
                    {"mode", to_string(c.mode)},
                    {"accounting", to_string(c.accounting)},
                    {"seed", c.seed},
                    {"trials", c.trials},
                    {"expected_exponent", 0.5 - 0.5 / static_cast<double>(c.k)},
                    {"bbht_constant", std::numbers::pi / 4.0}};
  append_slopes(result.summary, result.rows);
  return result;
}

ExperimentResult run_perm_inversion(const ExperimentConfig& c) {
  ExperimentResult result;
  if (c.sizes.empty()) throw MalformedSpec("perm-inversion needs sizes (n values)");
  MembershipOptions opts;
  opts.accounting = c.accounting;
  for (uint64_t n : c.sizes) {
    Rng rng(Rng::derive(c.seed, n));
    const auto report = permutation_inversion_experiment(
        static_cast<uint32_t>(n), c.k, c.trials, rng, c.mode, opts);
    int trial = 0;
    for (const auto& t : report.trials) {
      ExperimentRow row;
      row.size = to_u64(report.semigroup_size);
      row.k = c.k;
      row.trial = trial++;
      row.product_queries = t.queries.product_queries;
      row.permutation_queries = t.queries.permutation_queries;
      row.charged_queries = t.queries.charged_queries;
      row.success = t.success;
      result.rows.push_back(row);
    }
  }
  result.summary = {{"schema_version", 1},
                    {"experiment", c.experiment},
                    {"k", c.k},
                    {"mode", to_string(c.mode)},
                    {"accounting", to_string(c.accounting)},
                    {"seed", c.seed},
                    {"trials", c.trials},
                    {"expected_exponent", 0.5 - 0.5 / static_cast<double>(c.k)},
                    {"bbht_constant", std::numbers::pi / 4.0}};
  append_slopes(result.summary, result.rows);
  return result;
}

// Random abelian instances: commuting transformation generators (powers of a
// common map, or maps with disjoint moved blocks) and lower-bound semigroups.
ExperimentResult run_lemma5(const ExperimentConfig& c) {
  ExperimentResult result;
  Rng rng(c.seed);
  uint64_t violations = 0;

  for (int trial = 0; trial < c.trials; ++trial) {
    std::unique_ptr<Semigroup> h;
    const int kind = static_cast<int>(rng.below(3));
    if (kind == 0) {
      LowerBoundSemigroupSpec spec;
      spec.n = 1 + static_cast<uint32_t>(rng.below(8));
      spec.k = 2 + static_cast<uint32_t>(rng.below(2));
      h = build_lower_bound_semigroup(spec);
    } else if (kind == 1) {
      // Powers of one random map commute.
      const uint32_t n = 2 + static_cast<uint32_t>(rng.below(5));
      std::vector<uint32_t> base(n);
      for (auto& v : base) v = 1 + static_cast<uint32_t>(rng.below(n));
      TransformationSemigroupSpec spec;
      spec.ground_set_size = n;
      const int kgen = 2 + static_cast<int>(rng.below(2));
      TransformationSemigroup probe({n, {base}});
      const ElementCode b = probe.element(base);
      for (int i = 0; i < kgen; ++i) {
        const uint64_t e = 1 + rng.below(6);
        const ElementCode p = pow_unmetered(probe, b, BigInt(e));
        spec.generators.push_back(probe.images_of(p));
      }
      h = make_handle(spec);
    } else {
      // Disjoint moved blocks commute.
      const uint32_t n = 4 + static_cast<uint32_t>(rng.below(3));
      const uint32_t split = 2 + static_cast<uint32_t>(rng.below(n - 3));
      TransformationSemigroupSpec spec;
      spec.ground_set_size = n;
      std::vector<uint32_t> f(n), g(n);
      for (uint32_t i = 0; i < n; ++i) f[i] = g[i] = i + 1;
      for (uint32_t i = 0; i < split; ++i) f[i] = 1 + rng.below(split);
      for (uint32_t i = split; i < n; ++i)
        g[i] = split + 1 + rng.below(n - split);
      spec.generators = {f, g};
      h = make_handle(spec);
    }

    const auto closure = enumerate_closure(*h, 4096);
    ExperimentRow row;
    row.k = static_cast<uint32_t>(h->generators().size());
    row.trial = trial;
    row.success = true;
    if (closure) {
      row.size = closure->size();
      const BigInt S = closure->size();
      for (const auto& x : *closure) {
        const auto w = lex_first_decomposition_oracle(*h, x, h->generators());
        if (!w) continue;  // reachable via BFS but not a generator product? never
        BigInt prod = 1;
        for (const auto& a : w->a) prod *= a + 1;
        if (prod > S) {
          row.success = false;
          ++violations;
        }
      }
    }
    result.rows.push_back(row);
  }
  result.summary = {{"schema_version", 1},
                    {"experiment", c.experiment},
                    {"seed", c.seed},
                    {"trials", c.trials},
                    {"violations", violations}};
  return result;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, int jobs) {
  if (config.experiment == "membership-scaling")
    return run_membership_scaling(config, jobs);
  if (config.experiment == "perm-inversion") return run_perm_inversion(config);
  return run_lemma5(config);
}

std::string rows_to_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream out;
  out << "size,k,trial,product_queries,permutation_queries,charged_queries,"
         "success\n";
  for (const auto& r : rows) {
    out << r.size << ',' << r.k << ',' << r.trial << ',' << r.product_queries
        << ',' << r.permutation_queries << ',' << r.charged_queries << ','
        << (r.success ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace sgdlog
