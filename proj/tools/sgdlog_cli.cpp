#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgdlog/dlog.hpp"
#include "sgdlog/experiment.hpp"
#include "sgdlog/kernels/kernels.hpp"
#include "sgdlog/membership.hpp"
#include "sgdlog/shifted_dlog.hpp"
#include "sgdlog/spec_io.hpp"

namespace {

using nlohmann::json;
using namespace sgdlog;

constexpr int kExitOk = 0;
constexpr int kExitNotFound = 1;   // NotAPower / NoSolution / NotMember / ...
constexpr int kExitBadInput = 2;

json bigint_json(const BigInt& v) {
  if (v >= 0 && v <= (BigInt(1) << 53)) return json(to_u64(v));
  return json(v.str());
}

json meter_json(const QueryMeter& m) {
  return {{"product", m.product_queries},
          {"permutation", m.permutation_queries},
          {"charged", m.charged_queries}};
}

uint64_t resolve_seed(const CLI::Option* seed_opt, uint64_t seed_flag) {
  if (seed_opt->count() > 0) return seed_flag;
  if (const char* env = std::getenv("SGDLOG_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw MalformedSpec("SGDLOG_SEED is not a valid integer");
    }
  }
  return 1;
}

// Which exit bucket an algorithmic error belongs to.
int error_exit_code(const Error& e) {
  const std::string& c = e.code();
  if (c == "MalformedSpec" || c == "ModeUnavailable" || c == "CapExceeded")
    return kExitBadInput;
  return kExitNotFound;
}

int emit_error(const Error& e) {
  json out = {{"schema_version", 1}, {"error", e.code()}, {"message", e.what()}};
  std::cout << out.dump() << '\n';
  return error_exit_code(e);
}

// ---------------------------------------------------------------------------
// selftest: the acceptance suite's fast subset.

bool check(const char* name, bool ok) {
  std::cout << (ok ? "PASS" : "FAIL") << "  " << name << '\n';
  return ok;
}

int run_selftest() {
  bool all = true;
  const double bound = 4.0 / (std::numbers::pi * std::numbers::pi);

  {
    // Exact comb when r divides M.
    PeriodSamplingInstance inst{BigInt(16), BigInt(4), BigInt(4), BigInt(4)};
    bool ok = true;
    for (uint64_t k = 0; k < 16; ++k) {
      const double p = fourier_outcome_probability(inst, BigInt(k));
      const double want = (k % 4 == 0) ? 0.25 : 0.0;
      ok = ok && std::abs(p - want) < 1e-12;
    }
    all &= check("exact-divisor outcome distribution (M=16, r=4)", ok);
  }
  {
    bool ok = true;
    for (uint64_t r : {2, 3, 5, 7, 12})
      for (uint64_t t : {1, 5}) {
        PeriodSamplingInstance inst{BigInt(1024), BigInt(t), BigInt(r), BigInt(t)};
        ok = ok && closest_peak_mass(inst) >= bound;
      }
    all &= check("peak mass >= 4/pi^2 (M=2^10)", ok);
  }
  {
    Rng rng(7);
    RhoSemigroup h(RhoSemigroupSpec{7, 12});
    const auto rho = find_rho(h, h.generators()[0], SimMode::sampling, rng);
    all &= check("sampling-mode index/period on a rho instance",
                 rho.t == 7 && rho.r == 12);
  }
  {
    Rng rng(8);
    RhoSemigroup h(RhoSemigroupSpec{5, 3});
    const BigInt a = semigroup_dlog(h, h.generators()[0], h.element(uint64_t(2)),
                                    SimMode::sampling, rng);
    all &= check("tail-case discrete log", a == 2);
  }
  {
    Rng rng(9);
    RhoSemigroup h(RhoSemigroupSpec{1, 8});
    const ElementCode g = h.generators()[0];
    const BigInt a = shifted_dlog(h, h.element(uint64_t(7)), h.element(uint64_t(2)),
                                  g, SimMode::sampling, rng);
    all &= check("shifted discrete log via sieve (r~=8)", a == 5);
  }
  {
    Rng rng(10);
    LowerBoundSemigroupSpec spec;
    spec.n = 4;
    spec.k = 2;
    LowerBoundSemigroup probe(spec);
    spec.pi = random_sigma_permutation(probe.sigma_size(), rng);
    LowerBoundSemigroup h(spec);
    const ElementCode x = h.element({2, 2});
    const auto res =
        constructive_membership(h, x, h.generators(), SimMode::classical, rng);
    all &= check("constructive membership on the lower-bound family",
                 res.witness.a.size() == 2 && res.witness.a[0] == 2 &&
                     res.witness.a[1] == 2);
  }
  if (kern::avx2_supported()) {
    std::vector<kern::cd> v(64);
    Rng rng(11);
    for (auto& z : v) z = kern::cd(rng.unit() - 0.5, rng.unit() - 0.5);
    auto a = v, b = v;
    kern::set_backend(kern::Backend::scalar);
    kern::fft(a.data(), a.size(), false);
    kern::set_backend(kern::Backend::avx2);
    kern::fft(b.data(), b.size(), false);
    kern::set_backend(kern::Backend::scalar);
    double err = 0;
    for (size_t i = 0; i < v.size(); ++i) err = std::max(err, std::abs(a[i] - b[i]));
    all &= check("scalar/AVX2 transform equivalence", err < 1e-12);
  } else {
    std::cout << "SKIP  scalar/AVX2 transform equivalence (no AVX2)\n";
  }

  std::cout << (all ? "selftest: all checks passed\n"
                    : "selftest: FAILURES detected\n");
  return all ? kExitOk : kExitNotFound;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Black-box semigroup discrete-log laboratory"};
  app.require_subcommand(1);

  std::string spec_path, mode_str = "sampling", accounting_str = "unit";
  std::string word_x, word_y, word_g = "g", word_element = "g";
  uint64_t seed_flag = 1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--spec", spec_path, "semigroup spec JSON file")->required();
    cmd->add_option("--mode", mode_str,
                    "statevector | sampling | classical (default sampling)");
    return cmd->add_option("--seed", seed_flag,
                           "64-bit seed (default: $SGDLOG_SEED or 1)");
  };

  auto* cmd_rho = app.add_subcommand("rho", "index and period of an element");
  auto* rho_seed = add_common(cmd_rho);
  cmd_rho->add_option("--element", word_element, "element word (default g)");

  auto* cmd_dlog = app.add_subcommand("dlog", "least a with g^a = x");
  auto* dlog_seed = add_common(cmd_dlog);
  cmd_dlog->add_option("--x", word_x, "target element word")->required();
  cmd_dlog->add_option("--g", word_g, "base element word (default g)");

  auto* cmd_sdlog =
      app.add_subcommand("shifted-dlog", "least a with x = y g^a");
  auto* sdlog_seed = add_common(cmd_sdlog);
  cmd_sdlog->add_option("--x", word_x, "target element word")->required();
  cmd_sdlog->add_option("--y", word_y, "offset element word")->required();
  cmd_sdlog->add_option("--g", word_g, "base element word (default g)");

  auto* cmd_member = app.add_subcommand(
      "membership", "exponents with x = g1^a1 ... gk^ak");
  auto* member_seed = add_common(cmd_member);
  cmd_member->add_option("--x", word_x, "target element word")->required();
  cmd_member->add_option("--accounting", accounting_str,
                         "unit | measured | query-efficient (default unit)");

  std::string config_path, out_dir = ".";
  int jobs = 1;
  auto* cmd_exp = app.add_subcommand("experiment", "run an experiment config");
  cmd_exp->add_option("--config", config_path, "experiment config JSON")
      ->required();
  cmd_exp->add_option("--out-dir", out_dir, "output directory (default .)");
  cmd_exp->add_option("--jobs", jobs, "parallel trial workers (default 1)");
  auto* exp_seed =
      cmd_exp->add_option("--seed", seed_flag, "seed override for the config");

  app.add_subcommand("selftest", "fast subset of the acceptance checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadInput;
  }

  try {
    if (app.got_subcommand("selftest")) return run_selftest();

    if (app.got_subcommand("experiment")) {
      std::ifstream in(config_path);
      if (!in) throw MalformedSpec("cannot open config: " + config_path);
      json cfg_json;
      try {
        in >> cfg_json;
      } catch (const json::exception& e) {
        throw MalformedSpec(std::string("invalid JSON: ") + e.what());
      }
      ExperimentConfig cfg = parse_experiment_config(cfg_json);
      if (exp_seed->count() > 0) cfg.seed = seed_flag;
      const ExperimentResult result = run_experiment(cfg, jobs);
      std::filesystem::create_directories(out_dir);
      const auto csv_path =
          std::filesystem::path(out_dir) / (cfg.experiment + ".csv");
      const auto sum_path = std::filesystem::path(out_dir) /
                            (cfg.experiment + "_summary.json");
      std::ofstream(csv_path) << rows_to_csv(result.rows);
      std::ofstream(sum_path) << result.summary.dump(2) << '\n';
      std::cout << result.summary.dump(2) << '\n';
      return kExitOk;
    }

    const SimMode mode = parse_sim_mode(mode_str);
    auto handle = load_semigroup_file(spec_path);

    if (app.got_subcommand("rho")) {
      Rng rng(resolve_seed(rho_seed, seed_flag));
      const ElementCode g = parse_element_word(*handle, word_element);
      const RhoStructure rho = find_rho(*handle, g, mode, rng);
      json out = {{"schema_version", 1},
                  {"verb", "rho"},
                  {"t", bigint_json(rho.t)},
                  {"r", bigint_json(rho.r)},
                  {"order_bound", bigint_json(rho.N)},
                  {"queries", meter_json(handle->meter())}};
      std::cout << out.dump() << '\n';
      return kExitOk;
    }
    if (app.got_subcommand("dlog")) {
      Rng rng(resolve_seed(dlog_seed, seed_flag));
      const ElementCode g = parse_element_word(*handle, word_g);
      const ElementCode x = parse_element_word(*handle, word_x);
      const BigInt a = semigroup_dlog(*handle, g, x, mode, rng);
      json out = {{"schema_version", 1},
                  {"verb", "dlog"},
                  {"a", bigint_json(a)},
                  {"queries", meter_json(handle->meter())}};
      std::cout << out.dump() << '\n';
      return kExitOk;
    }
    if (app.got_subcommand("shifted-dlog")) {
      Rng rng(resolve_seed(sdlog_seed, seed_flag));
      const ElementCode g = parse_element_word(*handle, word_g);
      const ElementCode x = parse_element_word(*handle, word_x);
      const ElementCode y = parse_element_word(*handle, word_y);
      const BigInt a = shifted_dlog(*handle, x, y, g, mode, rng);
      json out = {{"schema_version", 1},
                  {"verb", "shifted-dlog"},
                  {"a", bigint_json(a)},
                  {"queries", meter_json(handle->meter())}};
      std::cout << out.dump() << '\n';
      return kExitOk;
    }
    if (app.got_subcommand("membership")) {
      Rng rng(resolve_seed(member_seed, seed_flag));
      const ElementCode x = parse_element_word(*handle, word_x);
      MembershipOptions opts;
      opts.accounting = parse_accounting(accounting_str);
      const MembershipResult res = constructive_membership(
          *handle, x, handle->generators(), mode, rng, opts);
      json exps = json::array();
      for (const auto& a : res.witness.a) exps.push_back(bigint_json(a));
      json out = {{"schema_version", 1},
                  {"verb", "membership"},
                  {"a", exps},
                  {"grover_oracle_calls", res.grover_oracle_calls},
                  {"queries", meter_json(handle->meter())}};
      std::cout << out.dump() << '\n';
      return kExitOk;
    }
  } catch (const Error& e) {
    return emit_error(e);
  } catch (const std::exception& e) {
    json out = {{"schema_version", 1}, {"error", "Internal"}, {"message", e.what()}};
    std::cout << out.dump() << '\n';
    return kExitBadInput;
  }
  return kExitBadInput;
}
