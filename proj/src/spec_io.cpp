#include "sgdlog/spec_io.hpp"

#include <cctype>
#include <fstream>

#include "sgdlog/membership.hpp"
#include "sgdlog/rng.hpp"

namespace sgdlog {

std::unique_ptr<Semigroup> load_semigroup(const nlohmann::json& j) {
  const std::string family = j.at("family").get<std::string>();
  if (family == "rho") {
    RhoSemigroupSpec spec;
    spec.t = j.at("t").get<uint64_t>();
    spec.r = j.at("r").get<uint64_t>();
    return make_handle(spec);
  }
  if (family == "transformation") {
    TransformationSemigroupSpec spec;
    spec.ground_set_size = j.at("ground_set_size").get<uint32_t>();
    spec.generators =
        j.at("generators").get<std::vector<std::vector<uint32_t>>>();
    return make_handle(spec);
  }
  if (family == "matrix") {
    MatrixSemigroupSpec spec;
    spec.dimension = j.at("dimension").get<uint32_t>();
    spec.modulus = j.at("modulus").get<uint64_t>();
    for (const auto& g : j.at("generators")) {
      std::vector<uint64_t> entries;
      if (!g.empty() && g.front().is_array()) {
        for (const auto& row : g)
          for (const auto& e : row) entries.push_back(e.get<uint64_t>());
      } else {
        entries = g.get<std::vector<uint64_t>>();
      }
      spec.generators.push_back(std::move(entries));
    }
    return make_handle(spec);
  }
  if (family == "lowerbound") {
    LowerBoundSemigroupSpec spec;
    spec.n = j.at("n").get<uint32_t>();
    spec.k = j.at("k").get<uint32_t>();
    if (j.contains("pi")) {
      spec.pi = j.at("pi").get<std::vector<uint32_t>>();
    } else if (j.contains("pi_seed")) {
      LowerBoundSemigroup probe(spec);
      Rng rng(j.at("pi_seed").get<uint64_t>());
      spec.pi = random_sigma_permutation(probe.sigma_size(), rng);
    }
    return build_lower_bound_semigroup(spec);
  }
  throw MalformedSpec("unknown family: " + family);
}

std::unique_ptr<Semigroup> load_semigroup_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedSpec("cannot open spec file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedSpec(std::string("invalid JSON: ") + e.what());
  }
  return load_semigroup(j);
}

namespace {

struct WordTerm {
  size_t generator = 0;  // 0-based
  uint64_t exponent = 1;
};

std::vector<WordTerm> tokenize_word(const std::string& word, size_t num_gens) {
  std::vector<WordTerm> terms;
  size_t i = 0;
  const auto skip_ws = [&] {
    while (i < word.size() && std::isspace(static_cast<unsigned char>(word[i])))
      ++i;
  };
  skip_ws();
  while (i < word.size()) {
    if (word[i] != 'g') throw MalformedSpec("expected generator in word: " + word);
    ++i;
    WordTerm term;
    size_t idx = 0;
    bool has_idx = false;
    while (i < word.size() && std::isdigit(static_cast<unsigned char>(word[i]))) {
      idx = idx * 10 + (word[i] - '0');
      has_idx = true;
      ++i;
    }
    term.generator = has_idx ? idx - 1 : 0;
    if (has_idx && (idx < 1 || idx > num_gens))
      throw MalformedSpec("generator index out of range in word: " + word);
    if (i < word.size() && word[i] == '^') {
      ++i;
      uint64_t e = 0;
      if (i >= word.size() || !std::isdigit(static_cast<unsigned char>(word[i])))
        throw MalformedSpec("expected exponent in word: " + word);
      while (i < word.size() && std::isdigit(static_cast<unsigned char>(word[i]))) {
        e = e * 10 + (word[i] - '0');
        ++i;
      }
      term.exponent = e;
    }
    if (term.exponent < 1)
      throw MalformedSpec("exponents must be >= 1 in word: " + word);
    terms.push_back(term);
    skip_ws();
    if (i < word.size()) {
      if (word[i] != '*') throw MalformedSpec("expected '*' in word: " + word);
      ++i;
      skip_ws();
    }
  }
  if (terms.empty()) throw MalformedSpec("empty element word");
  return terms;
}

}  // namespace

ElementCode parse_element_word(const Semigroup& h, const std::string& word) {
  const auto gens = h.generators();
  const auto terms = tokenize_word(word, gens.size());
  std::optional<ElementCode> acc;
  for (const auto& term : terms) {
    if (term.generator >= gens.size())
      throw MalformedSpec("generator index out of range in word: " + word);
    const ElementCode p =
        pow_unmetered(h, gens[term.generator], BigInt(term.exponent));
    acc = acc ? h.product_unmetered(*acc, p) : p;
  }
  return *acc;
}

}  // namespace sgdlog
