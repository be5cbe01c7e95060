#pragma once

#include <memory>
#include <string>

#include <json.hpp>

#include "sgdlog/element_code.hpp"
#include "sgdlog/semigroup.hpp"

namespace sgdlog {

// Semigroup spec documents: {"family": "rho"|"transformation"|"matrix"|
// "lowerbound", ...family fields...}. Field names match the spec structs;
// the lower-bound family takes "pi" (explicit Sigma-index permutation) or
// "pi_seed" (random permutation from the seed), defaulting to the identity.
std::unique_ptr<Semigroup> load_semigroup(const nlohmann::json& j);
std::unique_ptr<Semigroup> load_semigroup_file(const std::string& path);

// Element words over the generators: "g", "g^2", "g1^2*g2". "g" aliases
// "g1". Codes are opaque, so words are the only portable input form; the
// word is multiplied out off-meter.
ElementCode parse_element_word(const Semigroup& h, const std::string& word);

}  // namespace sgdlog
