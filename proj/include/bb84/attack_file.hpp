#pragma once

#include <optional>
#include <string>

#include "bb84/coherent.hpp"
#include "bb84/incoherent.hpp"

namespace bb84 {

/// Parsed attack description. Exactly one of the two members is set.
struct AttackFile {
  std::optional<IncoherentParams> incoherent;
  std::optional<CoherentParams> coherent;
};

/// Load a flat JSON attack file. Two shapes are accepted:
///   {"type": "incoherent", "D": ..., "D1": ...}
///   {"type": "coherent", "B": ..., "C": ..., "A1": ..., "B2": ..., "C1": ...}
/// The coherent form also accepts all ten scalars, in which case the five
/// relations are validated. Parse problems throw std::invalid_argument;
/// unphysical parameters throw InfeasibilityError.
AttackFile load_attack_file(const std::string& path);

/// Same, from a JSON string.
AttackFile parse_attack_json(const std::string& text);

}  // namespace bb84
