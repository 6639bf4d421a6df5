#pragma once

#include <vector>

#include <json.hpp>

#include "dynkin/engine.hpp"
#include "dynkin/verify.hpp"

namespace dynkin {

using Json = nlohmann::ordered_json;

/// {region, gamma0_star, q1, values, scale, relabeled}. Values are in the
/// caller's player order; fields without meaning for the profile are null.
Json to_json(const EquilibriumProfile& profile);

/// {player, mean, stderr, n, seed, mode}
Json to_json(const Estimate& estimate);

/// Array of {check, target_source, target, estimate, stderr, tolerance, pass,
/// detail}. Runtimes are left out so reports are reproducible byte for byte.
Json to_json(const std::vector<EvalReport>& reports);

}  // namespace dynkin
