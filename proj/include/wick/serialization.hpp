#pragma once

#include <string>

#include "json.hpp"
#include "wick/chaos_expansion.hpp"

namespace wick {

inline constexpr const char* kToolVersion = "wickchaos 1.0.0";

/// {"dim": d, "coeffs": [{"alpha": [...], "c": x}, ...]} in graded order.
nlohmann::json to_json(const ChaosExpansion& x);

/// Rejects duplicates, length mismatches, non-finite and non-numeric entries
/// with InvalidExpansion / DimensionMismatch.
ChaosExpansion expansion_from_json(const nlohmann::json& j);

/// FNV-1a 64 of the canonical JSON dump, as 16 hex digits.
std::string expansion_hash(const ChaosExpansion& x);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

}  // namespace wick
