#include "wick/serialization.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "wick/error.hpp"

namespace wick {

nlohmann::json to_json(const ChaosExpansion& x) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& t : x.terms()) {
    nlohmann::json alpha = nlohmann::json::array();
    for (auto e : t.alpha.exponents()) alpha.push_back(e);
    coeffs.push_back({{"alpha", std::move(alpha)}, {"c", t.coeff}});
  }
  return {{"dim", x.dim()}, {"coeffs", std::move(coeffs)}};
}

ChaosExpansion expansion_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidExpansion("expansion must be a JSON object");
  if (!j.contains("dim") || !j["dim"].is_number_unsigned() || j["dim"].get<std::size_t>() == 0) {
    throw InvalidExpansion("expansion needs a positive integer \"dim\"");
  }
  const auto dim = j["dim"].get<std::size_t>();
  if (!j.contains("coeffs") || !j["coeffs"].is_array()) throw InvalidExpansion("expansion needs a \"coeffs\" array");
  std::vector<std::pair<MultiIndex, double>> entries;
  for (const auto& entry : j["coeffs"]) {
    if (!entry.is_object() || !entry.contains("alpha") || !entry.contains("c") || !entry["alpha"].is_array() ||
        !entry["c"].is_number()) {
      throw InvalidExpansion("each coefficient needs an \"alpha\" array and a numeric \"c\"");
    }
    std::vector<std::uint32_t> alpha;
    for (const auto& e : entry["alpha"]) {
      if (!e.is_number_unsigned()) throw InvalidExpansion("multi-index entries must be non-negative integers");
      alpha.push_back(e.get<std::uint32_t>());
    }
    const double c = entry["c"].get<double>();
    if (!std::isfinite(c)) throw InvalidExpansion("non-finite coefficient");
    entries.emplace_back(MultiIndex(std::move(alpha)), c);
  }
  return make_expansion(dim, std::move(entries));
}

std::string expansion_hash(const ChaosExpansion& x) {
  const std::string canonical = to_json(x).dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace wick
