#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wick/chaos_expansion.hpp"

namespace wick {

/// Dense random expansion: every |alpha| <= degree gets a U[lo, hi] coefficient.
ChaosExpansion random_expansion(std::mt19937_64& rng, std::size_t dim, unsigned degree,
                                double lo = -1.0, double hi = 1.0);

/// max_alpha |a_alpha - b_alpha| / max(1, max_alpha |a_alpha|)
double coefficient_deviation(const ChaosExpansion& a, const ChaosExpansion& b);

struct VerifyOptions {
  unsigned cases = 1000;
  std::uint64_t seed = 20240601;
  double tolerance = 1e-10;
};

struct SuiteResult {
  std::string name;
  unsigned cases = 0;
  double max_deviation = 0.0;
  bool passed = false;
};

struct VerifyReport {
  std::vector<SuiteResult> suites;
  bool all_passed() const;
};

/// Randomized algebraic identity suites: Gamma composition and Wick
/// homomorphism, Gamma on exponentials, exponential semigroup, exponential
/// norm, telescoping, ring axioms, the Wick norm inequality, Hu-Meyer
/// zero-contraction consistency, S-transform homomorphism.
VerifyReport run_identity_suites(const VerifyOptions& options);

}  // namespace wick
