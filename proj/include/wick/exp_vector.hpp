#pragma once

#include <span>
#include <vector>

#include "wick/chaos_expansion.hpp"

namespace wick {

/// Degree-D truncation of the stochastic exponential E(h) together with the
/// exact L2 mass of everything that was cut off.
struct ExpVectorResult {
  ChaosExpansion expansion;
  /// sum_{k > D} |h|^{2k} / k!
  double tail_norm_sq = 0.0;
};

/// sum_{k > d} s^k / k!, summed directly (no cancellation against e^s).
double exp_tail(double s, unsigned d);

/// Coefficients h^alpha / alpha! for all |alpha| <= max_degree.
ExpVectorResult exp_vector(std::span<const double> h, unsigned max_degree);

/// Exact ||Y - E(h)|| for a finite expansion Y. The infinite part of E(h)
/// beyond Y.max_degree enters through exp_tail.
double distance_to_exponential(const ChaosExpansion& y, std::span<const double> h);

double squared_length(std::span<const double> v);

}  // namespace wick
