#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "wick/chaos_expansion.hpp"

namespace wick {

/// Wick product. In the H_alpha basis H_alpha <> H_beta = H_{alpha+beta}, so
/// this is graded coefficient convolution. Carries full degree (no truncation).
ChaosExpansion wick_product(const ChaosExpansion& x, const ChaosExpansion& y);

/// n-fold Wick power by repeated squaring. n = 0 is rejected (DomainError).
ChaosExpansion wick_power(const ChaosExpansion& x, unsigned n);

/// Reference route for wick_power: n-1 successive products.
ChaosExpansion wick_power_iterated(const ChaosExpansion& x, unsigned n);

/// Ordinary product X*Y via the Hermite linearization
///   He_a He_b = sum_r r! C(a,r) C(b,r) He_{a+b-2r}
/// applied coordinatewise and summed over contraction multi-indexes
/// r <= min(alpha, beta). When max_contraction is set, only contraction
/// multi-indexes with |r| <= max_contraction are kept; 0 gives wick_product.
ChaosExpansion pointwise_product(const ChaosExpansion& x, const ChaosExpansion& y,
                                 std::optional<unsigned> max_contraction = std::nullopt);

/// S-transform SX(h) = E[X E(h)] = sum_alpha c_alpha h^alpha.
double s_transform_eval(const ChaosExpansion& x, std::span<const double> h);

struct WickBound {
  double lhs = 0.0;  ///< ||X_1 <> ... <> X_n||
  double rhs = 0.0;  ///< prod_i ||Gamma(sqrt n) X_i||
  bool holds(double slack = 1e-10) const { return lhs <= rhs * (1.0 + slack); }
};

/// Both sides of the Wick product norm inequality for the list Xs.
WickBound wick_bound_check(std::span<const ChaosExpansion> xs);

}  // namespace wick
