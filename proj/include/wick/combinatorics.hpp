#pragma once

#include <cstdint>

namespace wick {

/// Largest Hermite degree / factorial argument served from the cached tables.
inline constexpr unsigned kDefaultDegreeCap = 4096;

/// ln(k!). Tabulated up to kDefaultDegreeCap, lgamma beyond.
double log_factorial(unsigned k);

/// k! as a double; +inf once it no longer fits (k > 170).
double factorial(unsigned k);

/// Binomial coefficient C(n, k) by the exact multiplicative recurrence.
/// Exact while the result stays below 2^53; +inf on overflow.
double binomial(unsigned n, unsigned k);

/// Hermite linearization weight r! C(a, r) C(b, r), the coefficient of
/// He_{a+b-2r} in He_a * He_b. Throws std::overflow_error when not finite.
double contraction_weight(unsigned a, unsigned b, unsigned r);

}  // namespace wick
