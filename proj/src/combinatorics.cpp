#include "wick/combinatorics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace wick {
namespace {

const std::vector<double>& log_factorial_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(kDefaultDegreeCap + 1);
    for (unsigned k = 0; k <= kDefaultDegreeCap; ++k) {
      t[k] = std::lgamma(static_cast<double>(k) + 1.0);
    }
    t[0] = t[1] = 0.0;
    return t;
  }();
  return table;
}

const std::vector<double>& factorial_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(171);
    t[0] = 1.0;
    for (unsigned k = 1; k < t.size(); ++k) t[k] = t[k - 1] * k;
    return t;
  }();
  return table;
}

}  // namespace

double log_factorial(unsigned k) {
  const auto& t = log_factorial_table();
  if (k < t.size()) return t[k];
  return std::lgamma(static_cast<double>(k) + 1.0);
}

double factorial(unsigned k) {
  const auto& t = factorial_table();
  if (k < t.size()) return t[k];
  return std::numeric_limits<double>::infinity();
}

double binomial(unsigned n, unsigned k) {
  if (k > n) return 0.0;
  if (k > n - k) k = n - k;
  // Each partial product is C(n-k+i, i), an integer.
  double c = 1.0;
  for (unsigned i = 1; i <= k; ++i) {
    c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    if (!std::isfinite(c)) return std::numeric_limits<double>::infinity();
  }
  return c;
}

double contraction_weight(unsigned a, unsigned b, unsigned r) {
  if (r > a || r > b) return 0.0;
  const double w = factorial(r) * binomial(a, r) * binomial(b, r);
  if (!std::isfinite(w)) {
    throw std::overflow_error("contraction weight overflows for He_" + std::to_string(a) +
                              " * He_" + std::to_string(b) + " at r = " + std::to_string(r));
  }
  return w;
}

}  // namespace wick
