#include "wick/exp_vector.hpp"

#include <cmath>

#include "wick/combinatorics.hpp"
#include "wick/error.hpp"

namespace wick {

double squared_length(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

double exp_tail(double s, unsigned d) {
  if (s < 0.0 || !std::isfinite(s)) throw DomainError("exp_tail: argument must be finite and >= 0");
  if (s == 0.0) return 0.0;
  unsigned k = d + 1;
  double term = std::exp(static_cast<double>(k) * std::log(s) - log_factorial(k));
  double sum = 0.0;
  while (term != 0.0) {
    sum += term;
    ++k;
    term *= s / static_cast<double>(k);
    if (static_cast<double>(k) > s && term < 1e-18 * sum) break;
  }
  return sum;
}

ExpVectorResult exp_vector(std::span<const double> h, unsigned max_degree) {
  const std::size_t dim = h.size();
  if (dim == 0) throw DomainError("exp_vector: empty kernel");
  for (double v : h) {
    if (!std::isfinite(v)) throw DomainError("exp_vector: non-finite kernel");
  }
  // powers[i][k] = h_i^k / k!
  std::vector<std::vector<double>> powers(dim, std::vector<double>(max_degree + 1));
  for (std::size_t i = 0; i < dim; ++i) {
    powers[i][0] = 1.0;
    for (unsigned k = 1; k <= max_degree; ++k) powers[i][k] = powers[i][k - 1] * h[i] / k;
  }
  std::vector<Term> terms;
  for (auto& alpha : multi_indices_up_to(dim, max_degree)) {
    double c = 1.0;
    for (std::size_t i = 0; i < dim && c != 0.0; ++i) c *= powers[i][alpha[i]];
    if (c != 0.0) terms.push_back({std::move(alpha), c});
  }
  return {ChaosExpansion::from_sorted_terms(dim, std::move(terms)), exp_tail(squared_length(h), max_degree)};
}

double distance_to_exponential(const ChaosExpansion& y, std::span<const double> h) {
  if (y.dim() != h.size()) throw DimensionMismatch("distance_to_exponential: kernel length");
  const auto e = exp_vector(h, y.max_degree());
  return std::sqrt(l2_norm_sq(y - e.expansion) + e.tail_norm_sq);
}

}  // namespace wick
