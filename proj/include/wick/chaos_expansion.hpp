#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "wick/multi_index.hpp"

namespace wick {

/// Coefficients with magnitude below this are dropped (subnormal guard).
inline constexpr double kPruneThreshold = 1e-300;

struct Term {
  MultiIndex alpha;
  double coeff = 0.0;
};

/// A finite Wiener chaos expansion X = sum_alpha c_alpha H_alpha(xi) over a
/// d-dimensional orthonormal Gaussian family, in the unnormalized Hermite
/// basis (E[H_alpha H_beta] = alpha! delta_{alpha beta}).
///
/// Immutable value type. Terms are stored in graded multi-index order with
/// no duplicates and no coefficient below kPruneThreshold in magnitude.
class ChaosExpansion {
 public:
  /// The zero variable over a basis of size dim.
  explicit ChaosExpansion(std::size_t dim = 1);

  /// Validating constructor. Throws DimensionMismatch, InvalidExpansion.
  static ChaosExpansion make(std::size_t dim, std::vector<std::pair<MultiIndex, double>> entries);

  static ChaosExpansion constant(std::size_t dim, double value);

  /// Trusts that terms are sorted, unique, finite and of length dim; prunes.
  static ChaosExpansion from_sorted_terms(std::size_t dim, std::vector<Term> terms);

  std::size_t dim() const noexcept { return dim_; }
  std::span<const Term> terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Highest degree carrying a nonzero coefficient; 0 for the zero variable.
  unsigned max_degree() const noexcept;
  /// Lowest degree carrying a nonzero coefficient; nullopt for the zero variable.
  std::optional<unsigned> min_degree() const noexcept;
  /// Largest exponent of coordinate i over all terms.
  std::uint32_t max_exponent(std::size_t i) const;

  double coefficient(const MultiIndex& alpha) const;
  /// E[X], the coefficient of the zero multi-index.
  double mean() const;

  ChaosExpansion operator-() const;
  friend ChaosExpansion operator+(const ChaosExpansion& a, const ChaosExpansion& b);
  friend ChaosExpansion operator-(const ChaosExpansion& a, const ChaosExpansion& b);
  friend ChaosExpansion operator*(double s, const ChaosExpansion& x);
  friend ChaosExpansion operator*(const ChaosExpansion& x, double s) { return s * x; }

  friend bool operator==(const ChaosExpansion& a, const ChaosExpansion& b);

 private:
  std::size_t dim_;
  std::vector<Term> terms_;
};

ChaosExpansion make_expansion(std::size_t dim, std::vector<std::pair<MultiIndex, double>> entries);

/// Shorthand for a dim-1 expansion with coefficient coeffs[k] at He_k.
ChaosExpansion univariate(std::vector<double> coeffs);

/// alpha! * a * b without forming alpha! when it would overflow.
double weighted_product(const MultiIndex& alpha, double a, double b);
double weighted_square(const MultiIndex& alpha, double c);

/// sum_alpha alpha! c_alpha^2
double l2_norm_sq(const ChaosExpansion& x);
double l2_norm(const ChaosExpansion& x);

/// sum_alpha alpha! x_alpha y_alpha. Throws DimensionMismatch.
double inner_product(const ChaosExpansion& x, const ChaosExpansion& y);

/// Second quantization: scales the order-k chaos by lambda^k.
/// Throws DomainError on non-finite lambda.
ChaosExpansion gamma(double lambda, const ChaosExpansion& x);

enum class DegreeFilter { at_most, exactly };

ChaosExpansion project_degree(const ChaosExpansion& x, unsigned m, DegreeFilter mode);

/// Degree-one coefficients (c_{e_1}, ..., c_{e_d}).
std::vector<double> first_order_kernel(const ChaosExpansion& x);

void require_same_dim(const ChaosExpansion& x, const ChaosExpansion& y, const char* op);

}  // namespace wick
