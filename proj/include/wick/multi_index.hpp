#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace wick {

/// Exponent vector alpha over the d Gaussian coordinates. H_alpha(xi) is the
/// product of He_{alpha_i}(xi_i) and spans part of the chaos of order |alpha|.
///
/// Ordering is graded: by total degree first, then lexicographic on the
/// exponents. Every coefficient table in the library is kept in this order.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<std::uint32_t> exponents);
  MultiIndex(std::initializer_list<std::uint32_t> exponents);

  static MultiIndex zero(std::size_t dim);
  /// k * e_i
  static MultiIndex unit(std::size_t dim, std::size_t i, std::uint32_t k = 1);

  std::size_t dim() const noexcept { return exponents_.size(); }
  unsigned degree() const noexcept { return degree_; }
  std::uint32_t operator[](std::size_t i) const { return exponents_[i]; }
  std::span<const std::uint32_t> exponents() const noexcept { return exponents_; }

  /// ln(alpha!) with alpha! = prod_i alpha_i!
  double log_factorial() const;

  MultiIndex operator+(const MultiIndex& other) const;

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) noexcept {
    return a.exponents_ == b.exponents_;
  }
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) noexcept;

 private:
  std::vector<std::uint32_t> exponents_;
  unsigned degree_ = 0;
};

struct MultiIndexHash {
  std::size_t operator()(const MultiIndex& alpha) const noexcept;
};

/// All multi-indexes of length dim and total degree <= max_degree, in graded order.
std::vector<MultiIndex> multi_indices_up_to(std::size_t dim, unsigned max_degree);

}  // namespace wick
