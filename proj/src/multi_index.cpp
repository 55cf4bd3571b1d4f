#include "wick/multi_index.hpp"

#include <algorithm>
#include <numeric>

#include "wick/combinatorics.hpp"
#include "wick/error.hpp"

namespace wick {

MultiIndex::MultiIndex(std::vector<std::uint32_t> exponents)
    : exponents_(std::move(exponents)),
      degree_(std::accumulate(exponents_.begin(), exponents_.end(), 0u)) {}

MultiIndex::MultiIndex(std::initializer_list<std::uint32_t> exponents)
    : MultiIndex(std::vector<std::uint32_t>(exponents)) {}

MultiIndex MultiIndex::zero(std::size_t dim) { return MultiIndex(std::vector<std::uint32_t>(dim, 0)); }

MultiIndex MultiIndex::unit(std::size_t dim, std::size_t i, std::uint32_t k) {
  if (i >= dim) throw DomainError("unit multi-index coordinate out of range");
  std::vector<std::uint32_t> e(dim, 0);
  e[i] = k;
  return MultiIndex(std::move(e));
}

double MultiIndex::log_factorial() const {
  double s = 0.0;
  for (auto a : exponents_) s += wick::log_factorial(a);
  return s;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (dim() != other.dim()) throw DimensionMismatch("multi-index sum over different dimensions");
  std::vector<std::uint32_t> e(exponents_);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.exponents_[i];
  return MultiIndex(std::move(e));
}

std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) noexcept {
  if (auto c = a.degree_ <=> b.degree_; c != 0) return c;
  return std::lexicographical_compare_three_way(a.exponents_.begin(), a.exponents_.end(),
                                                b.exponents_.begin(), b.exponents_.end());
}

std::size_t MultiIndexHash::operator()(const MultiIndex& alpha) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (auto e : alpha.exponents()) {
    h ^= e;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<MultiIndex> multi_indices_up_to(std::size_t dim, unsigned max_degree) {
  std::vector<MultiIndex> out;
  std::vector<std::uint32_t> e(dim, 0);
  // Odometer over the box [0, max_degree]^dim, keeping the simplex.
  auto rec = [&](auto&& self, std::size_t i, unsigned remaining) -> void {
    if (i == dim) {
      out.emplace_back(e);
      return;
    }
    for (unsigned k = 0; k <= remaining; ++k) {
      e[i] = k;
      self(self, i + 1, remaining - k);
    }
    e[i] = 0;
  };
  rec(rec, 0, max_degree);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace wick
