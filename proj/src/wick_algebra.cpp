#include "wick/wick_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "wick/combinatorics.hpp"
#include "wick/error.hpp"

namespace wick {
namespace {

constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 22;

/// Mixed-radix packing of multi-indexes whose coordinates are bounded by
/// radix_i - 1. Sums of packed keys are packed sums as long as no
/// coordinate overflows its radix.
class KeyPacker {
 public:
  static std::optional<KeyPacker> make(std::vector<std::uint64_t> radix) {
    KeyPacker p;
    p.stride_.resize(radix.size());
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < radix.size(); ++i) {
      p.stride_[i] = total;
      if (total > (std::numeric_limits<std::uint64_t>::max() >> 1) / radix[i]) return std::nullopt;
      total *= radix[i];
    }
    p.radix_ = std::move(radix);
    p.total_ = total;
    return p;
  }

  std::uint64_t total() const { return total_; }

  std::uint64_t encode(const MultiIndex& alpha) const {
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < stride_.size(); ++i) k += alpha[i] * stride_[i];
    return k;
  }

  MultiIndex decode(std::uint64_t key) const {
    std::vector<std::uint32_t> e(stride_.size());
    for (std::size_t i = 0; i < stride_.size(); ++i) {
      e[i] = static_cast<std::uint32_t>(key % radix_[i]);
      key /= radix_[i];
    }
    return MultiIndex(std::move(e));
  }

 private:
  std::vector<std::uint64_t> radix_;
  std::vector<std::uint64_t> stride_;
  std::uint64_t total_ = 1;
};

/// Coefficient accumulator over packed keys: a dense array when the box of
/// reachable indexes is small, a hash table otherwise.
class Accumulator {
 public:
  explicit Accumulator(const KeyPacker& packer) : packer_(packer) {
    if (packer_.total() <= kDenseLimit) dense_.assign(packer_.total(), 0.0);
  }

  void add(std::uint64_t key, double v) {
    if (!dense_.empty()) {
      dense_[key] += v;
    } else {
      hashed_[key] += v;
    }
  }

  ChaosExpansion finish(std::size_t dim) const {
    std::vector<Term> terms;
    if (!dense_.empty()) {
      for (std::uint64_t k = 0; k < dense_.size(); ++k) {
        if (dense_[k] != 0.0) terms.push_back({packer_.decode(k), dense_[k]});
      }
    } else {
      terms.reserve(hashed_.size());
      for (const auto& [k, v] : hashed_) {
        if (v != 0.0) terms.push_back({packer_.decode(k), v});
      }
    }
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.alpha < b.alpha; });
    return ChaosExpansion::from_sorted_terms(dim, std::move(terms));
  }

 private:
  const KeyPacker& packer_;
  std::vector<double> dense_;
  std::unordered_map<std::uint64_t, double> hashed_;
};

ChaosExpansion from_map(std::size_t dim, const std::map<MultiIndex, double>& m) {
  std::vector<Term> terms;
  terms.reserve(m.size());
  for (const auto& [a, c] : m) terms.push_back({a, c});
  return ChaosExpansion::from_sorted_terms(dim, std::move(terms));
}

std::vector<std::uint64_t> product_radix(const ChaosExpansion& x, const ChaosExpansion& y) {
  std::vector<std::uint64_t> radix(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    radix[i] = std::uint64_t{x.max_exponent(i)} + y.max_exponent(i) + 1;
  }
  return radix;
}

std::vector<std::uint64_t> encode_all(const KeyPacker& p, const ChaosExpansion& x) {
  std::vector<std::uint64_t> keys;
  keys.reserve(x.size());
  for (const auto& t : x.terms()) keys.push_back(p.encode(t.alpha));
  return keys;
}

/// Calls visit(r, weight) for every contraction multi-index r <= min(a, b)
/// with |r| <= max_total, where weight = prod_i r_i! C(a_i, r_i) C(b_i, r_i).
template <class Visit>
void for_each_contraction(const MultiIndex& a, const MultiIndex& b, unsigned max_total, Visit&& visit) {
  const std::size_t dim = a.dim();
  std::vector<std::uint32_t> r(dim, 0);
  std::vector<std::uint32_t> top(dim);
  for (std::size_t i = 0; i < dim; ++i) top[i] = std::min(a[i], b[i]);
  unsigned total = 0;
  while (true) {
    if (total <= max_total) {
      double w = 1.0;
      for (std::size_t i = 0; i < dim; ++i) {
        if (r[i] != 0) w *= contraction_weight(a[i], b[i], r[i]);
      }
      visit(r, w);
    }
    std::size_t i = 0;
    while (i < dim && r[i] == top[i]) {
      total -= r[i];
      r[i] = 0;
      ++i;
    }
    if (i == dim) return;
    ++r[i];
    ++total;
  }
}

}  // namespace

ChaosExpansion wick_product(const ChaosExpansion& x, const ChaosExpansion& y) {
  require_same_dim(x, y, "wick_product");
  const std::size_t dim = x.dim();
  if (x.is_zero() || y.is_zero()) return ChaosExpansion(dim);

  if (auto packer = KeyPacker::make(product_radix(x, y))) {
    const auto kx = encode_all(*packer, x);
    const auto ky = encode_all(*packer, y);
    Accumulator acc(*packer);
    const auto tx = x.terms();
    const auto ty = y.terms();
    for (std::size_t i = 0; i < tx.size(); ++i) {
      const double cx = tx[i].coeff;
      const std::uint64_t ki = kx[i];
      for (std::size_t j = 0; j < ty.size(); ++j) acc.add(ki + ky[j], cx * ty[j].coeff);
    }
    return acc.finish(dim);
  }

  std::map<MultiIndex, double> out;
  for (const auto& a : x.terms()) {
    for (const auto& b : y.terms()) out[a.alpha + b.alpha] += a.coeff * b.coeff;
  }
  return from_map(dim, out);
}

ChaosExpansion wick_power(const ChaosExpansion& x, unsigned n) {
  if (n == 0) throw DomainError("wick_power: the zeroth Wick power is not defined");
  std::optional<ChaosExpansion> result;
  ChaosExpansion base = x;
  while (true) {
    if (n & 1u) result = result ? wick_product(*result, base) : base;
    n >>= 1;
    if (n == 0) break;
    base = wick_product(base, base);
  }
  return *result;
}

ChaosExpansion wick_power_iterated(const ChaosExpansion& x, unsigned n) {
  if (n == 0) throw DomainError("wick_power: the zeroth Wick power is not defined");
  ChaosExpansion result = x;
  for (unsigned k = 1; k < n; ++k) result = wick_product(result, x);
  return result;
}

ChaosExpansion pointwise_product(const ChaosExpansion& x, const ChaosExpansion& y,
                                 std::optional<unsigned> max_contraction) {
  require_same_dim(x, y, "pointwise_product");
  const std::size_t dim = x.dim();
  if (x.is_zero() || y.is_zero()) return ChaosExpansion(dim);
  const unsigned max_total = max_contraction.value_or(std::numeric_limits<unsigned>::max());

  if (auto packer = KeyPacker::make(product_radix(x, y))) {
    const auto kx = encode_all(*packer, x);
    const auto ky = encode_all(*packer, y);
    Accumulator acc(*packer);
    const auto tx = x.terms();
    const auto ty = y.terms();
    for (std::size_t i = 0; i < tx.size(); ++i) {
      for (std::size_t j = 0; j < ty.size(); ++j) {
        const double c = tx[i].coeff * ty[j].coeff;
        const std::uint64_t base = kx[i] + ky[j];
        for_each_contraction(tx[i].alpha, ty[j].alpha, max_total,
                             [&](const std::vector<std::uint32_t>& r, double w) {
                               const std::uint64_t kr = packer->encode(MultiIndex(r));
                               acc.add(base - 2 * kr, w == 1.0 ? c : c * w);
                             });
      }
    }
    return acc.finish(dim);
  }

  std::map<MultiIndex, double> out;
  for (const auto& a : x.terms()) {
    for (const auto& b : y.terms()) {
      const double c = a.coeff * b.coeff;
      for_each_contraction(a.alpha, b.alpha, max_total, [&](const std::vector<std::uint32_t>& r, double w) {
        std::vector<std::uint32_t> e(dim);
        for (std::size_t i = 0; i < dim; ++i) e[i] = a.alpha[i] + b.alpha[i] - 2 * r[i];
        out[MultiIndex(std::move(e))] += w == 1.0 ? c : c * w;
      });
    }
  }
  return from_map(dim, out);
}

double s_transform_eval(const ChaosExpansion& x, std::span<const double> h) {
  if (h.size() != x.dim()) throw DimensionMismatch("s_transform_eval: kernel length");
  for (double v : h) {
    if (!std::isfinite(v)) throw DomainError("s_transform_eval: non-finite argument");
  }
  std::vector<std::vector<double>> powers(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    auto& p = powers[i];
    p.resize(x.max_exponent(i) + 1);
    p[0] = 1.0;
    for (std::size_t k = 1; k < p.size(); ++k) p[k] = p[k - 1] * h[i];
  }
  double s = 0.0;
  for (const auto& t : x.terms()) {
    double m = t.coeff;
    for (std::size_t i = 0; i < x.dim(); ++i) m *= powers[i][t.alpha[i]];
    s += m;
  }
  return s;
}

WickBound wick_bound_check(std::span<const ChaosExpansion> xs) {
  if (xs.empty()) throw DomainError("wick_bound_check: empty list");
  const double lambda = std::sqrt(static_cast<double>(xs.size()));
  ChaosExpansion product = xs.front();
  double rhs = l2_norm(gamma(lambda, xs.front()));
  for (std::size_t i = 1; i < xs.size(); ++i) {
    product = wick_product(product, xs[i]);
    rhs *= l2_norm(gamma(lambda, xs[i]));
  }
  return {l2_norm(product), rhs};
}

}  // namespace wick
