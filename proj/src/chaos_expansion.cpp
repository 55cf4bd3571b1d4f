#include "wick/chaos_expansion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wick/combinatorics.hpp"
#include "wick/error.hpp"

namespace wick {
namespace {

bool negligible(double c) { return std::abs(c) < kPruneThreshold; }

template <class Combine>
ChaosExpansion merge(const ChaosExpansion& a, const ChaosExpansion& b, Combine combine) {
  require_same_dim(a, b, "addition");
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  while (ia != a.terms().end() || ib != b.terms().end()) {
    if (ib == b.terms().end() || (ia != a.terms().end() && ia->alpha < ib->alpha)) {
      out.push_back({ia->alpha, combine(ia->coeff, 0.0)});
      ++ia;
    } else if (ia == a.terms().end() || ib->alpha < ia->alpha) {
      out.push_back({ib->alpha, combine(0.0, ib->coeff)});
      ++ib;
    } else {
      out.push_back({ia->alpha, combine(ia->coeff, ib->coeff)});
      ++ia;
      ++ib;
    }
  }
  return ChaosExpansion::from_sorted_terms(a.dim(), std::move(out));
}

}  // namespace

ChaosExpansion::ChaosExpansion(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw DomainError("expansion dimension must be positive");
}

ChaosExpansion ChaosExpansion::make(std::size_t dim, std::vector<std::pair<MultiIndex, double>> entries) {
  if (dim == 0) throw DomainError("expansion dimension must be positive");
  std::vector<Term> terms;
  terms.reserve(entries.size());
  for (auto& [alpha, c] : entries) {
    if (alpha.dim() != dim) {
      throw DimensionMismatch("multi-index of length " + std::to_string(alpha.dim()) +
                              " in an expansion of dimension " + std::to_string(dim));
    }
    if (!std::isfinite(c)) throw InvalidExpansion("non-finite coefficient");
    terms.push_back({std::move(alpha), c});
  }
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.alpha < b.alpha; });
  for (std::size_t i = 1; i < terms.size(); ++i) {
    if (terms[i].alpha == terms[i - 1].alpha) throw InvalidExpansion("duplicate multi-index");
  }
  return from_sorted_terms(dim, std::move(terms));
}

ChaosExpansion ChaosExpansion::constant(std::size_t dim, double value) {
  return make(dim, {{MultiIndex::zero(dim), value}});
}

ChaosExpansion ChaosExpansion::from_sorted_terms(std::size_t dim, std::vector<Term> terms) {
  ChaosExpansion x(dim);
  std::erase_if(terms, [](const Term& t) { return negligible(t.coeff); });
  x.terms_ = std::move(terms);
  return x;
}

unsigned ChaosExpansion::max_degree() const noexcept {
  return terms_.empty() ? 0 : terms_.back().alpha.degree();
}

std::optional<unsigned> ChaosExpansion::min_degree() const noexcept {
  if (terms_.empty()) return std::nullopt;
  return terms_.front().alpha.degree();
}

std::uint32_t ChaosExpansion::max_exponent(std::size_t i) const {
  std::uint32_t m = 0;
  for (const auto& t : terms_) m = std::max(m, t.alpha[i]);
  return m;
}

double ChaosExpansion::coefficient(const MultiIndex& alpha) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), alpha,
                             [](const Term& t, const MultiIndex& a) { return t.alpha < a; });
  return (it != terms_.end() && it->alpha == alpha) ? it->coeff : 0.0;
}

double ChaosExpansion::mean() const {
  if (terms_.empty() || terms_.front().alpha.degree() != 0) return 0.0;
  return terms_.front().coeff;
}

ChaosExpansion ChaosExpansion::operator-() const { return -1.0 * *this; }

ChaosExpansion operator+(const ChaosExpansion& a, const ChaosExpansion& b) {
  return merge(a, b, [](double x, double y) { return x + y; });
}

ChaosExpansion operator-(const ChaosExpansion& a, const ChaosExpansion& b) {
  return merge(a, b, [](double x, double y) { return x - y; });
}

ChaosExpansion operator*(double s, const ChaosExpansion& x) {
  if (!std::isfinite(s)) throw DomainError("non-finite scalar");
  std::vector<Term> out(x.terms_.begin(), x.terms_.end());
  for (auto& t : out) t.coeff *= s;
  return ChaosExpansion::from_sorted_terms(x.dim_, std::move(out));
}

bool operator==(const ChaosExpansion& a, const ChaosExpansion& b) {
  if (a.dim_ != b.dim_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].alpha != b.terms_[i].alpha || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  }
  return true;
}

ChaosExpansion make_expansion(std::size_t dim, std::vector<std::pair<MultiIndex, double>> entries) {
  return ChaosExpansion::make(dim, std::move(entries));
}

ChaosExpansion univariate(std::vector<double> coeffs) {
  std::vector<std::pair<MultiIndex, double>> entries;
  for (std::uint32_t k = 0; k < coeffs.size(); ++k) entries.emplace_back(MultiIndex{k}, coeffs[k]);
  return ChaosExpansion::make(1, std::move(entries));
}

void require_same_dim(const ChaosExpansion& x, const ChaosExpansion& y, const char* op) {
  if (x.dim() != y.dim()) {
    throw DimensionMismatch(std::string(op) + ": dimensions " + std::to_string(x.dim()) + " and " +
                            std::to_string(y.dim()));
  }
}

double weighted_product(const MultiIndex& alpha, double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  double f = 1.0;
  for (auto e : alpha.exponents()) f *= factorial(e);
  const double p = a * b;
  if (f < 1e250 && std::abs(p) > 1e-200 && std::abs(p) < 1e50) return f * p;
  const double v = std::exp(alpha.log_factorial() + std::log(std::abs(a)) + std::log(std::abs(b)));
  return p < 0 ? -v : v;
}

double weighted_square(const MultiIndex& alpha, double c) { return weighted_product(alpha, c, c); }

double l2_norm_sq(const ChaosExpansion& x) {
  double s = 0.0;
  for (const auto& t : x.terms()) s += weighted_square(t.alpha, t.coeff);
  return s;
}

double l2_norm(const ChaosExpansion& x) { return std::sqrt(l2_norm_sq(x)); }

double inner_product(const ChaosExpansion& x, const ChaosExpansion& y) {
  require_same_dim(x, y, "inner_product");
  double s = 0.0;
  auto ix = x.terms().begin();
  auto iy = y.terms().begin();
  while (ix != x.terms().end() && iy != y.terms().end()) {
    if (ix->alpha < iy->alpha) {
      ++ix;
    } else if (iy->alpha < ix->alpha) {
      ++iy;
    } else {
      s += weighted_product(ix->alpha, ix->coeff, iy->coeff);
      ++ix;
      ++iy;
    }
  }
  return s;
}

ChaosExpansion gamma(double lambda, const ChaosExpansion& x) {
  if (!std::isfinite(lambda)) throw DomainError("gamma: non-finite lambda");
  std::vector<double> powers(x.max_degree() + 1);
  for (unsigned k = 0; k < powers.size(); ++k) powers[k] = std::pow(lambda, static_cast<double>(k));
  std::vector<Term> out(x.terms().begin(), x.terms().end());
  for (auto& t : out) t.coeff *= powers[t.alpha.degree()];
  return ChaosExpansion::from_sorted_terms(x.dim(), std::move(out));
}

ChaosExpansion project_degree(const ChaosExpansion& x, unsigned m, DegreeFilter mode) {
  std::vector<Term> out;
  for (const auto& t : x.terms()) {
    const unsigned d = t.alpha.degree();
    if (mode == DegreeFilter::at_most ? d <= m : d == m) out.push_back(t);
  }
  return ChaosExpansion::from_sorted_terms(x.dim(), std::move(out));
}

std::vector<double> first_order_kernel(const ChaosExpansion& x) {
  std::vector<double> h(x.dim(), 0.0);
  for (const auto& t : x.terms()) {
    if (t.alpha.degree() > 1) break;
    if (t.alpha.degree() == 1) {
      for (std::size_t i = 0; i < x.dim(); ++i) {
        if (t.alpha[i] == 1) h[i] = t.coeff;
      }
    }
  }
  return h;
}

}  // namespace wick
