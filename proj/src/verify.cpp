#include "wick/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "wick/exp_vector.hpp"
#include "wick/wick_algebra.hpp"

namespace wick {
namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

unsigned uniform_int(std::mt19937_64& rng, unsigned lo, unsigned hi) {
  return lo + static_cast<unsigned>(rng() % (hi - lo + 1));
}

std::vector<double> random_kernel(std::mt19937_64& rng, std::size_t dim, double lo, double hi) {
  std::vector<double> h(dim);
  for (auto& v : h) v = uniform(rng, lo, hi);
  return h;
}

double max_abs(const ChaosExpansion& x) {
  double m = 0.0;
  for (const auto& t : x.terms()) m = std::max(m, std::abs(t.coeff));
  return m;
}

double scaled_deviation(const ChaosExpansion& a, const ChaosExpansion& b, double scale) {
  const ChaosExpansion diff = a - b;
  return max_abs(diff) / std::max(1.0, scale);
}

struct Case {
  std::mt19937_64& rng;
  std::size_t dim;
  unsigned degree;
  ChaosExpansion draw() { return random_expansion(rng, dim, degree); }
};

using CaseFn = std::function<double(Case&)>;

SuiteResult run_suite(const std::string& name, unsigned index, const VerifyOptions& opt, const CaseFn& fn) {
  std::mt19937_64 rng(opt.seed + 7919ull * index);
  SuiteResult r{name, opt.cases, 0.0, true};
  for (unsigned c = 0; c < opt.cases; ++c) {
    Case cs{rng, uniform_int(rng, 1, 3), uniform_int(rng, 0, 4)};
    r.max_deviation = std::max(r.max_deviation, fn(cs));
  }
  r.passed = r.max_deviation <= opt.tolerance;
  return r;
}

}  // namespace

ChaosExpansion random_expansion(std::mt19937_64& rng, std::size_t dim, unsigned degree, double lo, double hi) {
  std::vector<Term> terms;
  for (auto& alpha : multi_indices_up_to(dim, degree)) terms.push_back({std::move(alpha), uniform(rng, lo, hi)});
  return ChaosExpansion::from_sorted_terms(dim, std::move(terms));
}

double coefficient_deviation(const ChaosExpansion& a, const ChaosExpansion& b) {
  return scaled_deviation(a, b, max_abs(a));
}

bool VerifyReport::all_passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed; });
}

VerifyReport run_identity_suites(const VerifyOptions& opt) {
  VerifyReport report;
  unsigned index = 0;
  auto add = [&](const std::string& name, const CaseFn& fn) { report.suites.push_back(run_suite(name, index++, opt, fn)); };

  add("gamma_composition", [](Case& c) {
    const auto x = c.draw();
    const double l = uniform(c.rng, -2, 2), m = uniform(c.rng, -2, 2);
    return coefficient_deviation(gamma(m, gamma(l, x)), gamma(m * l, x));
  });
  add("gamma_wick_homomorphism", [](Case& c) {
    const auto x = c.draw(), y = c.draw();
    const double l = uniform(c.rng, -2, 2);
    return coefficient_deviation(gamma(l, wick_product(x, y)), wick_product(gamma(l, x), gamma(l, y)));
  });
  add("gamma_on_exponentials", [](Case& c) {
    const auto h = random_kernel(c.rng, c.dim, -1, 1);
    const double l = uniform(c.rng, -2, 2);
    const unsigned d = uniform_int(c.rng, 0, 10);
    std::vector<double> lh(h);
    for (auto& v : lh) v *= l;
    return coefficient_deviation(gamma(l, exp_vector(h, d).expansion), exp_vector(lh, d).expansion);
  });
  add("exponential_semigroup", [](Case& c) {
    const auto h = random_kernel(c.rng, c.dim, -1, 1), g = random_kernel(c.rng, c.dim, -1, 1);
    const unsigned d = uniform_int(c.rng, 0, 10);
    std::vector<double> sum(h);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += g[i];
    const auto prod = wick_product(exp_vector(h, d).expansion, exp_vector(g, d).expansion);
    return coefficient_deviation(project_degree(prod, d, DegreeFilter::at_most), exp_vector(sum, d).expansion);
  });
  add("exponential_norm", [](Case& c) {
    auto h = random_kernel(c.rng, c.dim, -1, 1);
    const double len = std::sqrt(squared_length(h));
    const double target = uniform(c.rng, 0.0, 3.0);
    for (auto& v : h) v = len > 0 ? v * target / len : 0.0;
    const auto e = exp_vector(h, 40);
    const double expected = std::exp(squared_length(h));
    return std::abs(l2_norm_sq(e.expansion) + e.tail_norm_sq - expected) / expected;
  });
  add("telescoping", [](Case& c) {
    const auto y = c.draw(), z = c.draw();
    const unsigned n = uniform_int(c.rng, 2, 6);
    std::vector<ChaosExpansion> yp{ChaosExpansion::constant(c.dim, 1.0)}, zp{ChaosExpansion::constant(c.dim, 1.0)};
    for (unsigned k = 1; k <= n; ++k) {
      yp.push_back(wick_product(yp.back(), y));
      zp.push_back(wick_product(zp.back(), z));
    }
    ChaosExpansion sum(c.dim);
    for (unsigned j = 0; j < n; ++j) sum = sum + wick_product(yp[j], zp[n - 1 - j]);
    const auto lhs = yp[n] - zp[n];
    const auto rhs = wick_product(y - z, sum);
    return scaled_deviation(lhs, rhs, std::max(max_abs(yp[n]), max_abs(zp[n])));
  });
  add("wick_commutativity", [](Case& c) {
    const auto x = c.draw(), y = c.draw();
    return coefficient_deviation(wick_product(x, y), wick_product(y, x));
  });
  add("wick_associativity", [](Case& c) {
    const auto x = c.draw(), y = c.draw(), z = c.draw();
    return coefficient_deviation(wick_product(wick_product(x, y), z), wick_product(x, wick_product(y, z)));
  });
  add("wick_distributivity", [](Case& c) {
    const auto x = c.draw(), y = c.draw(), z = c.draw();
    return coefficient_deviation(wick_product(x, y + z), wick_product(x, y) + wick_product(x, z));
  });
  add("wick_norm_inequality", [](Case& c) {
    const unsigned n = uniform_int(c.rng, 1, 4);
    std::vector<ChaosExpansion> xs;
    for (unsigned i = 0; i < n; ++i) xs.push_back(c.draw());
    const auto b = wick_bound_check(xs);
    return b.rhs > 0 ? std::max(0.0, b.lhs / b.rhs - 1.0) : b.lhs;
  });
  add("hu_meyer_zero_contraction", [](Case& c) {
    const auto x = c.draw(), y = c.draw();
    return coefficient_deviation(pointwise_product(x, y, 0u), wick_product(x, y));
  });
  add("s_transform_homomorphism", [](Case& c) {
    const auto x = c.draw(), y = c.draw();
    const auto h = random_kernel(c.rng, c.dim, -1.5, 1.5);
    const double lhs = s_transform_eval(wick_product(x, y), h);
    const double rhs = s_transform_eval(x, h) * s_transform_eval(y, h);
    return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
  });
  return report;
}

}  // namespace wick
