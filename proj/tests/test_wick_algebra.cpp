#include <chrono>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles/oracles.hpp"
#include "wick/error.hpp"
#include "wick/exp_vector.hpp"
#include "wick/sampling.hpp"
#include "wick/verify.hpp"
#include "wick/wick_algebra.hpp"

using namespace wick;

namespace {

ChaosExpansion he(unsigned k) { return make_expansion(1, {{MultiIndex{k}, 1.0}}); }

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

ChaosExpansion draw(std::mt19937_64& rng, std::size_t dim, unsigned max_deg = 4) {
  return random_expansion(rng, dim, static_cast<unsigned>(rng() % (max_deg + 1)));
}

}  // namespace

TEST_CASE("wick_product examples") {
  CHECK(wick_product(he(1), he(1)) == he(2));
  CHECK(wick_product(univariate({1, 1}), univariate({1, -1})) == univariate({1, 0, -1}));
  CHECK(wick_product(he(3), ChaosExpansion::constant(1, 1.0)) == he(3));
  CHECK(wick_product(he(3), ChaosExpansion(1)).is_zero());
  CHECK_THROWS_AS(wick_product(he(1), ChaosExpansion::constant(2, 1.0)), DimensionMismatch);
}

TEST_CASE("wick_product matches the brute-force convolution") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const std::size_t d = 1 + rng() % 3;
    const auto x = draw(rng, d), y = draw(rng, d);
    const auto p = wick_product(x, y);
    const auto ref = oracle::wick_brute(x, y);
    std::size_t nonzero = 0;
    for (const auto& [e, c] : ref) {
      if (c != 0.0) ++nonzero;
      CHECK(p.coefficient(MultiIndex(e)) == doctest::Approx(c).epsilon(1e-14).scale(1.0));
    }
    CHECK(p.size() == nonzero);
    CHECK(p.max_degree() == x.max_degree() + y.max_degree());
    CHECK(p.mean() == doctest::Approx(x.mean() * y.mean()));
  }
}

TEST_CASE("wick_product tables too large for the dense accumulator") {
  // Radix box 401 x 401 x 401 exceeds the dense limit and takes the hashed path.
  const auto x = make_expansion(3, {{MultiIndex{200, 0, 0}, 1.0}, {MultiIndex{0, 200, 0}, 2.0},
                                    {MultiIndex{0, 0, 200}, 3.0}, {MultiIndex{0, 0, 0}, 1.0}});
  const auto p = wick_product(x, x);
  const auto ref = oracle::wick_brute(x, x);
  CHECK(p.size() == ref.size());
  for (const auto& [e, c] : ref) CHECK(p.coefficient(MultiIndex(e)) == c);
}

TEST_CASE("Wick ring axioms and Gamma homomorphism") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 300; ++i) {
    const std::size_t d = 1 + rng() % 3;
    const auto x = draw(rng, d), y = draw(rng, d), z = draw(rng, d);
    CHECK(coefficient_deviation(wick_product(x, y), wick_product(y, x)) <= 1e-12);
    CHECK(coefficient_deviation(wick_product(wick_product(x, y), z), wick_product(x, wick_product(y, z))) <= 1e-12);
    CHECK(coefficient_deviation(wick_product(x, y + z), wick_product(x, y) + wick_product(x, z)) <= 1e-12);
    const double l = -2 + 4 * unit(rng);
    CHECK(coefficient_deviation(gamma(l, wick_product(x, y)), wick_product(gamma(l, x), gamma(l, y))) <= 1e-12);
  }
}

TEST_CASE("exponential vectors under Wick product and Gamma") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const std::size_t d = 1 + rng() % 3;
    std::vector<double> h(d), g(d), s(d), lh(d);
    const double l = -1.5 + 3 * unit(rng);
    for (std::size_t k = 0; k < d; ++k) {
      h[k] = -1 + 2 * unit(rng);
      g[k] = -1 + 2 * unit(rng);
      s[k] = h[k] + g[k];
      lh[k] = l * h[k];
    }
    const unsigned deg = static_cast<unsigned>(rng() % 9);
    const auto prod = wick_product(exp_vector(h, deg).expansion, exp_vector(g, deg).expansion);
    CHECK(coefficient_deviation(project_degree(prod, deg, DegreeFilter::at_most), exp_vector(s, deg).expansion) <= 1e-12);
    CHECK(coefficient_deviation(gamma(l, exp_vector(h, deg).expansion), exp_vector(lh, deg).expansion) <= 1e-12);
  }
}

TEST_CASE("telescoping identity for Wick powers") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const std::size_t d = 1 + rng() % 3;
    const auto y = draw(rng, d, 3), z = draw(rng, d, 3);
    const unsigned n = 2 + rng() % 5;
    const auto one = ChaosExpansion::constant(d, 1.0);
    ChaosExpansion sum(d);
    for (unsigned j = 0; j < n; ++j) {
      const auto yj = j == 0 ? one : wick_power(y, j);
      const auto zj = n - 1 - j == 0 ? one : wick_power(z, n - 1 - j);
      sum = sum + wick_product(yj, zj);
    }
    const auto lhs = wick_power(y, n) - wick_power(z, n);
    const auto rhs = wick_product(y - z, sum);
    const auto diff = lhs - rhs;
    double scale = 1.0, worst = 0.0;
    for (const auto& t : wick_power(y, n).terms()) scale = std::max(scale, std::abs(t.coeff));
    for (const auto& t : wick_power(z, n).terms()) scale = std::max(scale, std::abs(t.coeff));
    for (const auto& t : diff.terms()) worst = std::max(worst, std::abs(t.coeff));
    CHECK(worst <= 1e-10 * scale);
  }
}

TEST_CASE("wick_power") {
  CHECK(wick_power(univariate({1, 2, 3}), 1) == univariate({1, 2, 3}));
  CHECK_THROWS_AS(wick_power(he(1), 0), DomainError);
  for (unsigned n = 1; n <= 12; ++n) CHECK(wick_power(he(1), n) == he(n));

  SUBCASE("binomial coefficients for 1 + c He1") {
    const double c = 0.7;
    for (unsigned n = 1; n <= 6; ++n) {
      const auto p = wick_power(univariate({1, c}), n);
      const auto it = wick_power_iterated(univariate({1, c}), n);
      for (unsigned k = 0; k <= n; ++k) {
        const double expected = static_cast<double>(oracle::fact(n) / (oracle::fact(k) * oracle::fact(n - k))) * std::pow(c, k);
        CHECK(p.coefficient(MultiIndex{k}) == doctest::Approx(expected).epsilon(1e-14));
        CHECK(it.coefficient(MultiIndex{k}) == doctest::Approx(expected).epsilon(1e-14));
      }
    }
  }

  SUBCASE("repeated squaring agrees with iterated products") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 40; ++i) {
      const std::size_t d = 1 + rng() % 2;
      const auto x = draw(rng, d, 2);
      const unsigned n = 1 + rng() % 16;
      CHECK(coefficient_deviation(wick_power(x, n), wick_power_iterated(x, n)) <= 1e-12);
    }
  }

  SUBCASE("n = 512 in one dimension is fast") {
    const auto t0 = std::chrono::steady_clock::now();
    const auto p = wick_power(univariate({1.0, 1.0}), 512);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(p.max_degree() == 512);
    CHECK(p.size() == 513);
    const double log_mid = std::lgamma(513.0) - 2 * std::lgamma(257.0);
    CHECK(std::log(p.coefficient(MultiIndex{256})) == doctest::Approx(log_mid).epsilon(1e-12));
    CHECK(secs < 1.0);
  }
}

TEST_CASE("pointwise_product: Hermite linearization") {
  CHECK(pointwise_product(he(1), he(1)) == univariate({1, 0, 1}));
  CHECK(pointwise_product(he(2), he(1)) == univariate({0, 2, 0, 1}));
  const auto x = univariate({0.3, -1.5, 2, 0.25});
  CHECK(pointwise_product(x, ChaosExpansion::constant(1, 1.0)) == x);
  CHECK_THROWS_AS(pointwise_product(he(1), ChaosExpansion::constant(2, 1.0)), DimensionMismatch);

  SUBCASE("one dimension against the power-basis oracle") {
    std::mt19937_64 rng(6);
    for (int i = 0; i < 100; ++i) {
      std::vector<double> a(1 + rng() % 7), b(1 + rng() % 7);
      for (auto& v : a) v = -1 + 2 * unit(rng);
      for (auto& v : b) v = -1 + 2 * unit(rng);
      const auto ref = oracle::pointwise_1d(a, b);
      const auto got = pointwise_product(univariate(a), univariate(b));
      for (unsigned k = 0; k < ref.size(); ++k) {
        CHECK(got.coefficient(MultiIndex{k}) == doctest::Approx(ref[k]).epsilon(1e-12).scale(1.0));
      }
    }
  }

  SUBCASE("several dimensions: evaluates to the product") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
      const std::size_t d = 1 + rng() % 3;
      const auto x = draw(rng, d, 3), y = draw(rng, d, 3);
      const auto p = pointwise_product(x, y);
      std::vector<double> xi(d);
      for (auto& v : xi) v = -2 + 4 * unit(rng);
      const double want = oracle::evaluate_closed(x, xi) * oracle::evaluate_closed(y, xi);
      CHECK(oracle::evaluate_closed(p, xi) == doctest::Approx(want).epsilon(1e-10).scale(1.0));
    }
  }

  SUBCASE("the zero-contraction term is the Wick product, bit for bit") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 100; ++i) {
      const std::size_t d = 1 + rng() % 3;
      const auto x = draw(rng, d), y = draw(rng, d);
      CHECK(pointwise_product(x, y, 0u) == wick_product(x, y));
    }
  }
}

TEST_CASE("s_transform_eval") {
  const std::vector<double> any{0.3, -2.0};
  CHECK(s_transform_eval(ChaosExpansion::constant(2, 1.0), any) == 1.0);
  const std::vector<double> one{1.0};
  CHECK(s_transform_eval(exp_vector(one, 12).expansion, one) == doctest::Approx(std::exp(1.0)).epsilon(1e-9));
  CHECK_THROWS_AS(s_transform_eval(he(1), any), DimensionMismatch);

  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    const std::size_t d = 1 + rng() % 3;
    const auto x = draw(rng, d), y = draw(rng, d);
    std::vector<double> h(d);
    for (auto& v : h) v = -1.5 + 3 * unit(rng);
    const double lhs = s_transform_eval(wick_product(x, y), h);
    const double rhs = s_transform_eval(x, h) * s_transform_eval(y, h);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(1.0));
    CHECK(s_transform_eval(x + 2.0 * y, h) ==
          doctest::Approx(s_transform_eval(x, h) + 2 * s_transform_eval(y, h)).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("wick_bound_check") {
  const auto x = univariate({0.5, -1, 2});
  const std::vector<ChaosExpansion> single{x};
  const auto b1 = wick_bound_check(single);
  CHECK(b1.lhs == b1.rhs);
  CHECK(b1.lhs == doctest::Approx(l2_norm(x)));

  const std::vector<ChaosExpansion> pair{univariate({1, 1}), univariate({1, 1})};
  const auto b2 = wick_bound_check(pair);
  CHECK(b2.lhs == doctest::Approx(std::sqrt(7.0)).epsilon(1e-15));
  CHECK(b2.rhs == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(b2.holds());

  CHECK_THROWS_AS(wick_bound_check(std::span<const ChaosExpansion>{}), DomainError);
}
