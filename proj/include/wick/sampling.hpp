#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wick/chaos_expansion.hpp"
#include "wick/combinatorics.hpp"

namespace wick {

/// Degree at which Hermite evaluation switches to the normalized recurrence.
inline constexpr unsigned kNormalizedSwitchover = 30;

/// Probabilists' Hermite He_k(x). Above kNormalizedSwitchover it runs the
/// normalized recurrence and rescales by sqrt(k!), which may give +-inf.
/// Throws DegreeCapExceeded when k > cap.
double hermite_eval(unsigned k, double x, unsigned cap = kDefaultDegreeCap);

/// He_k(x) / sqrt(k!) for k = 0..out.size()-1.
void hermite_normalized(double x, std::span<double> out);

/// Precomputed evaluation plan for X(xi) = sum_alpha c_alpha prod_i He_{alpha_i}(xi_i).
/// Terms are summed in graded order. Safe to share; operator() is const.
class Evaluator {
 public:
  explicit Evaluator(const ChaosExpansion& x, unsigned cap = kDefaultDegreeCap);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::span<const double> xi) const;
  /// Same, reusing caller scratch of at least scratch_size() doubles.
  double operator()(std::span<const double> xi, std::span<double> scratch) const;
  std::size_t scratch_size() const noexcept { return scratch_size_; }

 private:
  std::size_t dim_;
  bool normalized_;
  std::vector<std::uint32_t> max_exp_;
  std::vector<std::size_t> offset_;
  std::size_t scratch_size_ = 0;
  std::vector<std::uint32_t> exps_;  // flattened, dim_ per term
  std::vector<double> coeffs_;
};

double evaluate(const ChaosExpansion& x, std::span<const double> xi);

struct SampleBatch {
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::size_t size() const noexcept { return values.size(); }
};

/// Evaluates X at count i.i.d. standard Gaussian d-vectors drawn from
/// GaussianStream(seed); point i uses counters i*d .. i*d+d-1.
SampleBatch sample_batch(const ChaosExpansion& x, std::size_t count, std::uint64_t seed);

struct MonteCarloEstimate {
  double value = 0.0;
  double standard_error = 0.0;
};

/// Mehler-form Ornstein-Uhlenbeck semigroup:
///   P_t X(xi) = E_zeta[ X(e^{-t} xi + sqrt(1 - e^{-2t}) zeta) ]
/// estimated from `draws` samples of zeta. Throws DomainError for t < 0.
MonteCarloEstimate ou_apply_mc(const ChaosExpansion& x, double t, std::span<const double> xi,
                               std::size_t draws, std::uint64_t seed);

enum class KsTarget { normal, lognormal };

/// sup_x |F_N(x) - F(x)| against a continuous CDF.
double ks_distance(std::vector<double> values, const std::function<double(double)>& cdf);

/// KS statistic of the batch against N(mu, sigma^2) or its exponential image.
/// Throws DomainError for an empty batch, sigma <= 0, or a non-positive
/// sample under the lognormal target.
double ks_statistic(const SampleBatch& samples, KsTarget target, double mu, double sigma);

/// Asymptotic two-sided 5% critical value 1.358 / sqrt(N).
double ks_critical_value(std::size_t n);

struct SampleMetadata {
  std::string tool_version;
  std::string expansion_hash;
};

/// "index,value" CSV plus a JSON sidecar {seed, N, generator, expansion-hash}.
void write_samples_csv(const SampleBatch& samples, const std::string& csv_path,
                       const std::string& sidecar_path, const SampleMetadata& meta);

}  // namespace wick
