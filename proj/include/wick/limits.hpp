#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wick/chaos_expansion.hpp"

namespace wick {

/// |E[X]| below this is treated as zero mean.
inline constexpr double kZeroMeanThreshold = 1e-12;

/// Throws ZeroMeanError when |E[X]| < kZeroMeanThreshold.
void require_nonzero_mean(const ChaosExpansion& x);

/// Gamma(1/n) X^{<>n} / E[X]^n, computed as (Gamma(1/n)(X/E[X]))^{<>n}.
ChaosExpansion rescaled_wick_power(const ChaosExpansion& x, unsigned n);

/// First-order kernel of X / E[X]; the limit of the rescaled powers is E of this.
std::vector<double> limit_kernel(const ChaosExpansion& x);

/// ||rescaled_wick_power(X, n) - E(h1)||, exact: finite part summed
/// coefficientwise, exponential tail in closed form.
double convergence_error(const ChaosExpansion& x, unsigned n);

/// Factors of the telescoping bound on convergence_error for n >= 2:
///   bound = e^{|h1|^2} * middle * (A^n - 1) / (A - 1)
/// with middle = ||Gamma(sqrt2/n) X - E(sqrt2 h1/n)|| and
/// A = ||Gamma(sqrt(2(n-1))/n) X||, X normalized to unit mean.
struct ProofBound {
  double exp_factor = 0.0;
  double middle = 0.0;
  double ratio = 0.0;  ///< A
  double geometric_sum = 0.0;
  double bound = 0.0;
};

ProofBound proof_bound_factors(const ChaosExpansion& x, unsigned n);
double proof_bound(const ChaosExpansion& x, unsigned n);

/// Lowest nonzero chaos order of X^{<>n}; nullopt when that power is zero.
std::optional<unsigned> min_chaos_order(const ChaosExpansion& x, unsigned n);

struct ConvergenceEntry {
  unsigned n = 0;
  double error = 0.0;
  double bound = 0.0;
  double norm_gamma = 0.0;  ///< A = ||Gamma(sqrt(2(n-1))/n) X|| (unit mean)
};

struct ConvergenceReport {
  std::vector<ConvergenceEntry> entries;
  double fitted_rate = 0.0;
  std::string input_hash;
};

/// Least-squares slope of log y against log x over pairs with y > 0; NaN if < 2 points.
double fitted_log_slope(std::span<const double> xs, std::span<const double> ys);

/// 2, 4, 8, ... up to max_n inclusive.
std::vector<unsigned> power_of_two_schedule(unsigned max_n);

/// Entries for each n (n = 1 gets bound = NaN; the bound needs n >= 2).
ConvergenceReport convergence_report(const ChaosExpansion& x, std::span<const unsigned> ns);

struct DistributionReport {
  unsigned n = 0;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;
  double target_mu = 0.0;
  double target_sigma_sq = 0.0;
  bool degenerate = false;
  /// All samples vs lognormal(mu, sigma^2); non-positive samples sit below its support.
  std::optional<double> ks_lognormal;
  /// ln(positive samples) vs normal(mu, sigma^2).
  std::optional<double> ks_log_normal;
  double frac_nonpositive = 0.0;
  /// Degenerate limit only: fraction of samples within +-epsilon of 1.
  std::optional<double> concentration;
  double concentration_epsilon = 0.0;
  double ks_critical = 0.0;
  std::vector<std::string> warnings;
  std::vector<double> samples;
};

inline constexpr std::size_t kMinDistributionSamples = 1000;

/// Samples rescaled_wick_power(X, n) and compares its law with the
/// lognormal limit. h1 = 0 selects the point-mass-at-1 branch.
DistributionReport limit_distribution_test(const ChaosExpansion& x, unsigned n, std::size_t samples,
                                           std::uint64_t seed, double concentration_epsilon = 0.05);

}  // namespace wick
