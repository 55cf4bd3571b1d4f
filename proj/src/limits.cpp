#include "wick/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wick/error.hpp"
#include "wick/exp_vector.hpp"
#include "wick/gaussian_stream.hpp"
#include "wick/sampling.hpp"
#include "wick/serialization.hpp"
#include "wick/wick_algebra.hpp"

namespace wick {
namespace {

ChaosExpansion normalized(const ChaosExpansion& x) {
  require_nonzero_mean(x);
  return (1.0 / x.mean()) * x;
}

/// ||Y||^2 - 1, without the cancellation of forming the norm first.
double norm_sq_minus_one(const ChaosExpansion& y) {
  double rest = 0.0;
  double m = 0.0;
  for (const auto& t : y.terms()) {
    if (t.alpha.degree() == 0) {
      m = t.coeff;
    } else {
      rest += weighted_square(t.alpha, t.coeff);
    }
  }
  return (m - 1.0) * (m + 1.0) + rest;
}

}  // namespace

void require_nonzero_mean(const ChaosExpansion& x) {
  if (std::abs(x.mean()) < kZeroMeanThreshold) {
    throw ZeroMeanError(
        "expansion has zero mean: no rescaling of its Wick powers has a nonzero L2 limit, and every chaos "
        "component of X^<>n below order n vanishes");
  }
}

ChaosExpansion rescaled_wick_power(const ChaosExpansion& x, unsigned n) {
  if (n == 0) throw DomainError("rescaled_wick_power: n must be >= 1");
  return wick_power(gamma(1.0 / n, normalized(x)), n);
}

std::vector<double> limit_kernel(const ChaosExpansion& x) {
  require_nonzero_mean(x);
  auto h = first_order_kernel(x);
  for (auto& v : h) v /= x.mean();
  return h;
}

double convergence_error(const ChaosExpansion& x, unsigned n) {
  return distance_to_exponential(rescaled_wick_power(x, n), limit_kernel(x));
}

ProofBound proof_bound_factors(const ChaosExpansion& x, unsigned n) {
  if (n < 2) throw DomainError("proof_bound: n must be >= 2");
  const ChaosExpansion unit = normalized(x);
  const auto h = first_order_kernel(unit);
  const double nd = static_cast<double>(n);

  ProofBound pb;
  pb.exp_factor = std::exp(squared_length(h));

  const double lambda = std::sqrt(2.0) / nd;
  std::vector<double> scaled(h);
  for (auto& v : scaled) v *= lambda;
  pb.middle = distance_to_exponential(gamma(lambda, unit), scaled);

  const ChaosExpansion spread = gamma(std::sqrt(2.0 * (nd - 1.0)) / nd, unit);
  const double a_sq_minus_one = norm_sq_minus_one(spread);
  pb.ratio = std::sqrt(1.0 + a_sq_minus_one);
  const double a_minus_one = a_sq_minus_one / (pb.ratio + 1.0);
  // (A^n - 1)/(A - 1), and its limit n at A = 1.
  pb.geometric_sum = a_minus_one == 0.0 ? nd : std::expm1(nd * std::log1p(a_minus_one)) / a_minus_one;

  pb.bound = pb.exp_factor * pb.middle * pb.geometric_sum;
  return pb;
}

double proof_bound(const ChaosExpansion& x, unsigned n) { return proof_bound_factors(x, n).bound; }

std::optional<unsigned> min_chaos_order(const ChaosExpansion& x, unsigned n) {
  return wick_power(x, n).min_degree();
}

double fitted_log_slope(std::span<const double> xs, std::span<const double> ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < std::min(xs.size(), ys.size()); ++i) {
    if (!(ys[i] > 0.0) || !(xs[i] > 0.0)) continue;
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++k;
  }
  if (k < 2) return std::numeric_limits<double>::quiet_NaN();
  const double kd = static_cast<double>(k);
  const double denom = sxx - sx * sx / kd;
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (sxy - sx * sy / kd) / denom;
}

std::vector<unsigned> power_of_two_schedule(unsigned max_n) {
  std::vector<unsigned> ns;
  for (unsigned n = 2; n <= max_n && n != 0; n *= 2) ns.push_back(n);
  return ns;
}

ConvergenceReport convergence_report(const ChaosExpansion& x, std::span<const unsigned> ns) {
  require_nonzero_mean(x);
  ConvergenceReport report;
  report.input_hash = expansion_hash(x);
  std::vector<double> xs, ys;
  for (unsigned n : ns) {
    ConvergenceEntry e;
    e.n = n;
    e.error = convergence_error(x, n);
    if (n >= 2) {
      const auto pb = proof_bound_factors(x, n);
      e.bound = pb.bound;
      e.norm_gamma = pb.ratio;
    } else {
      e.bound = std::numeric_limits<double>::quiet_NaN();
      e.norm_gamma = 1.0;
    }
    report.entries.push_back(e);
    xs.push_back(n);
    ys.push_back(e.error);
  }
  report.fitted_rate = fitted_log_slope(xs, ys);
  return report;
}

DistributionReport limit_distribution_test(const ChaosExpansion& x, unsigned n, std::size_t samples,
                                           std::uint64_t seed, double concentration_epsilon) {
  const ChaosExpansion y = rescaled_wick_power(x, n);
  const auto h = limit_kernel(x);
  const double s = squared_length(h);

  DistributionReport r;
  r.n = n;
  r.sample_count = samples;
  r.seed = seed;
  r.target_mu = -0.5 * s;
  r.target_sigma_sq = s;
  r.ks_critical = ks_critical_value(samples);
  if (samples < kMinDistributionSamples) {
    r.warnings.push_back("below minimum sample size: N = " + std::to_string(samples) + " < " +
                         std::to_string(kMinDistributionSamples));
  }

  SampleBatch batch = sample_batch(y, samples, seed);
  std::size_t nonpositive = 0;
  std::vector<double> logs;
  logs.reserve(batch.size());
  for (double v : batch.values) {
    if (v > 0.0) {
      logs.push_back(std::log(v));
    } else {
      ++nonpositive;
    }
  }
  r.frac_nonpositive = static_cast<double>(nonpositive) / static_cast<double>(samples);

  if (s == 0.0) {
    r.degenerate = true;
    r.concentration_epsilon = concentration_epsilon;
    std::size_t near = 0;
    for (double v : batch.values) {
      if (std::abs(v - 1.0) <= concentration_epsilon) ++near;
    }
    r.concentration = static_cast<double>(near) / static_cast<double>(samples);
  } else {
    const double mu = r.target_mu;
    const double sigma = std::sqrt(s);
    r.ks_lognormal = ks_distance(batch.values, [&](double v) {
      return v > 0.0 ? normal_cdf((std::log(v) - mu) / sigma) : 0.0;
    });
    if (!logs.empty()) {
      r.ks_log_normal = ks_distance(logs, [&](double v) { return normal_cdf((v - mu) / sigma); });
    }
  }
  r.samples = std::move(batch.values);
  return r;
}

}  // namespace wick
