#include "wick/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "json.hpp"
#include "wick/error.hpp"
#include "wick/gaussian_stream.hpp"
#include "wick/parallel.hpp"
#include "wick/serialization.hpp"

namespace wick {
namespace {

void hermite_direct(double x, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() > 1) out[1] = x;
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    out[k + 1] = x * out[k] - static_cast<double>(k) * out[k - 1];
  }
}

}  // namespace

void hermite_normalized(double x, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() > 1) out[1] = x;
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    out[k + 1] = (x * out[k] - std::sqrt(static_cast<double>(k)) * out[k - 1]) / std::sqrt(static_cast<double>(k + 1));
  }
}

double hermite_eval(unsigned k, double x, unsigned cap) {
  if (k > cap) {
    throw DegreeCapExceeded("hermite_eval: degree " + std::to_string(k) + " above cap " + std::to_string(cap));
  }
  std::vector<double> table(k + 1);
  if (k <= kNormalizedSwitchover) {
    hermite_direct(x, table);
    return table[k];
  }
  hermite_normalized(x, table);
  const double v = table[k];
  if (v == 0.0) return 0.0;
  return std::copysign(std::exp(std::log(std::abs(v)) + 0.5 * log_factorial(k)), v);
}

Evaluator::Evaluator(const ChaosExpansion& x, unsigned cap) : dim_(x.dim()), max_exp_(x.dim()), offset_(x.dim()) {
  std::uint32_t top = 0;
  for (std::size_t i = 0; i < dim_; ++i) {
    max_exp_[i] = x.max_exponent(i);
    top = std::max(top, max_exp_[i]);
    offset_[i] = scratch_size_;
    scratch_size_ += max_exp_[i] + 1;
  }
  if (top > cap) throw DegreeCapExceeded("evaluate: exponent " + std::to_string(top) + " above cap");
  normalized_ = top > kNormalizedSwitchover;
  exps_.reserve(x.size() * dim_);
  coeffs_.reserve(x.size());
  for (const auto& t : x.terms()) {
    for (std::size_t i = 0; i < dim_; ++i) exps_.push_back(t.alpha[i]);
    double c = t.coeff;
    if (normalized_) {
      // c * sqrt(alpha!) pairs with the normalized polynomials.
      double f = 1.0;
      for (std::size_t i = 0; i < dim_; ++i) f *= factorial(t.alpha[i]);
      c = f < 1e300 ? c * std::sqrt(f)
                    : std::copysign(std::exp(std::log(std::abs(c)) + 0.5 * t.alpha.log_factorial()), c);
    }
    coeffs_.push_back(c);
  }
}

double Evaluator::operator()(std::span<const double> xi) const {
  std::vector<double> scratch(scratch_size_);
  return (*this)(xi, scratch);
}

double Evaluator::operator()(std::span<const double> xi, std::span<double> scratch) const {
  if (xi.size() != dim_) throw DimensionMismatch("evaluate: point has wrong dimension");
  for (std::size_t i = 0; i < dim_; ++i) {
    auto table = scratch.subspan(offset_[i], max_exp_[i] + 1);
    if (normalized_) {
      hermite_normalized(xi[i], table);
    } else {
      hermite_direct(xi[i], table);
    }
  }
  double s = 0.0;
  const std::uint32_t* e = exps_.data();
  for (double c : coeffs_) {
    double m = c;
    for (std::size_t i = 0; i < dim_; ++i) m *= scratch[offset_[i] + e[i]];
    s += m;
    e += dim_;
  }
  return s;
}

double evaluate(const ChaosExpansion& x, std::span<const double> xi) {
  for (double v : xi) {
    if (!std::isfinite(v)) throw DomainError("evaluate: non-finite point");
  }
  return Evaluator(x)(xi);
}

SampleBatch sample_batch(const ChaosExpansion& x, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw DomainError("sample_batch: need at least one sample");
  const Evaluator eval(x);
  const GaussianStream stream(seed);
  const std::size_t dim = x.dim();
  SampleBatch batch;
  batch.seed = seed;
  batch.values.resize(count);
  parallel_for(count, [&](std::size_t begin, std::size_t end) {
    std::vector<double> scratch(eval.scratch_size());
    std::vector<double> point(dim);
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < dim; ++j) point[j] = stream.normal(i * dim + j);
      batch.values[i] = eval(point, scratch);
    }
  });
  return batch;
}

MonteCarloEstimate ou_apply_mc(const ChaosExpansion& x, double t, std::span<const double> xi, std::size_t draws,
                               std::uint64_t seed) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("ou_apply_mc: time must be finite and >= 0");
  if (draws == 0) throw DomainError("ou_apply_mc: need at least one draw");
  if (xi.size() != x.dim()) throw DimensionMismatch("ou_apply_mc: point has wrong dimension");
  const Evaluator eval(x);
  if (t == 0.0) return {eval(xi), 0.0};

  const double contraction = std::exp(-t);
  const double spread = std::sqrt(-std::expm1(-2.0 * t));
  const GaussianStream stream(seed);
  const std::size_t dim = x.dim();
  std::vector<double> values(draws);
  parallel_for(draws, [&](std::size_t begin, std::size_t end) {
    std::vector<double> scratch(eval.scratch_size());
    std::vector<double> point(dim);
    for (std::size_t m = begin; m < end; ++m) {
      for (std::size_t j = 0; j < dim; ++j) point[j] = contraction * xi[j] + spread * stream.normal(m * dim + j);
      values[m] = eval(point, scratch);
    }
  });
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(draws);
  if (draws == 1) return {mean, std::numeric_limits<double>::infinity()};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = ss / static_cast<double>(draws - 1);
  return {mean, std::sqrt(var / static_cast<double>(draws))};
}

double ks_distance(std::vector<double> values, const std::function<double(double)>& cdf) {
  if (values.empty()) throw DomainError("ks_distance: empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = cdf(values[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_statistic(const SampleBatch& samples, KsTarget target, double mu, double sigma) {
  if (samples.values.empty()) throw DomainError("ks_statistic: empty batch");
  if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mu)) {
    throw DomainError("ks_statistic: need finite mu and sigma > 0");
  }
  if (target == KsTarget::normal) {
    return ks_distance(samples.values, [&](double v) { return normal_cdf((v - mu) / sigma); });
  }
  for (double v : samples.values) {
    if (!(v > 0.0)) throw DomainError("ks_statistic: non-positive sample under a lognormal target");
  }
  return ks_distance(samples.values, [&](double v) { return normal_cdf((std::log(v) - mu) / sigma); });
}

double ks_critical_value(std::size_t n) { return 1.358 / std::sqrt(static_cast<double>(n)); }

void write_samples_csv(const SampleBatch& samples, const std::string& csv_path, const std::string& sidecar_path,
                       const SampleMetadata& meta) {
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw DomainError("cannot open " + csv_path + " for writing");
  csv << "# tool: " << meta.tool_version << "\n";
  csv << "# seed: " << samples.seed << "\n";
  csv << "# generator: " << GaussianStream::kName << "\n";
  csv << "# input_hash: " << meta.expansion_hash << "\n";
  csv << "index,value\n";
  for (std::size_t i = 0; i < samples.values.size(); ++i) csv << i << ',' << format_double(samples.values[i]) << '\n';

  nlohmann::ordered_json side;
  side["seed"] = samples.seed;
  side["N"] = samples.values.size();
  side["generator"] = GaussianStream::kName;
  side["expansion-hash"] = meta.expansion_hash;
  side["tool_version"] = meta.tool_version;
  std::ofstream js(sidecar_path, std::ios::binary);
  if (!js) throw DomainError("cannot open " + sidecar_path + " for writing");
  js << side.dump(2) << '\n';
}

}  // namespace wick
