#pragma once

#include <cstdint>
#include <string_view>

namespace wick {

/// Counter-based source of standard normal draws.
///
/// Draw k is the inverse normal CDF (Wichura AS241) of the 53-bit uniform
/// taken from position k of the SplitMix64 stream started at `seed`.
/// Random access by counter makes every batch a pure function of the seed,
/// independent of how the work is split across threads.
class GaussianStream {
 public:
  static constexpr std::string_view kName = "splitmix64-counter/inverse-cdf-as241";

  explicit GaussianStream(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t bits(std::uint64_t counter) const noexcept;
  /// In the open interval (0, 1).
  double uniform(std::uint64_t counter) const noexcept;
  double normal(std::uint64_t counter) const noexcept;

 private:
  std::uint64_t seed_;
};

/// Standard normal quantile, accurate to about 1e-16 on (0, 1).
double normal_quantile(double p);
double normal_cdf(double x);

}  // namespace wick
