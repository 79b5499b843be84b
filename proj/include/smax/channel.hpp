#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>

#include "smax/bitseq.hpp"
#include "smax/seeding.hpp"

namespace smax {

/// Additive receiver noise of the multiple-access channel. Every model is
/// zero-mean and symmetric around 0.
class NoiseModel {
 public:
  enum class Kind { zero, gaussian, custom };

  using Sampler = std::function<double(Rng&)>;
  using Cdf = std::function<double(double)>;

  /// Noiseless channel.
  NoiseModel() = default;

  static NoiseModel zero() { return {}; }
  /// N(0, variance). A variance of 0 yields the zero model.
  static NoiseModel gaussian(double variance);
  /// Gaussian noise whose power is given in dB relative to unit transmit
  /// power; -infinity yields the zero model.
  static NoiseModel from_db(double power_db);
  /// Any other symmetric law, given by a sampler and its CDF.
  static NoiseModel custom(std::string name, Sampler sampler, Cdf cdf);

  Kind kind() const noexcept { return kind_; }
  double variance() const noexcept { return variance_; }
  double stddev() const noexcept { return stddev_; }
  const std::string& name() const noexcept { return name_; }

  /// One fresh draw. The zero model consumes no randomness.
  double sample(Rng& rng) const;

  /// P(N <= c).
  double cdf(double c) const;

 private:
  Kind kind_ = Kind::zero;
  double variance_ = 0.0;
  double stddev_ = 0.0;
  std::string name_ = "zero";
  Sampler sampler_;
  Cdf cdf_;
};

/// Noise power in dB to variance: 10^(dB/10).
double variance_from_db(double power_db) noexcept;

/// Superposition channel with unit fading: number of transmitting agents plus
/// one noise draw.
double wmac(std::span<const Bit> signals, const NoiseModel& noise, Rng& rng);

/// Same channel when only the number of transmitting agents is known.
double wmac_count(std::size_t transmitting, const NoiseModel& noise, Rng& rng);

/// The only change the coordinator ever has to multicast between iterations.
enum class EstimateDelta { no_change, append_zero, append_one, remove_last };

const char* to_string(EstimateDelta d) noexcept;

/// Error-free digital multicast.
constexpr EstimateDelta multicast(EstimateDelta message) noexcept { return message; }

/// The delta turning `before` into `after`. Throws std::logic_error if the two
/// differ by more than one appended or removed digit.
EstimateDelta delta_between(const Estimate& before, const Estimate& after);

Estimate apply_delta(Estimate estimate, EstimateDelta delta);

}  // namespace smax
