#include "smax/channel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace smax {

NoiseModel NoiseModel::gaussian(double variance) {
  if (!(variance >= 0.0) || !std::isfinite(variance)) {
    throw std::invalid_argument("noise variance must be finite and nonnegative");
  }
  NoiseModel n;
  if (variance == 0.0) return n;
  n.kind_ = Kind::gaussian;
  n.variance_ = variance;
  n.stddev_ = std::sqrt(variance);
  n.name_ = "gaussian";
  return n;
}

NoiseModel NoiseModel::from_db(double power_db) {
  if (std::isinf(power_db) && power_db < 0) return zero();
  return gaussian(variance_from_db(power_db));
}

NoiseModel NoiseModel::custom(std::string name, Sampler sampler, Cdf cdf) {
  if (!sampler || !cdf) throw std::invalid_argument("custom noise needs sampler and cdf");
  NoiseModel n;
  n.kind_ = Kind::custom;
  n.name_ = std::move(name);
  n.sampler_ = std::move(sampler);
  n.cdf_ = std::move(cdf);
  return n;
}

double NoiseModel::sample(Rng& rng) const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::gaussian:
      return std::normal_distribution<double>(0.0, stddev_)(rng);
    case Kind::custom:
      return sampler_(rng);
  }
  return 0.0;
}

double NoiseModel::cdf(double c) const {
  switch (kind_) {
    case Kind::zero:
      return c >= 0.0 ? 1.0 : 0.0;
    case Kind::gaussian:
      return 0.5 * std::erfc(-c / (stddev_ * std::sqrt(2.0)));
    case Kind::custom:
      return cdf_(c);
  }
  return 0.0;
}

double variance_from_db(double power_db) noexcept {
  return std::pow(10.0, power_db / 10.0);
}

double wmac(std::span<const Bit> signals, const NoiseModel& noise, Rng& rng) {
  std::size_t active = 0;
  for (Bit b : signals) active += b;
  return wmac_count(active, noise, rng);
}

double wmac_count(std::size_t transmitting, const NoiseModel& noise, Rng& rng) {
  return static_cast<double>(transmitting) + noise.sample(rng);
}

const char* to_string(EstimateDelta d) noexcept {
  switch (d) {
    case EstimateDelta::no_change: return "no change";
    case EstimateDelta::append_zero: return "append 0";
    case EstimateDelta::append_one: return "append 1";
    case EstimateDelta::remove_last: return "remove last";
  }
  return "?";
}

EstimateDelta delta_between(const Estimate& before, const Estimate& after) {
  if (after.size() == before.size()) {
    if (after == before) return EstimateDelta::no_change;
  } else if (after.size() == before.size() + 1) {
    if (after.without_last() == before) {
      return after.back() ? EstimateDelta::append_one : EstimateDelta::append_zero;
    }
  } else if (after.size() + 1 == before.size()) {
    if (before.without_last() == after) return EstimateDelta::remove_last;
  }
  throw std::logic_error("estimate changed by more than one digit: '" +
                         before.to_string() + "' -> '" + after.to_string() + "'");
}

Estimate apply_delta(Estimate estimate, EstimateDelta delta) {
  switch (delta) {
    case EstimateDelta::no_change:
      break;
    case EstimateDelta::append_zero:
      estimate.push_back(0);
      break;
    case EstimateDelta::append_one:
      estimate.push_back(1);
      break;
    case EstimateDelta::remove_last:
      if (!estimate.empty()) estimate.pop_back();
      break;
  }
  return estimate;
}

}  // namespace smax
