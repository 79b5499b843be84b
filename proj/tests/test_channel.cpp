#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "smax/channel.hpp"

namespace smax {
namespace {

TEST(Wmac, ZeroNoiseCountsTransmitters) {
  Rng rng(1);
  const std::vector<Bit> signals{1, 1, 0};
  EXPECT_EQ(wmac(signals, NoiseModel::zero(), rng), 2.0);
}

TEST(Wmac, SilentAgentsLeaveOnlyNoise) {
  const std::vector<Bit> zeros(1000, 0);
  const NoiseModel fixed = NoiseModel::custom(
      "fixed", [](Rng&) { return 0.3; }, [](double c) { return c >= 0.3 ? 1.0 : 0.0; });
  Rng rng(1);
  EXPECT_DOUBLE_EQ(wmac(zeros, fixed, rng), 0.3);
}

TEST(Wmac, GaussianMean) {
  Rng rng(2024);
  const std::vector<Bit> signals(5, 1);
  const NoiseModel noise = NoiseModel::gaussian(1.0);
  double sum = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) sum += wmac(signals, noise, rng);
  // Standard error of the mean is 1/sqrt(1e5) ~ 0.0032.
  EXPECT_NEAR(sum / draws, 5.0, 0.02);
}

TEST(Wmac, PermutationInvariant) {
  Rng shuffle_rng(4);
  std::vector<Bit> signals;
  for (int i = 0; i < 40; ++i) signals.push_back(static_cast<Bit>(i % 3 == 0));
  const NoiseModel noise = NoiseModel::gaussian(2.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Bit> permuted = signals;
    std::shuffle(permuted.begin(), permuted.end(), shuffle_rng);
    Rng a(trial), b(trial);
    EXPECT_EQ(wmac(signals, noise, a), wmac(permuted, noise, b));
  }
}

TEST(Wmac, ListAndCountAgree) {
  const std::vector<Bit> signals{1, 0, 1, 1, 0};
  const NoiseModel noise = NoiseModel::gaussian(0.7);
  Rng a(9), b(9);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(wmac(signals, noise, a), wmac_count(3, noise, b));
}

TEST(Noise, GaussianVarianceAndSymmetry) {
  const NoiseModel noise = NoiseModel::gaussian(2.5);
  Rng rng(77);
  const int draws = 200000;
  std::vector<double> samples(draws);
  double sum = 0, sq = 0;
  for (auto& x : samples) {
    x = noise.sample(rng);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / draws;
  EXPECT_NEAR(mean, 0.0, 0.02);
  EXPECT_NEAR(sq / draws - mean * mean, 2.5, 0.05);

  // Empirical P(N <= c) + P(N <= -c) = 1.
  for (double c : {0.1, 0.5, 1.0, 2.0, 3.0}) {
    const auto below = std::count_if(samples.begin(), samples.end(), [c](double x) { return x <= c; });
    const auto below_neg =
        std::count_if(samples.begin(), samples.end(), [c](double x) { return x <= -c; });
    EXPECT_NEAR(static_cast<double>(below + below_neg) / draws, 1.0, 0.01) << c;
  }
}

TEST(Noise, CdfOfGaussian) {
  const NoiseModel unit = NoiseModel::gaussian(1.0);
  EXPECT_NEAR(unit.cdf(0.0), 0.5, 1e-15);
  EXPECT_NEAR(unit.cdf(2.0), 0.9772498680518208, 1e-12);
  EXPECT_NEAR(unit.cdf(2.0) + unit.cdf(-2.0), 1.0, 1e-15);
}

TEST(Noise, ZeroModel) {
  Rng rng(1);
  const Rng before = rng;
  const NoiseModel zero = NoiseModel::zero();
  EXPECT_EQ(zero.kind(), NoiseModel::Kind::zero);
  EXPECT_EQ(zero.sample(rng), 0.0);
  EXPECT_EQ(rng, before);
  EXPECT_EQ(NoiseModel::gaussian(0.0).kind(), NoiseModel::Kind::zero);
  EXPECT_EQ(NoiseModel::from_db(-std::numeric_limits<double>::infinity()).kind(),
            NoiseModel::Kind::zero);
  EXPECT_THROW(NoiseModel::gaussian(-1.0), std::invalid_argument);
}

TEST(Noise, VarianceFromDb) {
  EXPECT_DOUBLE_EQ(variance_from_db(0.0), 1.0);
  EXPECT_DOUBLE_EQ(variance_from_db(10.0), 10.0);
  EXPECT_NEAR(variance_from_db(-5.5), 0.28183829312644537, 1e-15);
  EXPECT_DOUBLE_EQ(NoiseModel::from_db(10.0).variance(), 10.0);
}

TEST(Multicast, IsErrorFree) {
  for (auto d : {EstimateDelta::append_one, EstimateDelta::remove_last, EstimateDelta::no_change,
                 EstimateDelta::append_zero}) {
    EXPECT_EQ(multicast(d), d);
  }
}

TEST(Multicast, DeltaRoundTrip) {
  const Estimate s = Estimate::from_string("101");
  EXPECT_EQ(delta_between(s, s.appended(1)), EstimateDelta::append_one);
  EXPECT_EQ(delta_between(s, s.appended(0)), EstimateDelta::append_zero);
  EXPECT_EQ(delta_between(s, s.without_last()), EstimateDelta::remove_last);
  EXPECT_EQ(delta_between(s, s), EstimateDelta::no_change);
  EXPECT_EQ(delta_between(Estimate{}, Estimate{}), EstimateDelta::no_change);
  for (auto d : {EstimateDelta::append_one, EstimateDelta::append_zero, EstimateDelta::remove_last,
                 EstimateDelta::no_change}) {
    EXPECT_EQ(delta_between(s, apply_delta(s, d)), d);
  }
  EXPECT_THROW(delta_between(s, Estimate::from_string("111")), std::logic_error);
  EXPECT_THROW(delta_between(s, Estimate::from_string("10111")), std::logic_error);
}

}  // namespace
}  // namespace smax
