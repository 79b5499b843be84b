#include "smax/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace smax::analysis {

namespace {

void check_m(int m) {
  if (m <= 0 || m % 2 != 0) throw std::invalid_argument("m must be a positive even integer");
}

}  // namespace

std::size_t description_length(std::span<const AgentSequence> agents, std::size_t cap) {
  std::vector<std::size_t> order(agents.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return compare(agents[a], agents[b], cap) < 0;
  });
  // In sorted order the longest common prefix of any pair is attained by some
  // adjacent pair.
  std::size_t d = 0;
  for (std::size_t i = 1; i < order.size(); ++i) {
    d = std::max(d, first_difference(agents[order[i - 1]], agents[order[i]], cap) + 1);
  }
  return d;
}

double standard_normal_cdf(double x) noexcept {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double success_bound(std::size_t d, int m, double sigma) {
  check_m(m);
  if (sigma < 0) throw std::invalid_argument("sigma must be nonnegative");
  if (sigma == 0) return 1.0;
  const double p = standard_normal_cdf(m / (4.0 * sigma));
  return std::pow(p, 3.0 * static_cast<double>(d + 1));
}

double success_bound(std::size_t d, int m, const NoiseModel& noise) {
  check_m(m);
  return std::pow(noise.cdf(m / 4.0), 3.0 * static_cast<double>(d + 1));
}

BoundReport bound_report(std::size_t d, int m, double sigma) {
  return {d, m, sigma, success_bound(d, m, sigma)};
}

double d_tail_bound(std::size_t n, std::size_t p, double epsilon) {
  if (n < 2) throw std::invalid_argument("d_tail_bound needs n >= 2");
  if (!(epsilon > 0 && epsilon <= 1)) throw std::invalid_argument("epsilon must be in (0, 1]");
  const double nn = static_cast<double>(n);
  return static_cast<double>(p) + std::log2(nn) + std::log2(nn - 1) + std::log2(1 / epsilon) - 1;
}

double d_union_bound(std::size_t n, std::size_t d0) noexcept {
  const double nn = static_cast<double>(n);
  return nn * (nn - 1) / 2 * std::ldexp(1.0, -static_cast<int>(d0));
}

bool is_good_state(std::span<const AgentSequence> agents, const Estimate& s, int m) {
  check_m(m);
  std::size_t protesting = 0;
  std::size_t active = 0;
  for (const auto& x : agents) {
    protesting += is_gt(x, s);
    active += is_geq(x, s);
  }
  return 2 * protesting < static_cast<std::size_t>(m) &&
         2 * active >= static_cast<std::size_t>(m);
}

}  // namespace smax::analysis
