#pragma once

#include <cstddef>
#include <span>

#include "smax/bitseq.hpp"
#include "smax/channel.hpp"

namespace smax::analysis {

/// Smallest l such that every length-l pattern is compatible with at most one
/// agent, i.e. all length-l prefixes are pairwise distinct.
/// Throws TieError if two agents agree up to `cap` digits.
std::size_t description_length(std::span<const AgentSequence> agents,
                               std::size_t cap = kDefaultComparisonCap);

double standard_normal_cdf(double x) noexcept;

struct BoundReport {
  std::size_t d = 0;
  int m = 0;
  double sigma = 0;
  double bound = 1;
};

/// Lower bound on the probability that the plain scheme terminates
/// successfully within d + 1 iterations under N(0, sigma^2) noise:
/// Phi(m / (4 sigma))^(3 (d + 1)). sigma == 0 gives 1.
double success_bound(std::size_t d, int m, double sigma);

/// Same bound for an arbitrary symmetric noise law: P(N <= m/4)^(3 (d + 1)).
double success_bound(std::size_t d, int m, const NoiseModel& noise);

BoundReport bound_report(std::size_t d, int m, double sigma);

/// Threshold d0 = p + log2 n + log2(n - 1) + log2(1 / eps) - 1 above which
/// P(d >= d0) <= eps for inputs with p arbitrary leading bits and uniform
/// tails.
double d_tail_bound(std::size_t n, std::size_t p, double epsilon);

/// Union bound n (n - 1) / 2 * 2^-d0 on P(d >= d0) for uniform inputs.
double d_union_bound(std::size_t n, std::size_t d0) noexcept;

/// |P_S| < m/2 and |A_S| >= m/2, by scanning every agent.
bool is_good_state(std::span<const AgentSequence> agents, const Estimate& s, int m);

}  // namespace smax::analysis
