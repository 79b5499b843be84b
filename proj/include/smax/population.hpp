#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "smax/bitseq.hpp"

namespace smax {

/// Sizes of the protesting (x > S), active (x >= S) and raising (x >= S^1)
/// agent sets for one estimate S.
struct SetSizes {
  std::size_t protesting = 0;
  std::size_t active = 0;
  std::size_t raising = 0;

  friend bool operator==(const SetSizes&, const SetSizes&) = default;
};

/// The agents of one run, kept in lexicographic order so that every set the
/// protocol asks about is a contiguous suffix found by binary search.
class AgentPopulation {
 public:
  /// Throws TieError if two agents agree up to `cap` digits.
  explicit AgentPopulation(std::vector<AgentSequence> agents,
                           std::size_t cap = kDefaultComparisonCap);

  std::size_t size() const noexcept { return agents_.size(); }
  std::span<const AgentSequence> agents() const noexcept { return agents_; }
  const AgentSequence& operator[](std::size_t i) const { return agents_[i]; }

  SetSizes set_sizes(const Estimate& s) const;
  std::size_t count_geq(const Estimate& s) const;
  std::size_t count_gt(const Estimate& s) const;

  /// Original indices of agents with x >= S (or x > S when `strict`),
  /// ascending by value.
  std::vector<std::size_t> members(const Estimate& s, bool strict) const;

  /// Original index of the greatest agent. Requires a nonempty population.
  std::size_t max_index() const;

  /// Smallest prefix length at which all agents are pairwise distinct.
  std::size_t description_length() const noexcept { return description_length_; }

  std::size_t comparison_cap() const noexcept { return cap_; }

 private:
  std::size_t first_not_below(const Estimate& s) const;
  std::size_t first_above(const Estimate& s) const;

  std::vector<AgentSequence> agents_;
  std::vector<std::uint32_t> order_;
  std::size_t description_length_ = 0;
  std::size_t cap_;
};

}  // namespace smax
