#include "smax/population.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace smax {

AgentPopulation::AgentPopulation(std::vector<AgentSequence> agents, std::size_t cap)
    : agents_(std::move(agents)), cap_(cap) {
  if (agents_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("too many agents");
  }
  order_.resize(agents_.size());
  std::iota(order_.begin(), order_.end(), 0U);
  std::sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) {
    return compare(agents_[a], agents_[b], cap_) < 0;
  });
  for (std::size_t i = 1; i < order_.size(); ++i) {
    const std::size_t k = first_difference(agents_[order_[i - 1]], agents_[order_[i]], cap_);
    description_length_ = std::max(description_length_, k + 1);
  }
}

std::size_t AgentPopulation::first_not_below(const Estimate& s) const {
  auto it = std::partition_point(order_.begin(), order_.end(), [&](std::uint32_t i) {
    return compare_prefix(agents_[i], s) == PrefixOrder::below;
  });
  return static_cast<std::size_t>(it - order_.begin());
}

std::size_t AgentPopulation::first_above(const Estimate& s) const {
  auto it = std::partition_point(order_.begin(), order_.end(), [&](std::uint32_t i) {
    return compare_prefix(agents_[i], s) != PrefixOrder::above;
  });
  return static_cast<std::size_t>(it - order_.begin());
}

std::size_t AgentPopulation::count_geq(const Estimate& s) const {
  return size() - first_not_below(s);
}

std::size_t AgentPopulation::count_gt(const Estimate& s) const {
  return size() - first_above(s);
}

SetSizes AgentPopulation::set_sizes(const Estimate& s) const {
  return {count_gt(s), count_geq(s), count_geq(s.appended(1))};
}

std::vector<std::size_t> AgentPopulation::members(const Estimate& s, bool strict) const {
  const std::size_t from = strict ? first_above(s) : first_not_below(s);
  return {order_.begin() + static_cast<std::ptrdiff_t>(from), order_.end()};
}

std::size_t AgentPopulation::max_index() const {
  if (order_.empty()) throw std::logic_error("max_index on empty population");
  return order_.back();
}

}  // namespace smax
