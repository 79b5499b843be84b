#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "smax/bitseq.hpp"
#include "smax/seeding.hpp"

namespace smax {

using Edge = std::pair<std::size_t, std::size_t>;

/// Undirected simple graph. The complete graph is kept implicit so that
/// baselines can run on thousands of nodes without an edge list.
class Graph {
 public:
  Graph() = default;

  static Graph complete(std::size_t n);
  /// Self-loops and duplicate edges are dropped. Throws std::invalid_argument
  /// for endpoints >= n.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t size() const noexcept { return n_; }
  bool implicit_complete() const noexcept { return implicit_complete_; }
  std::size_t edge_count() const noexcept;
  std::size_t degree(std::size_t v) const;

  /// Neighbors of v. Not available for the implicit complete graph.
  std::span<const std::size_t> neighbors(std::size_t v) const;
  std::span<const Edge> edges() const;

  bool connected() const;

  /// Uniformly random edge, smaller endpoint first.
  Edge sample_edge(Rng& rng) const;

 private:
  std::size_t n_ = 0;
  bool implicit_complete_ = false;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<Edge> edges_;
};

/// Per-agent gossip values (order-preserving keys) on a graph. Values only
/// ever increase and are absorbed at the global maximum.
class GossipState {
 public:
  GossipState(std::vector<std::uint64_t> values, const Graph& graph);

  /// `node` transmits; every neighbor keeps the larger value.
  void broadcast(std::size_t node);
  /// Both endpoints keep the larger of their two values.
  void exchange(std::size_t a, std::size_t b);

  std::uint64_t value(std::size_t i) const;
  std::uint64_t global_max() const noexcept { return global_max_; }
  bool consensus() const noexcept;
  std::uint64_t iterations() const noexcept { return iterations_; }

 private:
  std::vector<std::uint64_t> values_;
  const Graph* graph_;
  // On the implicit complete graph a broadcast reaches everyone, so the
  // effective value of node i is max(values_[i], floor_).
  std::uint64_t floor_ = 0;
  bool has_floor_ = false;
  std::uint64_t global_max_ = 0;
  std::size_t holders_ = 0;
  std::uint64_t iterations_ = 0;
};

struct GossipResult {
  std::uint64_t iterations = 0;
  bool consensus = false;
};

/// Random-Broadcast: a uniformly chosen node broadcasts to its neighbors until
/// every node holds the maximum. `max_iterations` == 0 means unbounded.
/// Throws std::invalid_argument on a disconnected graph.
GossipResult run_random_broadcast(std::vector<std::uint64_t> values, const Graph& graph,
                                  Rng& rng, std::uint64_t max_iterations = 0);

/// Random-Pairwise: a uniformly chosen edge's endpoints exchange and keep the
/// maximum, until consensus.
GossipResult run_random_pairwise(std::vector<std::uint64_t> values, const Graph& graph,
                                 Rng& rng, std::uint64_t max_iterations = 0);

/// ceil(ln(1/eps) / -ln(1 - 1/n)): rounds after which Random-Broadcast on the
/// complete graph has failed to reach consensus with probability <= eps.
std::uint64_t rb_iterations_for_error(std::size_t n, double epsilon);

/// Lexicographic rank of each agent, usable as a gossip value.
std::vector<std::uint64_t> ranks_of(std::span<const AgentSequence> agents,
                                    std::size_t cap = kDefaultComparisonCap);

struct FinishResult {
  /// Index into the survivor list.
  std::size_t winner = 0;
  std::size_t broadcasts = 0;
};

/// Digital round-robin among the survivors of a weak consensus: each survivor
/// multicasts its value once and everyone keeps the running maximum.
/// Requires 1 <= |survivors| <= m.
FinishResult finishing_phase(std::span<const AgentSequence> survivors, int m,
                             std::size_t cap = kDefaultComparisonCap);

}  // namespace smax
