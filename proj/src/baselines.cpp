#include "smax/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace smax {

Graph Graph::complete(std::size_t n) {
  Graph g;
  g.n_ = n;
  g.implicit_complete_ = true;
  return g;
}

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
  Graph g;
  g.n_ = n;
  g.adjacency_.resize(n);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw std::invalid_argument("edge endpoint out of range");
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    g.edges_.emplace_back(u, v);
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end()), g.edges_.end());
  for (auto [u, v] : g.edges_) {
    g.adjacency_[u].push_back(v);
    g.adjacency_[v].push_back(u);
  }
  return g;
}

std::size_t Graph::edge_count() const noexcept {
  return implicit_complete_ ? n_ * (n_ - (n_ > 0 ? 1 : 0)) / 2 : edges_.size();
}

std::size_t Graph::degree(std::size_t v) const {
  if (v >= n_) throw std::out_of_range("node out of range");
  return implicit_complete_ ? n_ - 1 : adjacency_[v].size();
}

std::span<const std::size_t> Graph::neighbors(std::size_t v) const {
  if (implicit_complete_) throw std::logic_error("implicit complete graph has no adjacency list");
  return adjacency_.at(v);
}

std::span<const Edge> Graph::edges() const {
  if (implicit_complete_) throw std::logic_error("implicit complete graph has no edge list");
  return edges_;
}

bool Graph::connected() const {
  if (n_ <= 1 || implicit_complete_) return true;
  std::vector<bool> seen(n_, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t w : adjacency_[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n_;
}

Edge Graph::sample_edge(Rng& rng) const {
  if (implicit_complete_) {
    if (n_ < 2) throw std::logic_error("graph has no edges");
    std::size_t a = std::uniform_int_distribution<std::size_t>(0, n_ - 1)(rng);
    std::size_t b = std::uniform_int_distribution<std::size_t>(0, n_ - 2)(rng);
    if (b >= a) ++b;
    return a < b ? Edge{a, b} : Edge{b, a};
  }
  if (edges_.empty()) throw std::logic_error("graph has no edges");
  return edges_[std::uniform_int_distribution<std::size_t>(0, edges_.size() - 1)(rng)];
}

GossipState::GossipState(std::vector<std::uint64_t> values, const Graph& graph)
    : values_(std::move(values)), graph_(&graph) {
  if (values_.size() != graph.size()) {
    throw std::invalid_argument("one gossip value per graph node required");
  }
  if (!values_.empty()) global_max_ = *std::max_element(values_.begin(), values_.end());
  holders_ = static_cast<std::size_t>(std::count(values_.begin(), values_.end(), global_max_));
}

std::uint64_t GossipState::value(std::size_t i) const {
  const std::uint64_t own = values_.at(i);
  return has_floor_ ? std::max(own, floor_) : own;
}

bool GossipState::consensus() const noexcept {
  return holders_ == values_.size() || (has_floor_ && floor_ == global_max_);
}

void GossipState::broadcast(std::size_t node) {
  ++iterations_;
  const std::uint64_t v = value(node);
  if (graph_->implicit_complete()) {
    // Every other node now holds at least v; node itself already does.
    floor_ = has_floor_ ? std::max(floor_, v) : v;
    has_floor_ = true;
    return;
  }
  for (std::size_t w : graph_->neighbors(node)) {
    if (values_[w] < v) {
      if (v == global_max_) ++holders_;
      values_[w] = v;
    }
  }
}

void GossipState::exchange(std::size_t a, std::size_t b) {
  ++iterations_;
  const std::uint64_t v = std::max(value(a), value(b));
  for (std::size_t i : {a, b}) {
    if (values_[i] < v) {
      if (v == global_max_) ++holders_;
      values_[i] = v;
    }
  }
}

namespace {

void require_connected(const Graph& graph) {
  if (!graph.connected()) throw std::invalid_argument("gossip requires a connected graph");
}

std::uint64_t effective_cap(std::uint64_t max_iterations) {
  return max_iterations ? max_iterations : std::numeric_limits<std::uint64_t>::max();
}

}  // namespace

GossipResult run_random_broadcast(std::vector<std::uint64_t> values, const Graph& graph,
                                  Rng& rng, std::uint64_t max_iterations) {
  require_connected(graph);
  GossipState state(std::move(values), graph);
  const std::uint64_t cap = effective_cap(max_iterations);
  std::uniform_int_distribution<std::size_t> pick(0, graph.size() ? graph.size() - 1 : 0);
  while (!state.consensus() && state.iterations() < cap) state.broadcast(pick(rng));
  return {state.iterations(), state.consensus()};
}

GossipResult run_random_pairwise(std::vector<std::uint64_t> values, const Graph& graph,
                                 Rng& rng, std::uint64_t max_iterations) {
  require_connected(graph);
  GossipState state(std::move(values), graph);
  const std::uint64_t cap = effective_cap(max_iterations);
  while (!state.consensus() && state.iterations() < cap) {
    const auto [a, b] = graph.sample_edge(rng);
    state.exchange(a, b);
  }
  return {state.iterations(), state.consensus()};
}

std::uint64_t rb_iterations_for_error(std::size_t n, double epsilon) {
  if (n < 2) throw std::invalid_argument("rb_iterations_for_error needs n >= 2");
  if (!(epsilon > 0 && epsilon < 1)) throw std::invalid_argument("epsilon must be in (0, 1)");
  const double rounds = std::log(1 / epsilon) / -std::log1p(-1.0 / static_cast<double>(n));
  return static_cast<std::uint64_t>(std::ceil(rounds));
}

std::vector<std::uint64_t> ranks_of(std::span<const AgentSequence> agents, std::size_t cap) {
  std::vector<std::size_t> order(agents.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return compare(agents[a], agents[b], cap) < 0;
  });
  std::vector<std::uint64_t> ranks(agents.size());
  for (std::size_t r = 0; r < order.size(); ++r) ranks[order[r]] = r;
  return ranks;
}

FinishResult finishing_phase(std::span<const AgentSequence> survivors, int m,
                             std::size_t cap) {
  if (survivors.empty() || survivors.size() > static_cast<std::size_t>(m)) {
    throw std::invalid_argument("finishing phase needs between 1 and m survivors");
  }
  FinishResult result;
  for (std::size_t i = 0; i < survivors.size(); ++i) {
    ++result.broadcasts;
    if (i > 0 && compare(survivors[i], survivors[result.winner], cap) > 0) result.winner = i;
  }
  return result;
}

}  // namespace smax
