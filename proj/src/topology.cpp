#include "smax/topology.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace smax {

bool NetworkGraph::is_coordinator(std::size_t v) const {
  return std::find(coordinators.begin(), coordinators.end(), v) != coordinators.end();
}

NetworkGraph parse_topology(std::istream& in) {
  std::vector<Edge> edges;
  std::vector<std::size_t> coordinators;
  std::size_t declared_nodes = 0;
  bool have_nodes = false;
  bool have_coordinators = false;
  std::size_t largest = 0;
  bool any_id = false;

  auto fail = [](std::size_t line_no, const std::string& what) {
    throw std::runtime_error("topology line " + std::to_string(line_no) + ": " + what);
  };
  auto note_id = [&](std::size_t id) {
    largest = any_id ? std::max(largest, id) : id;
    any_id = true;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string head;
    if (!(fields >> head)) continue;

    if (head == "nodes") {
      if (!(fields >> declared_nodes)) fail(line_no, "expected node count");
      have_nodes = true;
    } else if (head == "coordinators") {
      std::size_t id;
      while (fields >> id) {
        coordinators.push_back(id);
        note_id(id);
      }
      if (!fields.eof()) fail(line_no, "bad coordinator id");
      have_coordinators = true;
    } else {
      std::size_t u, v;
      std::istringstream edge_fields(line);
      if (!(edge_fields >> u >> v)) fail(line_no, "expected 'u v'");
      std::string extra;
      if (edge_fields >> extra) fail(line_no, "trailing text after edge");
      edges.emplace_back(u, v);
      note_id(u);
      note_id(v);
    }
  }
  if (!have_coordinators || coordinators.empty()) {
    throw std::runtime_error("topology: missing 'coordinators' line");
  }
  const std::size_t n = have_nodes ? declared_nodes : largest + 1;
  if (any_id && largest >= n) {
    throw std::runtime_error("topology: node id " + std::to_string(largest) +
                             " exceeds declared node count " + std::to_string(n));
  }
  // Subruns are scheduled in file order.
  auto sorted = coordinators;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::runtime_error("topology: duplicate coordinator id");
  }
  return {Graph::from_edges(n, edges), std::move(coordinators)};
}

NetworkGraph load_topology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open topology file '" + path + "'");
  try {
    return parse_topology(in);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_topology(std::ostream& out, const NetworkGraph& net) {
  out << "nodes " << net.size() << "\ncoordinators";
  for (std::size_t c : net.coordinators) out << ' ' << c;
  out << '\n';
  for (auto [u, v] : net.graph.edges()) out << u << ' ' << v << '\n';
}

bool validate_cover(const NetworkGraph& net) {
  std::vector<Edge> kept;
  for (auto [u, v] : net.graph.edges()) {
    if (net.is_coordinator(u) || net.is_coordinator(v)) kept.emplace_back(u, v);
  }
  return Graph::from_edges(net.size(), kept).connected();
}

StarSubgraph induced_star(const NetworkGraph& net, std::size_t coordinator) {
  if (!net.is_coordinator(coordinator)) {
    throw std::invalid_argument("node " + std::to_string(coordinator) + " is not a coordinator");
  }
  StarSubgraph star;
  star.coordinator = coordinator;
  auto nbrs = net.graph.neighbors(coordinator);
  std::vector<std::size_t> sorted(nbrs.begin(), nbrs.end());
  std::sort(sorted.begin(), sorted.end());
  star.members.push_back(coordinator);
  star.members.insert(star.members.end(), sorted.begin(), sorted.end());
  star.degenerate = sorted.empty();

  std::vector<bool> inside(net.size(), false);
  for (std::size_t v : star.members) inside[v] = true;
  for (auto [u, v] : net.graph.edges()) {
    if (inside[u] && inside[v]) star.edges.emplace_back(u, v);
  }
  return star;
}

MultiCoordinatorResult run_multi_coordinator(const NetworkGraph& net,
                                             std::vector<Estimate> values,
                                             const SchemeConfig& scheme, Rng& rng,
                                             const SubrunObserver& observer) {
  if (values.size() != net.size()) {
    throw std::invalid_argument("one input value per node required");
  }
  if (!validate_cover(net)) {
    throw std::invalid_argument("coordinators do not cover the network");
  }
  for (const auto& v : values) {
    if (v.size() != values.front().size()) {
      throw std::invalid_argument("all node values must have the same length");
    }
  }

  std::vector<StarSubgraph> stars;
  for (std::size_t c : net.coordinators) stars.push_back(induced_star(net, c));

  MultiCoordinatorResult result;
  result.success = true;
  const std::size_t c = stars.size();
  for (std::size_t round = 1; round <= c && result.success; ++round) {
    for (const auto& star : stars) {
      std::vector<AgentSequence> agents;
      agents.reserve(star.members.size());
      for (std::size_t v : star.members) agents.emplace_back(values[v], rng());
      AgentPopulation population(std::move(agents));

      SubrunStats stats;
      stats.round = round;
      stats.coordinator = star.coordinator;
      stats.members = star.members.size();
      stats.run = run_protocol(population, scheme.protocol, scheme.noise, rng);

      if (!stats.run.success) {
        result.success = false;
        result.subruns.push_back(std::move(stats));
        if (observer) observer(result.subruns.back(), values);
        break;
      }

      const auto& cond = *stats.run.condition;
      const auto local = population.members(cond.reference,
                                            cond.kind == ConditionKind::strictly_greater);
      std::vector<AgentSequence> survivors;
      survivors.reserve(local.size());
      for (std::size_t i : local) survivors.push_back(population[i]);
      const FinishResult finish = finishing_phase(survivors, scheme.protocol.m);
      stats.finishing_broadcasts = finish.broadcasts;

      const Estimate consensus = values[star.members[local[finish.winner]]];
      for (std::size_t v : star.members) values[v] = consensus;

      result.subruns.push_back(std::move(stats));
      if (observer) observer(result.subruns.back(), values);
    }
  }
  result.values = std::move(values);
  return result;
}

}  // namespace smax
