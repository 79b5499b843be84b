#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "smax/baselines.hpp"
#include "smax/bitseq.hpp"
#include "smax/channel.hpp"
#include "smax/protocol.hpp"

namespace smax {

/// Undirected network with a designated set of coordinators.
struct NetworkGraph {
  Graph graph;
  std::vector<std::size_t> coordinators;

  std::size_t size() const noexcept { return graph.size(); }
  bool is_coordinator(std::size_t v) const;
};

/// Text format, one item per line:
///
///     # comment
///     nodes 12              (optional; default is 1 + largest id seen)
///     coordinators 0 5      (required, at least one id)
///     0 1                   (undirected edge)
///
/// Throws std::runtime_error with the line number on malformed input.
NetworkGraph parse_topology(std::istream& in);
NetworkGraph load_topology(const std::string& path);
void write_topology(std::ostream& out, const NetworkGraph& net);

/// True iff the graph stays connected after deleting every edge with no
/// coordinator endpoint.
bool validate_cover(const NetworkGraph& net);

struct StarSubgraph {
  std::size_t coordinator = 0;
  /// Coordinator first, then its neighbors in ascending order.
  std::vector<std::size_t> members;
  /// Every edge of the network with both endpoints in `members`.
  std::vector<Edge> edges;
  bool degenerate = false;  // coordinator without neighbors
};

/// Subgraph induced by a coordinator and its neighbors. Throws
/// std::invalid_argument if `coordinator` is not one.
StarSubgraph induced_star(const NetworkGraph& net, std::size_t coordinator);

/// Scheme run inside each star: plain or error-correcting weak consensus
/// followed by the digital finishing phase.
struct SchemeConfig {
  ProtocolConfig protocol;
  NoiseModel noise;
};

struct SubrunStats {
  std::size_t round = 0;
  std::size_t coordinator = 0;
  std::size_t members = 0;
  RunResult run;
  std::size_t finishing_broadcasts = 0;
};

struct MultiCoordinatorResult {
  /// Per-node value after the last completed subrun.
  std::vector<Estimate> values;
  std::vector<SubrunStats> subruns;
  bool success = false;
};

/// Called after each subrun with the values at that moment.
using SubrunObserver =
    std::function<void(const SubrunStats&, const std::vector<Estimate>& values)>;

/// For c rounds, runs the scheme on every star in coordinator order and
/// overwrites each member's value with the star's consensus value. Each node's
/// value is a finite input of common length; fresh uniform tails are appended
/// for every subrun. Stops early and reports failure if a subrun fails.
/// Throws std::invalid_argument if the cover condition does not hold or the
/// values do not share one length.
MultiCoordinatorResult run_multi_coordinator(const NetworkGraph& net,
                                             std::vector<Estimate> values,
                                             const SchemeConfig& scheme, Rng& rng,
                                             const SubrunObserver& observer = {});

}  // namespace smax
