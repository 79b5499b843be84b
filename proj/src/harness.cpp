#include "smax/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "smax/baselines.hpp"
#include "smax/csv.hpp"
#include "smax/seeding.hpp"
#include "smax/topology.hpp"

namespace smax {

const char* to_string(Scheme s) noexcept {
  switch (s) {
    case Scheme::scalablemax: return "scalablemax";
    case Scheme::scalablemax_ec: return "scalablemax-ec";
    case Scheme::rb: return "rb";
    case Scheme::rp: return "rp";
    case Scheme::multi_coordinator: return "multi-coordinator";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  for (Scheme s : {Scheme::scalablemax, Scheme::scalablemax_ec, Scheme::rb, Scheme::rp,
                   Scheme::multi_coordinator}) {
    if (name == to_string(s)) return s;
  }
  throw ConfigError("unknown scheme '" + std::string(name) +
                    "' (expected scalablemax, scalablemax-ec, rb, rp or multi-coordinator)");
}

namespace {

bool is_gossip(Scheme s) { return s == Scheme::rb || s == Scheme::rp; }

constexpr std::size_t kDefaultNodeValueBits = 16;

}  // namespace

void validate(const ExperimentConfig& c) {
  if (c.runs < 1) throw ConfigError("runs must be at least 1");
  if (c.m <= 0 || c.m % 2 != 0) throw ConfigError("m must be a positive even integer");
  if (c.threads < 1) throw ConfigError("threads must be at least 1");
  if (c.agents.empty()) throw ConfigError("agent grid is empty");
  for (std::size_t n : c.agents) {
    if (n < 1) throw ConfigError("agent count must be at least 1");
    if (n > std::numeric_limits<std::uint32_t>::max()) throw ConfigError("agent count too large");
  }
  if (c.scheme == Scheme::scalablemax_ec && c.taus.empty()) {
    throw ConfigError("scalablemax-ec needs at least one tau");
  }
  if ((c.scheme == Scheme::scalablemax || is_gossip(c.scheme)) && !c.taus.empty()) {
    throw ConfigError(std::string("tau is only valid for scalablemax-ec, not ") +
                      to_string(c.scheme));
  }
  for (int tau : c.taus) {
    if (tau < 1) throw ConfigError("tau must be at least 1");
  }
  if (!is_gossip(c.scheme)) {
    if (c.noise_db.empty()) throw ConfigError("noise grid is empty");
    for (double db : c.noise_db) {
      if (std::isnan(db) || db == std::numeric_limits<double>::infinity()) {
        throw ConfigError("noise power must be a number or -inf");
      }
    }
  }
  if (c.scheme == Scheme::multi_coordinator && c.topology_file.empty()) {
    throw ConfigError("multi-coordinator needs a topology file");
  }
}

std::vector<GridPoint> grid_points(const ExperimentConfig& c) {
  std::vector<GridPoint> points;
  if (is_gossip(c.scheme)) {
    for (std::size_t n : c.agents) {
      points.push_back({n, std::nullopt, -std::numeric_limits<double>::infinity()});
    }
    return points;
  }
  std::vector<std::optional<int>> taus;
  if (c.taus.empty()) taus.emplace_back();
  for (int t : c.taus) taus.emplace_back(t);
  for (std::size_t n : c.agents) {
    for (const auto& tau : taus) {
      for (double db : c.noise_db) points.push_back({n, tau, db});
    }
  }
  return points;
}

std::uint64_t empirical_quantile(std::vector<std::uint64_t> values, double q) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  const double pos = std::ceil(q * static_cast<double>(values.size()));
  const std::size_t idx = pos < 1 ? 0 : static_cast<std::size_t>(pos) - 1;
  return values[std::min(idx, values.size() - 1)];
}

std::vector<AgentSequence> draw_agents(std::size_t n, std::size_t prefix_length, Rng& rng) {
  Estimate shared;
  for (std::size_t k = 0; k < prefix_length; ++k) shared.push_back(static_cast<Bit>(rng() >> 63));
  std::vector<AgentSequence> agents;
  agents.reserve(n);
  for (std::size_t k = 0; k < n; ++k) agents.emplace_back(shared, rng());
  return agents;
}

double binomial_standard_error(double p, std::size_t n) noexcept {
  return n == 0 ? 0.0 : std::sqrt(p * (1 - p) / static_cast<double>(n));
}

namespace {

enum class Status : std::uint8_t { failure, success, timeout };

struct RunOutcome {
  Status status = Status::failure;
  std::uint64_t iterations = 0;
  // Survivors (or finishing broadcasts) summed over `subruns` weak consensus
  // runs; subruns is 1 on a star and 0 for gossip.
  std::uint64_t survivors = 0;
  std::uint64_t subruns = 0;
};

// Outcomes indexed [point][run].
using OutcomeTable = std::vector<std::vector<RunOutcome>>;

ProtocolConfig protocol_for(const ExperimentConfig& c, const GridPoint& p) {
  ProtocolConfig pc;
  pc.m = c.m;
  pc.tau = p.tau;
  pc.max_iterations = c.max_iterations;
  pc.initial_estimate = c.initial_estimate;
  return pc;
}

RunOutcome from_run(const RunResult& r) {
  RunOutcome o;
  o.status = r.timed_out ? Status::timeout : (r.success ? Status::success : Status::failure);
  o.iterations = r.iterations;
  o.survivors = r.survivor_count;
  o.subruns = 1;
  return o;
}

class Runner {
 public:
  Runner(const ExperimentConfig& c, std::vector<GridPoint> points)
      : c_(c), points_(std::move(points)) {
    if (c_.scheme == Scheme::multi_coordinator || (is_gossip(c_.scheme) && !c_.topology_file.empty())) {
      net_ = load_topology(c_.topology_file);
    }
  }

  const std::optional<NetworkGraph>& network() const { return net_; }

  void run_range(std::size_t begin, std::size_t end, OutcomeTable& out) const {
    for (std::size_t i = begin; i < end; ++i) {
      switch (c_.scheme) {
        case Scheme::scalablemax:
        case Scheme::scalablemax_ec:
          star_run(i, out);
          break;
        case Scheme::rb:
        case Scheme::rp:
          gossip_run(i, out);
          break;
        case Scheme::multi_coordinator:
          multi_run(i, out);
          break;
      }
    }
  }

 private:
  void star_run(std::size_t i, OutcomeTable& out) const {
    std::size_t built_for = 0;
    std::optional<AgentPopulation> population;
    for (std::size_t p = 0; p < points_.size(); ++p) {
      const GridPoint& point = points_[p];
      if (!population || built_for != point.agents) {
        Rng agent_rng = make_rng(c_.base_seed, i, StreamTag::agents);
        population.emplace(draw_agents(point.agents, c_.prefix_length, agent_rng));
        built_for = point.agents;
      }
      Rng noise_rng = make_rng(c_.base_seed, i, StreamTag::noise);
      const RunResult r = run_protocol(*population, protocol_for(c_, point),
                                       NoiseModel::from_db(point.noise_db), noise_rng);
      out[p][i] = from_run(r);
    }
  }

  void gossip_run(std::size_t i, OutcomeTable& out) const {
    for (std::size_t p = 0; p < points_.size(); ++p) {
      const std::size_t n = net_ ? net_->size() : points_[p].agents;
      Rng agent_rng = make_rng(c_.base_seed, i, StreamTag::agents);
      const auto agents = draw_agents(n, c_.prefix_length, agent_rng);
      const Graph complete = Graph::complete(n);
      const Graph& graph = net_ ? net_->graph : complete;
      Rng rng = make_rng(c_.base_seed, i, StreamTag::gossip);
      const GossipResult g = c_.scheme == Scheme::rb
                                 ? run_random_broadcast(ranks_of(agents), graph, rng, c_.max_iterations)
                                 : run_random_pairwise(ranks_of(agents), graph, rng, c_.max_iterations);
      RunOutcome o;
      o.status = g.consensus ? Status::success : Status::timeout;
      o.iterations = g.iterations;
      out[p][i] = o;
    }
  }

  void multi_run(std::size_t i, OutcomeTable& out) const {
    const std::size_t width = c_.prefix_length ? c_.prefix_length : kDefaultNodeValueBits;
    Rng value_rng = make_rng(c_.base_seed, i, StreamTag::agents);
    std::vector<Estimate> values(net_->size());
    for (auto& v : values) {
      for (std::size_t k = 0; k < width; ++k) v.push_back(static_cast<Bit>(value_rng() >> 63));
    }
    std::string best;
    for (const auto& v : values) best = std::max(best, v.to_string());

    for (std::size_t p = 0; p < points_.size(); ++p) {
      SchemeConfig scheme{protocol_for(c_, points_[p]), NoiseModel::from_db(points_[p].noise_db)};
      Rng rng = make_rng(c_.base_seed, i, StreamTag::subrun);
      const MultiCoordinatorResult r = run_multi_coordinator(*net_, values, scheme, rng);
      RunOutcome o;
      bool all_max = r.success;
      for (const auto& v : r.values) all_max = all_max && v.to_string() == best;
      bool timed_out = false;
      for (const auto& s : r.subruns) {
        o.iterations += s.run.iterations;
        o.survivors += s.finishing_broadcasts;
        timed_out = timed_out || s.run.timed_out;
      }
      o.subruns = r.subruns.size();
      o.status = all_max ? Status::success : (timed_out ? Status::timeout : Status::failure);
      out[p][i] = o;
    }
  }

  const ExperimentConfig& c_;
  std::vector<GridPoint> points_;
  std::optional<NetworkGraph> net_;
};

ExperimentRecord aggregate(const ExperimentConfig& c, const GridPoint& point,
                           std::size_t agents, const std::vector<RunOutcome>& runs) {
  ExperimentRecord rec;
  rec.scheme = c.scheme;
  rec.agents = agents;
  rec.m = c.m;
  rec.noise_power = point.noise_db;
  rec.correction = point.tau.has_value();
  rec.termination_parameter = point.tau;
  rec.runs = runs.size();
  rec.base_seed = c.base_seed;

  std::uint64_t iteration_sum = 0;
  std::uint64_t survivor_sum = 0;
  std::uint64_t subrun_sum = 0;
  std::vector<std::uint64_t> success_iterations;
  for (const auto& o : runs) {
    switch (o.status) {
      case Status::success:
        ++rec.successes;
        iteration_sum += o.iterations;
        survivor_sum += o.survivors;
        subrun_sum += o.subruns;
        success_iterations.push_back(o.iterations);
        break;
      case Status::failure:
        ++rec.failures;
        break;
      case Status::timeout:
        ++rec.timeouts;
        break;
    }
  }
  const double total = static_cast<double>(rec.runs);
  rec.success_rate = static_cast<double>(rec.successes) / total;
  rec.timeout_rate = static_cast<double>(rec.timeouts) / total;
  if (rec.successes > 0) {
    rec.average_iterations_in_successful_runs =
        static_cast<double>(iteration_sum) / static_cast<double>(rec.successes);
    if (subrun_sum > 0) {
      rec.average_survivor_count =
          static_cast<double>(survivor_sum) / static_cast<double>(subrun_sum);
    }
  }
  rec.iterations_q995 = empirical_quantile(std::move(success_iterations), 0.995);
  return rec;
}

}  // namespace

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config) {
  validate(config);
  const std::vector<GridPoint> points = grid_points(config);
  Runner runner(config, points);

  OutcomeTable table(points.size(), std::vector<RunOutcome>(config.runs));
  const std::size_t workers = std::min<std::size_t>(config.threads, config.runs);
  if (workers <= 1) {
    runner.run_range(0, config.runs, table);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (config.runs + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(config.runs, begin + chunk);
      pool.emplace_back([&, w, begin, end] {
        try {
          runner.run_range(begin, end, table);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::vector<ExperimentRecord> records;
  records.reserve(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    const std::size_t agents = runner.network() ? runner.network()->size() : points[p].agents;
    records.push_back(aggregate(config, points[p], agents, table[p]));
  }
  return records;
}

std::vector<ExperimentRecord> sweep(const ExperimentConfig& config, const std::string& out_path) {
  validate(config);
  if (grid_points(config).empty()) throw ConfigError("sweep grid is empty");
  auto records = run_experiment(config);
  std::ostringstream text;
  csv::write_records(text, records);
  csv::write_file_atomically(out_path, text.str());
  return records;
}

}  // namespace smax

namespace smax {

double parse_db(std::string_view text) {
  if (text == "-inf" || text == "none" || text == "off") {
    return -std::numeric_limits<double>::infinity();
  }
  const std::string s(text);
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("bad noise power '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw ConfigError("bad noise power '" + s + "'");
  return v;
}

std::vector<double> parse_db_range(std::string_view text) {
  const std::string s(text);
  const auto first = s.find(':');
  const auto second = first == std::string::npos ? first : s.find(':', first + 1);
  if (second == std::string::npos) throw ConfigError("noise range must be lo:hi:step, got '" + s + "'");
  const double lo = parse_db(s.substr(0, first));
  const double hi = parse_db(s.substr(first + 1, second - first - 1));
  const double step = parse_db(s.substr(second + 1));
  if (!(step > 0) || hi < lo) throw ConfigError("noise range needs lo <= hi and step > 0");
  std::vector<double> grid;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (std::size_t k = 0; k < count; ++k) {
    // Round to kill accumulated binary error in values like -5.5 + 3 * 0.1.
    grid.push_back(std::round((lo + static_cast<double>(k) * step) * 1e9) / 1e9);
  }
  return grid;
}

}  // namespace smax
