#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "smax/bitseq.hpp"
#include "smax/protocol.hpp"

namespace smax {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Scheme { scalablemax, scalablemax_ec, rb, rp, multi_coordinator };

const char* to_string(Scheme s) noexcept;
/// Accepts the names printed by to_string. Throws ConfigError otherwise.
Scheme parse_scheme(std::string_view name);

/// One experiment, possibly over a grid of agent counts, thresholds and noise
/// powers. Noise power -infinity is the noiseless channel.
struct ExperimentConfig {
  Scheme scheme = Scheme::scalablemax;
  std::vector<std::size_t> agents{1000};
  int m = 8;
  /// Grid of thresholds; must be nonempty exactly for scalablemax-ec (and
  /// optionally set for multi-coordinator to select the error-correcting
  /// scheme inside each star).
  std::vector<int> taus;
  std::vector<double> noise_db{0.0};
  std::size_t runs = 10000;
  std::uint64_t base_seed = 1;
  /// Leading bits shared by all agents before their uniform tails; for
  /// multi-coordinator the width of each node's random input (0 selects 16).
  std::size_t prefix_length = 0;
  /// 0 selects the protocol default; for rb/rp a nonzero value is the round
  /// budget after which a run counts as failed.
  std::uint64_t max_iterations = 0;
  Estimate initial_estimate;
  /// Edge-list file; required for multi-coordinator, optional graph for rb/rp.
  std::string topology_file;
  unsigned threads = 1;
};

/// Throws ConfigError describing the first problem found.
void validate(const ExperimentConfig& config);

struct GridPoint {
  std::size_t agents = 0;
  std::optional<int> tau;
  double noise_db = 0;
};

/// Cartesian product agents x tau x noise, in that nesting order. Baselines
/// ignore the tau and noise axes.
std::vector<GridPoint> grid_points(const ExperimentConfig& config);

struct ExperimentRecord {
  Scheme scheme = Scheme::scalablemax;
  std::size_t agents = 0;
  int m = 0;
  double noise_power = 0;
  bool correction = false;
  std::optional<int> termination_parameter;
  std::size_t runs = 0;
  double success_rate = 0;
  /// Empty when no run succeeded.
  std::optional<double> average_iterations_in_successful_runs;
  /// Mean |M| over successful runs (= finishing-phase broadcasts); empty for
  /// the gossip baselines.
  std::optional<double> average_survivor_count;
  double timeout_rate = 0;
  std::uint64_t base_seed = 0;

  std::size_t successes = 0;
  std::size_t failures = 0;
  std::size_t timeouts = 0;
  /// Empirical 99.5% quantile of iterations among successful runs.
  std::uint64_t iterations_q995 = 0;
};

/// Runs `config.runs` independent runs per grid point. Run i draws its agents
/// and its noise from streams seeded by (base_seed, i), so every grid point
/// sees the same instances. Results do not depend on `threads`.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config);

/// Like run_experiment but rejects configs with an empty grid axis and writes
/// the records to `out_path` atomically.
std::vector<ExperimentRecord> sweep(const ExperimentConfig& config, const std::string& out_path);

/// n agents sharing a random `prefix_length`-bit prefix, each followed by its
/// own uniform tail. All randomness comes from `rng`.
std::vector<AgentSequence> draw_agents(std::size_t n, std::size_t prefix_length, Rng& rng);

/// Noise power in dB; "-inf", "none" and "off" select the noiseless channel.
/// Throws ConfigError on anything else that is not a number.
double parse_db(std::string_view text);

/// "lo:hi:step" inclusive of hi (up to rounding). Throws ConfigError.
std::vector<double> parse_db_range(std::string_view text);

/// Smallest value v such that at least a fraction q of `values` is <= v.
std::uint64_t empirical_quantile(std::vector<std::uint64_t> values, double q);

/// Binomial standard error sqrt(p (1 - p) / n).
double binomial_standard_error(double p, std::size_t n) noexcept;

}  // namespace smax
