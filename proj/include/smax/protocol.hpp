#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>

#include "smax/bitseq.hpp"
#include "smax/channel.hpp"
#include "smax/population.hpp"
#include "smax/seeding.hpp"

namespace smax {

// ---------------------------------------------------------------------------
// Termination conditions and decisions

enum class ConditionKind { strictly_greater, greater_or_equal };

/// phi(x) = x > S or phi(x) = x >= S.
struct TerminationCondition {
  ConditionKind kind = ConditionKind::greater_or_equal;
  Estimate reference;

  bool holds(const AgentSequence& x) const noexcept {
    return kind == ConditionKind::strictly_greater ? is_gt(x, reference)
                                                   : is_geq(x, reference);
  }

  std::string to_string() const;

  friend bool operator==(const TerminationCondition&, const TerminationCondition&) = default;
};

/// Which arm of a coordinator decision ladder fired. The first five belong to
/// the plain scheme, the rest to the error-correcting one.
enum class Branch {
  terminate_greater,        // g1 > m/4
  terminate_geq,            // g2 < 3m/4
  append_zero,              // g3 < m/4
  append_one_terminate,     // g3 < 3m/4, terminate on S^1
  append_one,               // otherwise
  ec_remove_on_protest,     // g1 > 3m/4
  ec_count_greater,         // g1 > m/4
  ec_remove_on_activity,    // g2 < m/4
  ec_count_geq,             // g2 < 3m/4
  ec_append_zero,           // g3 < m/4
  ec_count_append,          // g3 < 3m/4
  ec_append_one,            // otherwise
};

const char* to_string(Branch b) noexcept;

struct Decision {
  Branch branch;
  /// Next estimate, or the condition the coordinator terminated with.
  std::variant<Estimate, TerminationCondition> outcome;

  bool terminates() const noexcept {
    return std::holds_alternative<TerminationCondition>(outcome);
  }
  const Estimate& next_estimate() const { return std::get<Estimate>(outcome); }
  const TerminationCondition& condition() const {
    return std::get<TerminationCondition>(outcome);
  }
};

// ---------------------------------------------------------------------------
// Coordinator state

enum class CounterTag { greater, geq, append };

struct CounterKey {
  std::string estimate;
  CounterTag tag;

  friend auto operator<=>(const CounterKey&, const CounterKey&) = default;
};

struct CoordinatorState {
  Estimate estimate;
  std::uint64_t iteration = 0;
  /// Termination counters T(S, cond); absent entries are zero.
  std::map<CounterKey, int> counters;
  /// Termination threshold of the error-correcting scheme; empty for the plain
  /// scheme.
  std::optional<int> tau;

  int counter(const Estimate& s, CounterTag tag) const;
};

// ---------------------------------------------------------------------------
// Agent side

struct Signals {
  Bit protest = 0;   // x > S
  Bit activity = 0;  // x >= S
  Bit raising = 0;   // x >= S^1

  friend bool operator==(const Signals&, const Signals&) = default;
};

Signals agent_signals(const AgentSequence& x, const Estimate& s) noexcept;

/// Set sizes by asking every agent for its signals.
SetSizes scan_set_sizes(std::span<const AgentSequence> agents, const Estimate& s);

// ---------------------------------------------------------------------------
// Coordinator post-processing

/// Plain ladder. Throws std::invalid_argument unless m is even and positive.
Decision coordinator_step(int m, double g1, double g2, double g3, const Estimate& s);

/// Error-correcting ladder. Updates the counters in `state` and reads
/// state.estimate as S(t). Throws std::invalid_argument for odd m or tau < 1.
Decision coordinator_step_ec(int m, int tau, CoordinatorState& state, double g1,
                             double g2, double g3);

// ---------------------------------------------------------------------------
// Runs

/// How the three multiple-access sums are formed: by binary search over the
/// sorted population, or by collecting every agent's signal. Both consume the
/// noise stream identically.
enum class SignalPath { sorted_counts, per_agent };

struct ProtocolConfig {
  int m = 8;
  /// Present selects the error-correcting scheme.
  std::optional<int> tau;
  /// 0 selects default_max_iterations(n).
  std::uint64_t max_iterations = 0;
  Estimate initial_estimate;
  SignalPath path = SignalPath::sorted_counts;
};

/// 50 * (ceil(log2 n) + ceil(log2(1 / 0.005))).
std::uint64_t default_max_iterations(std::size_t n) noexcept;

struct ChannelUses {
  std::uint64_t multicast = 0;
  std::uint64_t wmac = 0;
};

struct RunState {
  CoordinatorState coordinator;
  /// The estimate as reconstructed by the agents from multicast deltas.
  Estimate agent_view;
  ChannelUses uses;
};

RunState initial_run_state(const ProtocolConfig& config);

/// One iteration as seen from outside, for tracing and property checks.
struct IterationTrace {
  std::uint64_t iteration;
  Estimate estimate;
  SetSizes sizes;
  double g1, g2, g3;
  Branch branch;
};

using TraceSink = std::function<void(const IterationTrace&)>;

/// One multicast of the estimate change followed by the protest, activity and
/// raising uses of the channel, then the coordinator's decision. Applies a
/// continue decision to state.coordinator.estimate.
Decision run_iteration(const AgentPopulation& agents, RunState& state,
                       const ProtocolConfig& config, const NoiseModel& noise, Rng& rng,
                       const TraceSink& trace = {});

struct Outcome {
  std::size_t survivor_count = 0;
  bool success = false;
};

/// Survivor set size and success (1 <= |M| <= m). Throws std::logic_error if
/// M is nonempty and misses the greatest agent.
Outcome evaluate_outcome(const TerminationCondition& condition,
                         std::span<const AgentSequence> agents, int m);
Outcome evaluate_outcome(const TerminationCondition& condition,
                         const AgentPopulation& agents, int m);

struct RunResult {
  bool success = false;
  bool timed_out = false;
  std::size_t survivor_count = 0;
  std::uint64_t iterations = 0;
  /// Empty on timeout.
  std::optional<TerminationCondition> condition;
  std::size_t realized_d = 0;
  Estimate final_estimate;
  ChannelUses uses;
};

RunResult run_protocol(const AgentPopulation& agents, const ProtocolConfig& config,
                       const NoiseModel& noise, Rng& rng, const TraceSink& trace = {});

RunResult run_scalablemax(const AgentPopulation& agents, int m, const NoiseModel& noise,
                          Rng& rng, std::uint64_t max_iterations = 0);

RunResult run_scalablemax_ec(const AgentPopulation& agents, int m, int tau,
                             const NoiseModel& noise, Rng& rng,
                             std::uint64_t max_iterations = 0);

}  // namespace smax
