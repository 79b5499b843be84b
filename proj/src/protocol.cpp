#include "smax/protocol.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace smax {

namespace {

void require_even_m(int m) {
  if (m <= 0 || m % 2 != 0) {
    throw std::invalid_argument("m must be a positive even integer, got " + std::to_string(m));
  }
}

Decision continue_with(Branch b, Estimate next) { return {b, std::move(next)}; }

Decision terminate_with(Branch b, ConditionKind kind, Estimate reference) {
  return {b, TerminationCondition{kind, std::move(reference)}};
}

// Counter branch of the error-correcting ladder: count, and terminate once the
// count reaches tau; otherwise stay on the same estimate.
Decision count_or_stay(Branch b, CoordinatorState& state, CounterTag tag, int tau,
                       ConditionKind kind, Estimate reference) {
  int& count = state.counters[CounterKey{state.estimate.to_string(), tag}];
  ++count;
  if (count >= tau) return terminate_with(b, kind, std::move(reference));
  return continue_with(b, state.estimate);
}

}  // namespace

std::string TerminationCondition::to_string() const {
  return std::string(kind == ConditionKind::strictly_greater ? "x > " : "x >= ") + "'" +
         reference.to_string() + "'";
}

const char* to_string(Branch b) noexcept {
  switch (b) {
    case Branch::terminate_greater: return "terminate_greater";
    case Branch::terminate_geq: return "terminate_geq";
    case Branch::append_zero: return "append_zero";
    case Branch::append_one_terminate: return "append_one_terminate";
    case Branch::append_one: return "append_one";
    case Branch::ec_remove_on_protest: return "ec_remove_on_protest";
    case Branch::ec_count_greater: return "ec_count_greater";
    case Branch::ec_remove_on_activity: return "ec_remove_on_activity";
    case Branch::ec_count_geq: return "ec_count_geq";
    case Branch::ec_append_zero: return "ec_append_zero";
    case Branch::ec_count_append: return "ec_count_append";
    case Branch::ec_append_one: return "ec_append_one";
  }
  return "?";
}

int CoordinatorState::counter(const Estimate& s, CounterTag tag) const {
  auto it = counters.find(CounterKey{s.to_string(), tag});
  return it == counters.end() ? 0 : it->second;
}

Signals agent_signals(const AgentSequence& x, const Estimate& s) noexcept {
  const PrefixOrder order = compare_prefix(x, s);
  Signals out;
  out.protest = order == PrefixOrder::above;
  out.activity = order != PrefixOrder::below;
  // x >= S^1 needs x above S, or compatible with S and next digit 1.
  out.raising = order == PrefixOrder::above ||
                (order == PrefixOrder::compatible && x.digit(s.size()) == 1);
  return out;
}

SetSizes scan_set_sizes(std::span<const AgentSequence> agents, const Estimate& s) {
  SetSizes sizes;
  for (const auto& x : agents) {
    const Signals sig = agent_signals(x, s);
    sizes.protesting += sig.protest;
    sizes.active += sig.activity;
    sizes.raising += sig.raising;
  }
  return sizes;
}

Decision coordinator_step(int m, double g1, double g2, double g3, const Estimate& s) {
  require_even_m(m);
  const double low = m / 4.0;
  const double high = 3.0 * m / 4.0;

  if (g1 > low) return terminate_with(Branch::terminate_greater, ConditionKind::strictly_greater, s);
  if (g2 < high) return terminate_with(Branch::terminate_geq, ConditionKind::greater_or_equal, s);
  if (g3 < low) return continue_with(Branch::append_zero, s.appended(0));
  if (g3 < high) {
    return terminate_with(Branch::append_one_terminate, ConditionKind::greater_or_equal,
                          s.appended(1));
  }
  return continue_with(Branch::append_one, s.appended(1));
}

Decision coordinator_step_ec(int m, int tau, CoordinatorState& state, double g1, double g2,
                             double g3) {
  require_even_m(m);
  if (tau < 1) throw std::invalid_argument("tau must be at least 1");
  const double low = m / 4.0;
  const double high = 3.0 * m / 4.0;
  const Estimate& s = state.estimate;

  if (g1 > high) return continue_with(Branch::ec_remove_on_protest, s.without_last());
  if (g1 > low) {
    return count_or_stay(Branch::ec_count_greater, state, CounterTag::greater, tau,
                         ConditionKind::strictly_greater, s);
  }
  if (g2 < low) return continue_with(Branch::ec_remove_on_activity, s.without_last());
  if (g2 < high) {
    return count_or_stay(Branch::ec_count_geq, state, CounterTag::geq, tau,
                         ConditionKind::greater_or_equal, s);
  }
  if (g3 < low) return continue_with(Branch::ec_append_zero, s.appended(0));
  if (g3 < high) {
    return count_or_stay(Branch::ec_count_append, state, CounterTag::append, tau,
                         ConditionKind::greater_or_equal, s.appended(1));
  }
  return continue_with(Branch::ec_append_one, s.appended(1));
}

std::uint64_t default_max_iterations(std::size_t n) noexcept {
  const auto log_n = n <= 1 ? 0.0 : std::ceil(std::log2(static_cast<double>(n)));
  const auto log_eps = std::ceil(std::log2(1.0 / 0.005));
  return static_cast<std::uint64_t>(50.0 * (log_n + log_eps));
}

RunState initial_run_state(const ProtocolConfig& config) {
  require_even_m(config.m);
  if (config.tau && *config.tau < 1) throw std::invalid_argument("tau must be at least 1");
  RunState state;
  state.coordinator.estimate = config.initial_estimate;
  state.coordinator.tau = config.tau;
  state.agent_view = config.initial_estimate;
  return state;
}

Decision run_iteration(const AgentPopulation& agents, RunState& state,
                       const ProtocolConfig& config, const NoiseModel& noise, Rng& rng,
                       const TraceSink& trace) {
  CoordinatorState& coord = state.coordinator;

  // Instant 4t: multicast only the change since the last broadcast.
  const EstimateDelta delta = delta_between(state.agent_view, coord.estimate);
  state.agent_view = apply_delta(std::move(state.agent_view), multicast(delta));
  ++state.uses.multicast;

  const Estimate& view = state.agent_view;
  SetSizes sizes;
  double g1 = 0, g2 = 0, g3 = 0;
  if (config.path == SignalPath::sorted_counts) {
    sizes = agents.set_sizes(view);
    g1 = wmac_count(sizes.protesting, noise, rng);
    g2 = wmac_count(sizes.active, noise, rng);
    g3 = wmac_count(sizes.raising, noise, rng);
  } else {
    std::vector<Bit> protest, activity, raising;
    protest.reserve(agents.size());
    activity.reserve(agents.size());
    raising.reserve(agents.size());
    for (const auto& x : agents.agents()) {
      const Signals sig = agent_signals(x, view);
      protest.push_back(sig.protest);
      activity.push_back(sig.activity);
      raising.push_back(sig.raising);
      sizes.protesting += sig.protest;
      sizes.active += sig.activity;
      sizes.raising += sig.raising;
    }
    g1 = wmac(protest, noise, rng);
    g2 = wmac(activity, noise, rng);
    g3 = wmac(raising, noise, rng);
  }
  state.uses.wmac += 3;

  Decision decision = coord.tau ? coordinator_step_ec(config.m, *coord.tau, coord, g1, g2, g3)
                                : coordinator_step(config.m, g1, g2, g3, coord.estimate);

  if (trace) trace({coord.iteration, coord.estimate, sizes, g1, g2, g3, decision.branch});

  ++coord.iteration;
  if (!decision.terminates()) coord.estimate = decision.next_estimate();
  return decision;
}

Outcome evaluate_outcome(const TerminationCondition& condition,
                         std::span<const AgentSequence> agents, int m) {
  Outcome out;
  for (const auto& x : agents) out.survivor_count += condition.holds(x);
  out.success = out.survivor_count >= 1 && out.survivor_count <= static_cast<std::size_t>(m);
  if (out.survivor_count > 0 && !condition.holds(agents[true_max_index(agents)])) {
    throw std::logic_error("survivor set misses the greatest agent");
  }
  return out;
}

Outcome evaluate_outcome(const TerminationCondition& condition, const AgentPopulation& agents,
                         int m) {
  Outcome out;
  out.survivor_count = condition.kind == ConditionKind::strictly_greater
                           ? agents.count_gt(condition.reference)
                           : agents.count_geq(condition.reference);
  out.success = out.survivor_count >= 1 && out.survivor_count <= static_cast<std::size_t>(m);
  if (out.survivor_count > 0 && !condition.holds(agents[agents.max_index()])) {
    throw std::logic_error("survivor set misses the greatest agent");
  }
  return out;
}

RunResult run_protocol(const AgentPopulation& agents, const ProtocolConfig& config,
                       const NoiseModel& noise, Rng& rng, const TraceSink& trace) {
  RunState state = initial_run_state(config);
  const std::uint64_t cap =
      config.max_iterations ? config.max_iterations : default_max_iterations(agents.size());

  RunResult result;
  result.realized_d = agents.description_length();
  result.timed_out = true;
  while (state.coordinator.iteration < cap) {
    Decision decision = run_iteration(agents, state, config, noise, rng, trace);
    if (decision.terminates()) {
      const Outcome outcome = evaluate_outcome(decision.condition(), agents, config.m);
      result.timed_out = false;
      result.success = outcome.success;
      result.survivor_count = outcome.survivor_count;
      result.condition = decision.condition();
      break;
    }
  }
  result.iterations = state.coordinator.iteration;
  result.final_estimate = state.coordinator.estimate;
  result.uses = state.uses;
  return result;
}

RunResult run_scalablemax(const AgentPopulation& agents, int m, const NoiseModel& noise,
                          Rng& rng, std::uint64_t max_iterations) {
  ProtocolConfig config;
  config.m = m;
  config.max_iterations = max_iterations;
  return run_protocol(agents, config, noise, rng);
}

RunResult run_scalablemax_ec(const AgentPopulation& agents, int m, int tau,
                             const NoiseModel& noise, Rng& rng, std::uint64_t max_iterations) {
  ProtocolConfig config;
  config.m = m;
  config.tau = tau;
  config.max_iterations = max_iterations;
  return run_protocol(agents, config, noise, rng);
}

}  // namespace smax
