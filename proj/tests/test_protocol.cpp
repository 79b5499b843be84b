#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "smax/analysis.hpp"
#include "smax/harness.hpp"
#include "smax/protocol.hpp"
#include "support/oracles.hpp"

namespace smax {
namespace {

Estimate est(const char* bits) { return Estimate::from_string(bits); }

AgentSequence with_prefix(const char* bits, std::uint64_t seed = 3) {
  return AgentSequence(Estimate::from_string(bits), seed);
}

oracle::Verdict verdict(const Decision& d) {
  if (d.terminates()) {
    return {true, d.condition().kind == ConditionKind::strictly_greater,
            d.condition().reference.to_string()};
  }
  return {false, false, d.next_estimate().to_string()};
}

AgentPopulation random_population(std::size_t n, std::uint64_t seed, std::size_t prefix = 0) {
  Rng rng(seed);
  return AgentPopulation(draw_agents(n, prefix, rng));
}

// Uniform noise on the open interval (-m/4, m/4).
NoiseModel bounded_noise(int m) {
  const double half = m / 4.0;
  const double lo = std::nextafter(-half, 0.0);
  return NoiseModel::custom(
      "bounded",
      [lo](Rng& rng) { return std::uniform_real_distribution<double>(lo, -lo)(rng); },
      [half](double c) { return std::clamp((c + half) / (2 * half), 0.0, 1.0); });
}

bool is_correction(Branch b) {
  return b == Branch::ec_remove_on_protest || b == Branch::ec_remove_on_activity;
}

TEST(AgentSignals, Examples) {
  EXPECT_EQ(agent_signals(with_prefix("11"), est("10")), (Signals{1, 1, 1}));
  EXPECT_EQ(agent_signals(with_prefix("100"), est("10")), (Signals{0, 1, 0}));
  EXPECT_EQ(agent_signals(with_prefix("0"), est("1")), (Signals{0, 0, 0}));
}

TEST(AgentSignals, MatchOracleAndPopulation) {
  Rng rng(4);
  const auto pop = random_population(60, 17);
  for (int trial = 0; trial < 300; ++trial) {
    // Estimates drawn from agent prefixes hit every case.
    const auto& x = pop[trial % pop.size()];
    Estimate s = x.prefix(std::uniform_int_distribution<std::size_t>(0, 9)(rng));
    if (trial % 3 == 0 && !s.empty()) {
      s.pop_back();
      s.push_back(static_cast<Bit>(rng() & 1));
    }
    const auto ref = oracle::counts(pop.agents(), s.to_string());
    const SetSizes scanned = scan_set_sizes(pop.agents(), s);
    const SetSizes fast = pop.set_sizes(s);
    EXPECT_EQ(fast, scanned);
    EXPECT_EQ(fast.protesting, ref.gt);
    EXPECT_EQ(fast.active, ref.geq);
    EXPECT_EQ(fast.raising, ref.geq_one);
    EXPECT_LE(fast.raising, fast.active);
    EXPECT_LE(fast.protesting, fast.raising);
  }
}

TEST(CoordinatorStep, LadderExamples) {
  const Estimate s = est("10");
  const auto gt = coordinator_step(8, 3.0, 0.0, 0.0, s);
  EXPECT_EQ(gt.branch, Branch::terminate_greater);
  EXPECT_EQ(gt.condition(), (TerminationCondition{ConditionKind::strictly_greater, s}));

  const auto geq = coordinator_step(8, 1.0, 5.0, 0.0, s);
  EXPECT_EQ(geq.condition(), (TerminationCondition{ConditionKind::greater_or_equal, s}));

  const auto zero = coordinator_step(8, 1.0, 7.0, 1.0, s);
  EXPECT_FALSE(zero.terminates());
  EXPECT_EQ(zero.next_estimate(), est("100"));

  const auto one_term = coordinator_step(8, 1.0, 7.0, 4.0, s);
  EXPECT_EQ(one_term.condition(),
            (TerminationCondition{ConditionKind::greater_or_equal, est("101")}));

  const auto one = coordinator_step(8, 1.0, 7.0, 6.5, s);
  EXPECT_FALSE(one.terminates());
  EXPECT_EQ(one.next_estimate(), est("101"));
}

TEST(CoordinatorStep, RejectsOddM) {
  EXPECT_THROW(coordinator_step(7, 0, 0, 0, {}), std::invalid_argument);
  EXPECT_THROW(coordinator_step(0, 0, 0, 0, {}), std::invalid_argument);
  CoordinatorState state;
  EXPECT_THROW(coordinator_step_ec(5, 2, state, 0, 0, 0), std::invalid_argument);
  EXPECT_THROW(coordinator_step_ec(8, 0, state, 0, 0, 0), std::invalid_argument);
}

TEST(CoordinatorStepEc, Examples) {
  CoordinatorState state;
  state.estimate = est("10");
  const auto removed = coordinator_step_ec(8, 2, state, 6.5, 0, 0);
  EXPECT_EQ(removed.branch, Branch::ec_remove_on_protest);
  EXPECT_EQ(removed.next_estimate(), est("1"));

  state.counters[{"10", CounterTag::greater}] = 1;
  const auto term = coordinator_step_ec(8, 2, state, 3.0, 0, 0);
  EXPECT_EQ(state.counter(est("10"), CounterTag::greater), 2);
  EXPECT_EQ(term.condition(), (TerminationCondition{ConditionKind::strictly_greater, est("10")}));

  CoordinatorState empty;
  const auto noop = coordinator_step_ec(8, 2, empty, 1.0, 1.5, 0);
  EXPECT_EQ(noop.branch, Branch::ec_remove_on_activity);
  EXPECT_EQ(noop.next_estimate(), Estimate{});

  const auto up = coordinator_step_ec(8, 2, state, 1.0, 7.0, 7.0);
  EXPECT_EQ(up.next_estimate(), est("101"));
}

TEST(CoordinatorStepEc, CounterBelowTauStays) {
  CoordinatorState state;
  state.estimate = est("0");
  const auto first = coordinator_step_ec(8, 3, state, 1.0, 7.0, 4.0);
  EXPECT_EQ(first.branch, Branch::ec_count_append);
  EXPECT_EQ(first.next_estimate(), est("0"));
  EXPECT_EQ(state.counter(est("0"), CounterTag::append), 1);
  coordinator_step_ec(8, 3, state, 1.0, 7.0, 4.0);
  const auto third = coordinator_step_ec(8, 3, state, 1.0, 7.0, 4.0);
  EXPECT_EQ(third.condition(), (TerminationCondition{ConditionKind::greater_or_equal, est("01")}));
}

TEST(CoordinatorStep, MatchesOracleOnRandomInputs) {
  Rng rng(12);
  std::uniform_real_distribution<double> g(-3.0, 12.0);
  for (int m : {2, 4, 8, 10}) {
    oracle::EcLadder ref{m, 3, {}};
    CoordinatorState state;
    state.tau = 3;
    for (int i = 0; i < 5000; ++i) {
      const double g1 = g(rng), g2 = g(rng), g3 = g(rng);
      EXPECT_EQ(verdict(coordinator_step(m, g1, g2, g3, state.estimate)),
                oracle::plain(m, g1, g2, g3, state.estimate.to_string()));
      const auto expected = ref.step(g1, g2, g3, state.estimate.to_string());
      const auto got = coordinator_step_ec(m, 3, state, g1, g2, g3);
      ASSERT_EQ(verdict(got), expected);
      if (got.terminates()) {
        state = CoordinatorState{};
        state.tau = 3;
        ref.t.clear();
      } else {
        state.estimate = got.next_estimate();
      }
    }
  }
}

TEST(CoordinatorStep, ExactlyOneBranch) {
  // Every point of a dense grid lands in one arm of each ladder.
  std::vector<double> axis;
  for (double v = -1; v <= 9; v += 0.25) axis.push_back(v);
  int plain_counts[5] = {}, ec_counts[7] = {};
  for (double g1 : axis)
    for (double g2 : axis)
      for (double g3 : axis) {
        const auto b = coordinator_step(8, g1, g2, g3, est("1")).branch;
        ++plain_counts[static_cast<int>(b)];
        CoordinatorState state;
        state.estimate = est("1");
        const auto e = coordinator_step_ec(8, 2, state, g1, g2, g3).branch;
        ++ec_counts[static_cast<int>(e) - static_cast<int>(Branch::ec_remove_on_protest)];
      }
  for (int c : plain_counts) EXPECT_GT(c, 0);
  for (int c : ec_counts) EXPECT_GT(c, 0);
}

TEST(RunIteration, SingleAgentHandTrace) {
  AgentPopulation pop({with_prefix("1")});
  ProtocolConfig config;
  config.m = 2;
  RunState state = initial_run_state(config);
  Rng rng(1);
  IterationTrace seen{};
  const auto d = run_iteration(pop, state, config, NoiseModel::zero(), rng,
                               [&](const IterationTrace& t) { seen = t; });
  EXPECT_EQ(seen.g1, 0.0);
  EXPECT_EQ(seen.g2, 1.0);
  EXPECT_EQ(d.condition(), (TerminationCondition{ConditionKind::greater_or_equal, {}}));
  EXPECT_EQ(state.coordinator.iteration, 1u);
  EXPECT_EQ(state.uses.multicast, 1u);
  EXPECT_EQ(state.uses.wmac, 3u);
}

TEST(RunIteration, EightAgentsHandTrace) {
  std::vector<AgentSequence> agents;
  const char* prefixes[] = {"0", "1", "1", "0", "1", "0", "0", "1"};
  for (std::uint64_t i = 0; i < 8; ++i) agents.emplace_back(Estimate::from_string(prefixes[i]), i);
  // Extra ones beyond the first digit keep the agents distinct.
  AgentPopulation pop(agents);
  ProtocolConfig config;
  RunState state = initial_run_state(config);
  Rng rng(1);
  IterationTrace seen{};
  run_iteration(pop, state, config, NoiseModel::zero(), rng,
                [&](const IterationTrace& t) { seen = t; });
  EXPECT_EQ(seen.g1, 0.0);
  EXPECT_EQ(seen.g2, 8.0);
  EXPECT_EQ(seen.g3, 4.0);
}

TEST(RunIteration, NoiselessDecisionIsDeterministic) {
  const auto pop = random_population(50, 5);
  ProtocolConfig config;
  Rng a(1), b(999);
  const auto x = run_protocol(pop, config, NoiseModel::zero(), a);
  const auto y = run_protocol(pop, config, NoiseModel::zero(), b);
  EXPECT_EQ(x.condition, y.condition);
  EXPECT_EQ(x.iterations, y.iterations);
}

TEST(RunScalableMax, SingleAgent) {
  AgentPopulation pop({AgentSequence(9)});
  Rng rng(1);
  const auto r = run_scalablemax(pop, 2, NoiseModel::zero(), rng);
  EXPECT_TRUE(r.success);
  EXPECT_EQ(r.survivor_count, 1u);
}

TEST(RunScalableMax, NoiselessSucceedsWithinDepth) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto pop = random_population(100, seed);
    Rng rng(seed);
    const auto r = run_scalablemax(pop, 8, NoiseModel::zero(), rng);
    ASSERT_TRUE(r.success) << seed;
    EXPECT_LE(r.iterations, r.realized_d + 1) << seed;
    EXPECT_EQ(r.realized_d, oracle::description_length(pop.agents()));
    EXPECT_FALSE(r.timed_out);
  }
}

TEST(RunScalableMax, BoundedNoiseKeepsGoodState) {
  for (int m : {2, 4, 8}) {
    const NoiseModel noise = bounded_noise(m);
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
      const auto pop = random_population(64, seed * 7 + m, seed % 3);
      ProtocolConfig config;
      config.m = m;
      Rng rng(seed);
      std::size_t longest = 0;
      const auto r = run_protocol(pop, config, noise, rng, [&](const IterationTrace& t) {
        EXPECT_TRUE(analysis::is_good_state(pop.agents(), t.estimate, m)) << t.estimate.to_string();
        longest = std::max(longest, t.estimate.size());
      });
      ASSERT_TRUE(r.success) << m << ' ' << seed;
      EXPECT_LE(r.iterations, r.realized_d + 1);
      EXPECT_LE(longest, r.realized_d);
    }
  }
}

TEST(RunScalableMax, SignalPathsAgree) {
  const NoiseModel noise = NoiseModel::from_db(3.0);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto pop = random_population(80, seed);
    for (std::optional<int> tau : {std::optional<int>{}, std::optional<int>{3}}) {
      std::vector<IterationTrace> fast, slow;
      ProtocolConfig config;
      config.tau = tau;
      Rng a(seed), b(seed);
      const auto r1 = run_protocol(pop, config, noise, a,
                                   [&](const IterationTrace& t) { fast.push_back(t); });
      config.path = SignalPath::per_agent;
      const auto r2 = run_protocol(pop, config, noise, b,
                                   [&](const IterationTrace& t) { slow.push_back(t); });
      ASSERT_EQ(fast.size(), slow.size());
      for (std::size_t i = 0; i < fast.size(); ++i) {
        EXPECT_EQ(fast[i].estimate, slow[i].estimate);
        EXPECT_EQ(fast[i].sizes, slow[i].sizes);
        EXPECT_EQ(fast[i].g1, slow[i].g1);
        EXPECT_EQ(fast[i].g2, slow[i].g2);
        EXPECT_EQ(fast[i].g3, slow[i].g3);
      }
      EXPECT_EQ(r1.success, r2.success);
      EXPECT_EQ(r1.condition, r2.condition);
    }
  }
}

TEST(RunScalableMax, TraceFollowsOracleAndOneDigitSteps) {
  const NoiseModel noise = NoiseModel::from_db(6.0);
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto pop = random_population(200, seed);
    ProtocolConfig config;
    config.tau = 4;
    oracle::EcLadder ref{8, 4, {}};
    std::optional<Estimate> prev;
    Rng rng(seed);
    run_protocol(pop, config, noise, rng, [&](const IterationTrace& t) {
      const auto c = oracle::counts(pop.agents(), t.estimate.to_string());
      EXPECT_EQ(t.sizes.protesting, c.gt);
      EXPECT_EQ(t.sizes.active, c.geq);
      EXPECT_EQ(t.sizes.raising, c.geq_one);
      if (prev) {
        EXPECT_NO_THROW(delta_between(*prev, t.estimate));
      }
      const auto v = ref.step(t.g1, t.g2, t.g3, t.estimate.to_string());
      if (!v.terminate) prev = Estimate::from_string(v.estimate);
    });
  }
}

TEST(RunScalableMax, ChannelAccounting) {
  const auto pop = random_population(300, 2);
  Rng rng(2);
  const auto r = run_scalablemax_ec(pop, 8, 5, NoiseModel::from_db(8.0), rng);
  ASSERT_GT(r.iterations, 0u);
  EXPECT_EQ(r.uses.multicast, r.iterations);
  EXPECT_EQ(r.uses.wmac, 3 * r.iterations);
}

TEST(RunScalableMax, TimeoutIsUnsuccessful) {
  const auto pop = random_population(1000, 3);
  Rng rng(3);
  const auto r = run_scalablemax_ec(pop, 8, 5, NoiseModel::zero(), rng, 2);
  EXPECT_TRUE(r.timed_out);
  EXPECT_FALSE(r.success);
  EXPECT_FALSE(r.condition.has_value());
  EXPECT_EQ(r.iterations, 2u);
}

TEST(RunScalableMaxEc, TauOneMatchesPlainUnderBoundedNoise) {
  const NoiseModel noise = bounded_noise(8);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto pop = random_population(120, seed);
    std::vector<IterationTrace> plain, ec;
    ProtocolConfig config;
    Rng a(seed), b(seed);
    const auto r1 = run_protocol(pop, config, noise, a,
                                 [&](const IterationTrace& t) { plain.push_back(t); });
    config.tau = 1;
    const auto r2 = run_protocol(pop, config, noise, b,
                                 [&](const IterationTrace& t) { ec.push_back(t); });
    ASSERT_EQ(plain.size(), ec.size());
    for (std::size_t i = 0; i < plain.size(); ++i) {
      EXPECT_EQ(plain[i].estimate, ec[i].estimate);
      EXPECT_EQ(plain[i].g3, ec[i].g3);
      EXPECT_FALSE(is_correction(ec[i].branch));
    }
    EXPECT_EQ(r1.condition, r2.condition);
    EXPECT_EQ(r1.success, r2.success);
  }
}

TEST(RunScalableMaxEc, NoiselessNeverCorrects) {
  for (int tau : {1, 2, 5, 20}) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto pop = random_population(150, seed + 1000);
      ProtocolConfig config;
      config.tau = tau;
      Rng rng(seed);
      const auto r = run_protocol(pop, config, NoiseModel::zero(), rng,
                                  [&](const IterationTrace& t) { EXPECT_FALSE(is_correction(t.branch)); });
      EXPECT_TRUE(r.success);
    }
  }
}

TEST(RunScalableMaxEc, CountersPersistAcrossRevisits) {
  CoordinatorState state;
  state.estimate = est("1");
  coordinator_step_ec(8, 3, state, 3.0, 0, 0);
  auto d = coordinator_step_ec(8, 3, state, 7.0, 0, 0);
  state.estimate = d.next_estimate();
  d = coordinator_step_ec(8, 3, state, 0, 8, 8);
  state.estimate = d.next_estimate();
  ASSERT_EQ(state.estimate, est("1"));
  EXPECT_EQ(state.counter(est("1"), CounterTag::greater), 1);
  coordinator_step_ec(8, 3, state, 3.0, 0, 0);
  d = coordinator_step_ec(8, 3, state, 3.0, 0, 0);
  EXPECT_TRUE(d.terminates());
}

TEST(EvaluateOutcome, Examples) {
  const auto pop = random_population(30, 8);
  const auto all = evaluate_outcome({ConditionKind::greater_or_equal, {}}, pop, 8);
  EXPECT_EQ(all.survivor_count, 30u);
  EXPECT_FALSE(all.success);

  const auto& top = pop[oracle::argmax(pop.agents())];
  const Estimate full = top.prefix(pop.description_length() + 5);
  const auto none = evaluate_outcome({ConditionKind::strictly_greater, full}, pop, 8);
  EXPECT_EQ(none.survivor_count, 0u);
  EXPECT_FALSE(none.success);
  const auto only = evaluate_outcome({ConditionKind::greater_or_equal, full}, pop.agents(), 8);
  EXPECT_EQ(only.survivor_count, 1u);
  EXPECT_TRUE(only.success);
}

TEST(EvaluateOutcome, MatchesBruteForce) {
  Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const auto pop = random_population(50, 100 + trial);
    Estimate s;
    const auto len = std::uniform_int_distribution<int>(0, 8)(rng);
    for (int k = 0; k < len; ++k) s.push_back(static_cast<Bit>(rng() & 1));
    for (auto kind : {ConditionKind::strictly_greater, ConditionKind::greater_or_equal}) {
      const TerminationCondition cond{kind, s};
      const auto c = oracle::counts(pop.agents(), s.to_string());
      const std::size_t expected = kind == ConditionKind::strictly_greater ? c.gt : c.geq;
      const auto fast = evaluate_outcome(cond, pop, 8);
      const auto slow = evaluate_outcome(cond, pop.agents(), 8);
      EXPECT_EQ(fast.survivor_count, expected);
      EXPECT_EQ(slow.survivor_count, expected);
      EXPECT_EQ(fast.success, expected >= 1 && expected <= 8);
      if (expected > 0) {
        EXPECT_TRUE(cond.holds(pop[oracle::argmax(pop.agents())]));
      }
    }
  }
}

TEST(Defaults, MaxIterations) {
  EXPECT_EQ(default_max_iterations(1000), 50u * (10 + 8));
  EXPECT_EQ(default_max_iterations(1024), 50u * (10 + 8));
  EXPECT_EQ(default_max_iterations(1025), 50u * (11 + 8));
}

}  // namespace
}  // namespace smax
