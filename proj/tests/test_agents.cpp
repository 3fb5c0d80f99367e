#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "bebold/agents/episode.hpp"
#include "bebold/agents/policy.hpp"
#include "bebold/agents/q_table.hpp"
#include "bebold/core/rng.hpp"

using namespace bebold;

namespace {

const StateKey kA = corridor_key(1, 1);
const StateKey kB = corridor_key(1, 2);

void expect_valid(const std::vector<double>& p, double floor) {
  double sum = 0;
  for (double x : p) {
    EXPECT_GE(x, floor / p.size() - 1e-15);
    sum += x;
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

}  // namespace

TEST(QTable, AbsentEntriesReadZero) {
  QTable q(0.1, 0.9);
  EXPECT_EQ(q.get(kA, 3), 0.0);
  EXPECT_EQ(q.values(kA, 4), std::vector<double>(4, 0.0));
  q.set(kA, 1, -2.0);
  EXPECT_EQ(q.max_value(kA, 3), 0.0);
  EXPECT_EQ(q.max_value(kA, 2), 0.0);
  q.set(kA, 0, -1.0);
  EXPECT_EQ(q.max_value(kA, 2), -1.0) << "all-negative rows must not clamp to zero";
  EXPECT_THROW(q.set(kA, 0, std::nan("")), DomainError);
  EXPECT_THROW(QTable(0.0, 0.5), ConfigError);
  EXPECT_THROW(QTable(0.5, 1.5), ConfigError);
}

TEST(BanditUpdate, Examples) {
  QTable q(0.01, 1.0);
  EXPECT_DOUBLE_EQ(bandit_update(q, kA, 0, 10.0), 0.1);
  q.set(kA, 1, 3.5);
  EXPECT_EQ(bandit_update(q, kA, 1, 3.5), 3.5);
}

TEST(BanditUpdate, ClosedFormAfterConstantReturns) {
  for (double alpha : {0.01, 0.1, 0.5}) {
    QTable q(alpha, 1.0);
    const double r = 7.25;
    for (int n = 1; n <= 2000; ++n) {
      const double v = bandit_update(q, kA, 0, r);
      ASSERT_NEAR(v, r * (1.0 - std::pow(1.0 - alpha, n)), 1e-12) << "alpha " << alpha << " n " << n;
    }
  }
}

TEST(TdUpdate, TerminalAndMyopic) {
  QTable q(0.5, 0.99);
  EXPECT_EQ(td_update(q, kA, 0, 1.0, kB, true, 2), 0.5);
  QTable myopic(1.0, 0.0);
  myopic.set(kB, 0, 100.0);
  EXPECT_EQ(td_update(myopic, kA, 0, 0.3, kB, false, 1), 0.3);
}

TEST(TdUpdate, TwoStateCycleReachesBellmanFixedPoint) {
  // A -> B with reward 1, B -> A with reward 0.
  // Q_A = 1 + g Q_B, Q_B = g Q_A  =>  Q_A = 1 / (1 - g^2), Q_B = g / (1 - g^2).
  const double g = 0.9;
  QTable q(0.1, g);
  for (int i = 0; i < 5000; ++i) {
    td_update(q, kA, 0, 1.0, kB, false, 1);
    td_update(q, kB, 0, 0.0, kA, false, 1);
  }
  EXPECT_NEAR(q.get(kA, 0), 1.0 / (1 - g * g), 1e-3);
  EXPECT_NEAR(q.get(kB, 0), g / (1 - g * g), 1e-3);
}

TEST(QTable, CheckpointRoundTrip) {
  QTable q(0.1, 0.99);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) q.set(pose_key(static_cast<int>(rng.below(9)), 2, 1, 0), static_cast<int>(rng.below(4)), rng.normal());
  std::stringstream ss;
  q.save(ss);
  const auto back = QTable::load(ss);
  EXPECT_EQ(back, q);
  std::stringstream bad("nonsense 3\n");
  EXPECT_THROW(QTable::load(bad), ConfigError);
}

TEST(Policy, ProportionalExamples) {
  PolicySpec spec{PolicyKind::kProportional, 0.1, 1.0, 0.0};
  const auto p = action_distribution(std::vector<double>{3, 1}, spec);
  EXPECT_DOUBLE_EQ(p[0], 0.75);
  EXPECT_DOUBLE_EQ(p[1], 0.25);
  spec.floor = 1e-3;
  const auto u = action_distribution(std::vector<double>{0, 0, 0, 0}, spec);
  for (double x : u) EXPECT_DOUBLE_EQ(x, 0.25);
  // Negative values clamp to zero before normalizing.
  spec.floor = 0.0;
  const auto n = action_distribution(std::vector<double>{-5, 2}, spec);
  EXPECT_EQ(n[0], 0.0);
  EXPECT_EQ(n[1], 1.0);
}

TEST(Policy, GreedyWithZeroEpsilon) {
  PolicySpec spec{PolicyKind::kEpsilonGreedy, 0.0, 1.0, 0.0};
  Rng rng(1);
  for (int i = 0; i < 200; ++i) ASSERT_EQ(sample_action(std::vector<double>{1, 2}, spec, rng), 1);
  const auto ties = action_distribution(std::vector<double>{2, 2, 0}, spec);
  EXPECT_DOUBLE_EQ(ties[0], 0.5);
  EXPECT_DOUBLE_EQ(ties[1], 0.5);
}

TEST(Policy, SoftmaxIsShiftInvariant) {
  PolicySpec spec{PolicyKind::kSoftmax, 0.1, 0.5, 0.0};
  const auto a = action_distribution(std::vector<double>{1, 2, 3}, spec);
  const auto b = action_distribution(std::vector<double>{1001, 1002, 1003}, spec);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(a[k], b[k], 1e-12);
  EXPECT_NEAR(a[2] / a[1], std::exp(2.0), 1e-12);
}

TEST(Policy, DistributionsAreValidForAnyValues) {
  Rng rng(4);
  for (auto kind : {PolicyKind::kProportional, PolicyKind::kSoftmax, PolicyKind::kEpsilonGreedy})
    for (double floor : {0.0, 1e-3, 0.2}) {
      PolicySpec spec{kind, 0.1, 0.3, floor};
      for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> q(1 + rng.below(6));
        for (double& v : q) v = rng.below(4) == 0 ? 0.0 : 10 * rng.normal();
        expect_valid(action_distribution(q, spec), floor);
      }
    }
}

TEST(Policy, ScalingLeavesChoicesUnchanged) {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> q(4);
    for (double& v : q) v = rng.normal();
    const double c = 0.01 + 100 * rng.uniform();
    std::vector<double> scaled = q;
    for (double& v : scaled) v *= c;
    PolicySpec eg{PolicyKind::kEpsilonGreedy, 0.0, 1.0, 0.0};
    const auto pa = action_distribution(q, eg), pb = action_distribution(scaled, eg);
    EXPECT_EQ(std::max_element(pa.begin(), pa.end()) - pa.begin(), std::max_element(pb.begin(), pb.end()) - pb.begin());
    PolicySpec prop{PolicyKind::kProportional, 0.1, 1.0, 1e-3};
    const auto qa = action_distribution(q, prop), qb = action_distribution(scaled, prop);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(qa[k], qb[k], 1e-12);
  }
}

TEST(Policy, Validation) {
  EXPECT_THROW((PolicySpec{PolicyKind::kSoftmax, 0.1, 0.0, 0.0}.validate()), ConfigError);
  EXPECT_THROW((PolicySpec{PolicyKind::kEpsilonGreedy, 1.5, 1.0, 0.0}.validate()), ConfigError);
  EXPECT_THROW((PolicySpec{PolicyKind::kProportional, 0.1, 1.0, -0.1}.validate()), ConfigError);
  EXPECT_THROW(parse_policy_kind("boltzmann"), ConfigError);
  EXPECT_EQ(parse_policy_kind("egreedy"), PolicyKind::kEpsilonGreedy);
  EXPECT_THROW(action_distribution(std::vector<double>{}, PolicySpec{}), InvalidAction);
}

TEST(CorridorBandit, ForcedEpisodeCountsEveryStateOnce) {
  CorridorWorld w({40, 10, 30, 10});
  RewardEngine e(RewardSpec{Criterion::kCountBased, false, false, 1.0});
  Agent agent{QTable(0.01, 1.0), PolicySpec{}};
  Rng rng(1);
  run_corridor_bandit_episode(agent, w, e, rng, 3);
  const auto rec = run_corridor_bandit_episode(agent, w, e, rng, 3);
  EXPECT_EQ(rec.action, 3);
  EXPECT_EQ(rec.steps, 30);
  for (int d = 1; d <= 30; ++d) EXPECT_EQ(e.lifetime().count(corridor_key(3, d)), 2u);
  EXPECT_DOUBLE_EQ(rec.total_return, 30 * 0.5);
  EXPECT_DOUBLE_EQ(agent.q.get(CorridorWorld::start_key(), 2), 0.01 * 0.99 * 30 + 0.01 * 15);
}

TEST(CorridorBandit, ReplayIsDeterministic) {
  CorridorWorld w({40, 10, 30, 10});
  const auto run = [&] {
    RewardEngine e(RewardSpec{Criterion::kBeboldTabular, true, false, 1.0});
    Agent agent{QTable(0.01, 1.0), PolicySpec{}};
    Rng rng(77);
    std::vector<int> actions;
    for (int ep = 0; ep < 300; ++ep) actions.push_back(run_corridor_bandit_episode(agent, w, e, rng).action);
    return std::pair{actions, agent.q};
  };
  const auto a = run(), b = run();
  EXPECT_EQ(a.first, b.first);
  EXPECT_EQ(a.second, b.second);
}

TEST(CorridorStepwise, RunsToHorizon) {
  CorridorWorld w({4, 2}, CorridorMode::kStepwise, 12);
  RewardEngine e(RewardSpec{Criterion::kCountBased, true, true, 1.0});
  Agent agent{QTable(0.1, 0.99), PolicySpec{PolicyKind::kEpsilonGreedy, 0.2, 1.0, 0.0}};
  Rng rng(3);
  const auto rec = run_corridor_stepwise_episode(agent, w, e, rng);
  EXPECT_EQ(rec.steps, 12);
  EXPECT_EQ(rec.intrinsic.size(), 12u);
  EXPECT_EQ(e.lifetime().total(), 13u);
}

TEST(MultiRoomEpisode, NoIntrinsicNoGoalMeansZeroReturn) {
  MultiRoomConfig c;
  c.max_steps = 50;
  MultiRoomWorld w(c);
  RewardEngine e(RewardSpec{Criterion::kCountBased, true, true, 0.0});
  Agent agent{QTable(0.1, 0.99), PolicySpec{PolicyKind::kEpsilonGreedy, 1.0, 1.0, 0.0}};
  Rng rng(5);
  const auto rec = run_multiroom_episode(agent, w, e, rng, 0);
  ASSERT_FALSE(rec.reached_goal);
  EXPECT_EQ(rec.total_return, 0.0);
  EXPECT_EQ(rec.steps, 50);
}

TEST(MultiRoomEpisode, FrozenRolloutLeavesQUntouched) {
  MultiRoomWorld w{MultiRoomConfig{}};
  RewardEngine e(RewardSpec{Criterion::kBeboldTabular, true, true, 0.1});
  Agent agent{QTable(0.1, 0.99), PolicySpec{PolicyKind::kEpsilonGreedy, 0.1, 1.0, 0.0}};
  Rng rng(5);
  run_multiroom_episode(agent, w, e, rng, 0, true);
  const QTable before = agent.q;
  std::vector<std::pair<StateKey, double>> trace;
  const auto rec = run_multiroom_episode(agent, w, e, rng, 1, false, &trace, 25);
  EXPECT_EQ(agent.q, before);
  EXPECT_EQ(rec.steps, 25);
  ASSERT_EQ(trace.size(), 25u);
  for (std::size_t k = 0; k < trace.size(); ++k) EXPECT_EQ(trace[k].second, rec.intrinsic[k]);
}

TEST(MultiRoomEpisode, FullRunIsDeterministic) {
  const auto run = [] {
    MultiRoomWorld w{MultiRoomConfig{}};
    RewardEngine e(RewardSpec{Criterion::kBeboldRnd, true, true, 0.1},
                   PredictorPair(PredictorConfig{150, 64, 32, 1e-3, 3}));
    Agent agent{QTable(0.1, 0.99), PolicySpec{PolicyKind::kEpsilonGreedy, 0.1, 1.0, 0.0}};
    Rng rng(9);
    std::vector<double> irs;
    for (std::uint64_t ep = 0; ep < 3; ++ep) {
      const auto rec = run_multiroom_episode(agent, w, e, rng, ep);
      irs.insert(irs.end(), rec.intrinsic.begin(), rec.intrinsic.end());
    }
    return std::pair{irs, agent.q};
  };
  const auto a = run(), b = run();
  EXPECT_EQ(a.first, b.first);
  EXPECT_EQ(a.second, b.second);
}
