#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "bebold/core/rng.hpp"
#include "bebold/counting/count_table.hpp"
#include "bebold/counting/metrics.hpp"

using namespace bebold;

TEST(CountTable, RecordReturnsPostIncrement) {
  StateCountTable t;
  const auto k = corridor_key(1, 1);
  EXPECT_EQ(t.count(k), 0u);
  EXPECT_EQ(t.record(k), 1u);
  EXPECT_EQ(t.record(k), 2u);
  EXPECT_EQ(t.count(k), 2u);
}

TEST(CountTable, InterleavedKeysMatchLoopOracle) {
  StateCountTable t;
  const std::vector<StateKey> keys{corridor_key(1, 1), corridor_key(2, 1), corridor_key(1, 2)};
  for (int i = 0; i < 100; ++i)
    for (const auto& k : keys) t.record(k);
  for (const auto& k : keys) EXPECT_EQ(t.count(k), 100u);
  EXPECT_EQ(t.total(), 300u);
  EXPECT_EQ(t.size(), 3u);
}

TEST(CountTable, EpisodeResetClearsEpisodicOnly) {
  StateCountTable life(CountScope::kLifetime), ep(CountScope::kEpisodic);
  ep.reset_episode();
  EXPECT_TRUE(ep.empty());
  const auto k = corridor_key(3, 4);
  life.record(k);
  ep.record(k);
  ep.reset_episode();
  EXPECT_EQ(ep.count(k), 0u);
  EXPECT_EQ(life.count(k), 1u);
  EXPECT_THROW(life.reset_episode(), Misuse);
}

TEST(CountTable, RandomOperationsKeepInvariants) {
  Rng rng(17);
  StateCountTable life(CountScope::kLifetime), ep(CountScope::kEpisodic);
  std::map<StateKey, std::uint64_t> oracle;
  std::uint64_t calls = 0;
  for (int i = 0; i < 20000; ++i) {
    if (rng.below(50) == 0) {
      ep.reset_episode();
      continue;
    }
    const auto k = corridor_key(static_cast<std::uint32_t>(rng.below(5)), static_cast<std::uint32_t>(rng.below(20)));
    const auto before = life.count(k);
    life.record(k);
    ep.record(k);
    ++oracle[k];
    ++calls;
    ASSERT_EQ(life.count(k), before + 1);
    ASSERT_LE(ep.count(k), life.count(k));
  }
  std::uint64_t sum = 0;
  for (const auto& [k, n] : life) {
    sum += n;
    EXPECT_EQ(n, oracle[k]);
  }
  EXPECT_EQ(sum, calls);
  EXPECT_EQ(life.total(), calls);
}

TEST(CountTable, CheckpointRoundTrip) {
  StateCountTable t;
  Rng rng(3);
  for (int i = 0; i < 500; ++i) t.record(pose_key(static_cast<int>(rng.below(10)), static_cast<int>(rng.below(5)), 1, rng.below(3)));
  std::stringstream ss;
  save_counts(ss, t);
  const std::string first = ss.str();
  const auto back = load_counts(ss);
  EXPECT_EQ(back.total(), t.total());
  EXPECT_EQ(back.size(), t.size());
  for (const auto& [k, n] : t) EXPECT_EQ(back.count(k), n);
  std::stringstream again;
  save_counts(again, back);
  EXPECT_EQ(again.str(), first);
}

TEST(CountTable, CheckpointRejectsForeignData) {
  std::stringstream ss("bebold-mlp 1\n");
  EXPECT_THROW(load_counts(ss), ConfigError);
}

TEST(CountTable, RestoreRejectsZero) {
  StateCountTable t;
  EXPECT_THROW(t.restore(corridor_key(1, 1), 0), Misuse);
  t.restore(corridor_key(1, 1), 7);
  t.restore(corridor_key(1, 1), 3);
  EXPECT_EQ(t.total(), 3u);
}

TEST(Entropy, HandValues) {
  EXPECT_DOUBLE_EQ(entropy_bits(std::vector<double>{1, 1, 1, 1}), 2.0);
  EXPECT_DOUBLE_EQ(entropy_bits(std::vector<double>{5, 0, 0, 0}), 0.0);
  EXPECT_NEAR(entropy_bits(std::vector<double>{3, 1}), 0.8113, 1e-4);
  // -(3/4) log2(3/4) - (1/4) log2(1/4)
  EXPECT_NEAR(entropy_bits(std::vector<double>{3, 1}), 2.0 - 0.75 * std::log2(3.0), 1e-15);
  EXPECT_EQ(entropy_bits(std::vector<double>{}), 0.0);
  EXPECT_EQ(entropy_bits(std::vector<double>{0, 0}), 0.0);
}

TEST(Entropy, BoundsOverRandomTables) {
  Rng rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.below(30);
    std::vector<double> w(n);
    std::size_t support = 0;
    for (auto& x : w) {
      x = rng.below(3) == 0 ? 0.0 : static_cast<double>(rng.below(1000));
      support += x > 0;
    }
    const double h = entropy_bits(w);
    ASSERT_GE(h, 0.0);
    if (support > 0) ASSERT_LE(h, std::log2(static_cast<double>(support)) + 1e-12);
  }
}

TEST(Entropy, ReportedTotalsNearCeiling) {
  // Visitation totals of roughly 26K, 28K, 25K and 29K spread almost evenly.
  EXPECT_NEAR(entropy_bits(std::vector<double>{26000, 28000, 25000, 29000}), 1.997, 0.002);
}

TEST(RoomEntropy, AbsentRoomsAndUniformRooms) {
  std::vector<std::pair<int, std::uint64_t>> counts{{0, 1}, {1, 1}, {2, 1}, {3, 1}, {10, 3}, {11, 1}};
  const auto h = room_entropy(counts, [](int k) { return k / 10; }, 3);
  ASSERT_EQ(h.size(), 3u);
  EXPECT_DOUBLE_EQ(*h[0], 2.0);
  EXPECT_NEAR(*h[1], 0.8113, 1e-4);
  EXPECT_FALSE(h[2].has_value());
}

TEST(RoomEntropy, MergingDirectionsPoolsHeadings) {
  MultiRoomConfig c;
  c.num_rooms = 2;
  c.room_size = 3;
  MultiRoomWorld w(c);
  StateCountTable t;
  for (int d = 0; d < 4; ++d) t.record(pose_key(1, 1, d, 0));
  t.record(pose_key(2, 1, 0, 0));
  t.record(pose_key(2, 1, 0, 0));
  t.record(pose_key(2, 1, 0, 0));
  t.record(pose_key(2, 1, 0, 0));
  const auto pose = multiroom_room_entropy(t, w, false);
  const auto loc = multiroom_room_entropy(t, w, true);
  // Pose: five states with counts 1,1,1,1,4. Location: two cells, 4 and 4.
  EXPECT_NEAR(*pose[0], entropy_bits(std::vector<double>{1, 1, 1, 1, 4}), 1e-15);
  EXPECT_DOUBLE_EQ(*loc[0], 1.0);
  EXPECT_FALSE(pose[1].has_value());
  EXPECT_FALSE(loc[1].has_value());
}

TEST(CorridorTotals, UniformAndDegenerate) {
  CorridorWorld w({5, 5, 5, 5});
  StateCountTable t;
  for (int j = 1; j <= 4; ++j)
    for (const auto& k : w.corridor_episode(j)) t.record(k);
  auto ct = corridor_totals(t, w);
  EXPECT_DOUBLE_EQ(ct.entropy_bits, 2.0);
  EXPECT_DOUBLE_EQ(ct.max_share(), 0.25);
  for (double x : ct.totals) EXPECT_EQ(x, 5.0);  // start state excluded

  CorridorWorld single({7});
  StateCountTable s;
  for (int i = 0; i < 3; ++i)
    for (const auto& k : single.corridor_episode(1)) s.record(k);
  ct = corridor_totals(s, single);
  EXPECT_EQ(ct.entropy_bits, 0.0);
  EXPECT_EQ(ct.max_share(), 1.0);
}

TEST(Heatmap, NormalizesOverLocations) {
  MultiRoomConfig c;
  c.num_rooms = 2;
  c.room_size = 4;
  MultiRoomWorld w(c);
  StateCountTable t;
  t.record(pose_key(2, 2, 0, 0));
  auto g = heatmap(t, w);
  EXPECT_TRUE(g.has_mass);
  EXPECT_DOUBLE_EQ(g.at(2, 2), 1.0);
  t.record(pose_key(3, 3, 1, 1));
  g = heatmap(t, w);
  EXPECT_DOUBLE_EQ(g.at(2, 2), 0.5);
  EXPECT_DOUBLE_EQ(g.at(3, 3), 0.5);
  EXPECT_DOUBLE_EQ(g.normalizer, 2.0);
}

TEST(Heatmap, EmptyTableFlagsUnitNormalizer) {
  MultiRoomWorld w{MultiRoomConfig{}};
  const auto g = heatmap(StateCountTable{}, w);
  EXPECT_FALSE(g.has_mass);
  EXPECT_EQ(g.normalizer, 1.0);
  EXPECT_EQ(g.sum(), 0.0);
}

TEST(Heatmap, RandomWalkSumsToOne) {
  MultiRoomWorld w{MultiRoomConfig{}};
  StateCountTable t;
  Rng rng(4);
  t.record(w.state_key());
  for (int i = 0; i < 100 && !w.done(); ++i) {
    w.step(static_cast<int>(rng.below(4)));
    t.record(w.state_key());
  }
  EXPECT_NEAR(heatmap(t, w).sum(), 1.0, 1e-9);
}

TEST(Heatmap, CsvAndPgmLayout) {
  HeatmapGrid g{2, 2, {0.25, std::nan(""), 0.5, 0.25}, 4.0, true};
  std::ostringstream csv, pgm;
  write_heatmap_csv(csv, g);
  EXPECT_EQ(csv.str(), "width,height,Z\r\n2,2,4\r\n0.25,\r\n0.5,0.25\r\n");
  write_heatmap_pgm(pgm, g);
  EXPECT_EQ(pgm.str(), "P2\n# heatmap Z=4\n2 2\n255\n128 0\n255 128\n");
}
