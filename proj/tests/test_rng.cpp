#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <set>
#include <vector>

#include "bebold/core/rng.hpp"

using namespace bebold;

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, DifferentSeedsDiverge) {
  Rng a(1), b(2);
  int same = 0;
  for (int i = 0; i < 100; ++i) same += a.next_u64() == b.next_u64();
  EXPECT_EQ(same, 0);
}

TEST(Rng, UniformStaysInUnitInterval) {
  Rng r(7);
  double lo = 1, hi = 0, sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.01);
  EXPECT_LT(lo, 1e-3);
  EXPECT_GT(hi, 1 - 1e-3);
}

TEST(Rng, BelowCoversRangeUniformly) {
  Rng r(3);
  std::array<int, 7> hist{};
  const int n = 70000;
  for (int i = 0; i < n; ++i) ++hist[r.below(7)];
  for (int h : hist) EXPECT_NEAR(h, n / 7.0, 5 * std::sqrt(n / 7.0));
}

TEST(Rng, NormalMoments) {
  Rng r(11);
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(Rng, CategoricalMatchesProbabilities) {
  Rng r(5);
  const std::vector<double> p{0.1, 0.6, 0.3};
  std::array<int, 3> hist{};
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++hist[r.categorical(p)];
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(hist[k] / double(n), p[k], 0.01);
}

TEST(Rng, CategoricalNeverPicksZeroMass) {
  Rng r(9);
  const std::vector<double> p{0.0, 1.0, 0.0};
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(r.categorical(p), 1u);
}

TEST(DeriveSeed, StreamsAreIndependentOfEachOther) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t m = 0; m < 10; ++m)
    for (const char* tag : {"agent", "rnd", "layout"})
      for (std::uint64_t i = 0; i < 10; ++i) seen.insert(derive_seed(m, tag, i));
  EXPECT_EQ(seen.size(), 300u);
}

TEST(DeriveSeed, IsAPureFunction) {
  EXPECT_EQ(derive_seed(5, "rnd", 2), derive_seed(5, "rnd", 2));
  EXPECT_NE(derive_seed(5, "rnd", 2), derive_seed(5, "rnd", 3));
  EXPECT_NE(derive_seed(5, "rnd"), derive_seed(5, "agent"));
}

TEST(Fnv1a, KnownVectors) {
  // Reference values of 64-bit FNV-1a.
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}
