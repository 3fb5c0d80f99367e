#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "bebold/dynamics/discrete.hpp"
#include "bebold/dynamics/ode.hpp"
#include "bebold/dynamics/phi.hpp"

using namespace bebold;

TEST(Phi, HandValues) {
  EXPECT_DOUBLE_EQ(phi(1, 0.01), 0.01);
  EXPECT_DOUBLE_EQ(phi(1, 0.3), 0.3);
  EXPECT_NEAR(phi(2, 0.01), 0.0149, 1e-15);
  EXPECT_THROW(phi(0.5, 0.01), DomainError);
  EXPECT_THROW(PhiSeries(0.0), DomainError);
  EXPECT_THROW(PhiSeries(1.0), DomainError);
}

TEST(Phi, RecurrenceMatchesDirectSum) {
  for (double a : {0.01, 0.1, 0.5}) {
    PhiSeries s(a);
    for (std::size_t n = 1; n <= 400; ++n) ASSERT_NEAR(s.at(n), phi_direct(n, a), 1e-13 * std::max(1.0, s.at(n)));
  }
}

TEST(Phi, InterpolatesBetweenIntegers) {
  PhiSeries s(0.01);
  const double lo = s.at(7), hi = s.at(8);
  EXPECT_DOUBLE_EQ(s(7.25), lo + 0.25 * (hi - lo));
  EXPECT_DOUBLE_EQ(s(7.0), lo);
}

TEST(Phi, TailTendsToReciprocal) {
  EXPECT_NEAR(1e4 * phi_direct(10000, 0.01), 1.0, 0.05);
}

TEST(Phi, RisesToASinglePeakThenDecays) {
  // phi(n+1) - phi(n) = a (1/(n+1) - phi(n)), so phi climbs while it sits
  // below 1/(n+1). The peak comes well before 1/(2a).
  for (double a : {0.001, 0.01, 0.02, 0.05}) {
    PhiSeries s(a);
    std::size_t peak = 1;
    while (s.at(peak + 1) >= s.at(peak)) ++peak;
    EXPECT_LT(static_cast<double>(peak), 1.0 / (2 * a)) << "a=" << a;
    EXPECT_GE(static_cast<double>(peak), 0.3 / (2 * a)) << "a=" << a;
    for (std::size_t n = 1; n <= 5000; ++n) {
      ASSERT_GT(s.at(n), 0.0);
      if (n < peak) {
        ASSERT_GE(s.at(n + 1), s.at(n));
      } else {
        ASSERT_LE(s.at(n + 1), s.at(n)) << "a=" << a << " n=" << n;
      }
    }
  }
  PhiSeries s(0.01);
  std::size_t peak = 1;
  while (s.at(peak + 1) >= s.at(peak)) ++peak;
  EXPECT_EQ(peak, 31u);
}

TEST(Ode, ConservesTotalVisits) {
  const auto tr = integrate(OdeParams{40, 10, 0.01}, {}, 3000, 0.1);
  ASSERT_TRUE(tr.ok);
  double worst = 0;
  for (const auto& s : tr.states) worst = std::max(worst, std::abs(s.x_l + s.x_r - s.t - 2.0));
  EXPECT_LT(worst / 3000, 1e-6);
}

TEST(Ode, SymmetricCaseStaysSymmetric) {
  const OdeParams p{25, 25, 0.01};
  const auto tr = integrate(p, {}, 2000, 0.1);
  for (const auto& s : tr.states) ASSERT_NEAR(s.x_l, s.x_r, 1e-9);
  EXPECT_EQ(crossing_point(tr, p).status, CrossingStatus::kDegenerate);
}

TEST(Ode, SwappingLengthsSwapsRoles) {
  const auto a = integrate(OdeParams{40, 10, 0.01}, {}, 1000, 0.1);
  const auto b = integrate(OdeParams{10, 40, 0.01}, {}, 1000, 0.1);
  ASSERT_EQ(a.states.size(), b.states.size());
  for (std::size_t k = 0; k < a.states.size(); ++k) {
    ASSERT_NEAR(a.states[k].x_l, b.states[k].x_r, 1e-9);
    ASSERT_NEAR(a.states[k].x_r, b.states[k].x_l, 1e-9);
  }
  const auto ca = crossing_point(a, OdeParams{40, 10, 0.01});
  const auto cb = crossing_point(b, OdeParams{10, 40, 0.01});
  EXPECT_EQ(ca.status, cb.status);
  EXPECT_EQ(ca.analytic_threshold, cb.analytic_threshold);
}

TEST(Ode, HalvingTheStepBarelyMovesTheEndpoint) {
  const auto a = integrate(OdeParams{40, 10, 0.01}, {}, 3000, 0.1);
  const auto b = integrate(OdeParams{40, 10, 0.01}, {}, 3000, 0.05);
  const auto& ea = a.states.back();
  const auto& eb = b.states.back();
  EXPECT_EQ(ea.t, 3000.0);
  EXPECT_EQ(eb.t, 3000.0);
  EXPECT_LT(std::abs(ea.x_l - eb.x_l) / eb.x_l, 1e-4);
  EXPECT_LT(std::abs(ea.x_r - eb.x_r) / eb.x_r, 1e-4);
}

TEST(Ode, LongCorridorLeadsButNeverLosesPreference) {
  // The closed-form threshold assumes the short side is barely visited. Under
  // the proportional dynamics it keeps being sampled, so the preference gap
  // never changes sign and the visit ratio settles near sqrt(T_l / T_r).
  const OdeParams p{40, 10, 0.01};
  CorridorOde ode(p);
  const auto tr = ode.integrate({}, 5000, 0.1);
  ASSERT_TRUE(tr.ok);
  double peak = 0;
  for (const auto& s : tr.states) {
    ASSERT_LE(ode.preference_gap(s.x_l, s.x_r), 0.0) << "t=" << s.t;
    peak = std::max(peak, s.x_l / s.x_r);
  }
  const auto c = crossing_point(tr, p);
  EXPECT_EQ(c.status, CrossingStatus::kAbsent);
  EXPECT_DOUBLE_EQ(c.analytic_threshold, 400.0);
  EXPECT_GT(peak, 5.0);
  EXPECT_LT(peak, 6.0);
  const auto& end = tr.states.back();
  EXPECT_NEAR(end.x_l / end.x_r, 2.0, 0.15);
}

TEST(Ode, ThresholdHoldsWhenTheShortSideIsFresh) {
  // Start with the long side already visited 300 times and the short side
  // once: this is the regime the closed-form estimate describes.
  const OdeParams p{40, 10, 0.01};
  CorridorOde ode(p);
  const auto tr = ode.integrate({0.0, 300.0, 1.0}, 400, 0.1);
  const auto c = crossing_point(tr, p);
  ASSERT_EQ(c.status, CrossingStatus::kFound);
  EXPECT_NEAR(ode.preference_gap(c.x_l, c.x_r), 0.0, 1e-4);
  EXPECT_EQ(c.x_lead, c.x_l);
  EXPECT_GT(c.x_lead, 200.0);
  EXPECT_LT(c.x_lead, 800.0);
}

TEST(Ode, StartAlreadyPastTheThresholdCrossesImmediately) {
  const OdeParams p{40, 10, 0.01};
  const auto tr = CorridorOde(p).integrate({0.0, 3000.0, 1.0}, 10, 0.1);
  const auto c = crossing_point(tr, p);
  ASSERT_EQ(c.status, CrossingStatus::kFound);
  EXPECT_EQ(c.t, 0.0);
  EXPECT_EQ(c.x_l, 3000.0);
}

TEST(Ode, RejectsBadInput) {
  EXPECT_THROW(CorridorOde(OdeParams{0, 10, 0.01}), DomainError);
  EXPECT_THROW(integrate(OdeParams{}, {}, 10, 0.0), DomainError);
  // A start inside phi's undefined region is reported, not thrown.
  const auto tr = CorridorOde(OdeParams{}).integrate({0.0, 0.5, 1.0}, 10, 0.1);
  EXPECT_FALSE(tr.ok);
  EXPECT_FALSE(tr.error.empty());
  ASSERT_FALSE(tr.states.empty());
}

TEST(Ode, SampleAtInterpolates) {
  Trajectory tr;
  tr.states = {{0, 1, 1}, {1, 2, 1}, {2, 2, 3}};
  const auto s = sample_at(tr, 1.5);
  EXPECT_DOUBLE_EQ(s.x_l, 2.0);
  EXPECT_DOUBLE_EQ(s.x_r, 2.0);
  EXPECT_DOUBLE_EQ(sample_at(tr, -1).x_l, 1.0);
  EXPECT_DOUBLE_EQ(sample_at(tr, 9).x_r, 3.0);
}

TEST(Discrete, AgreesWithTheOdeOnWhichSideLeads) {
  DiscreteConfig cfg;
  cfg.ode = {40, 10, 0.01};
  cfg.episodes = 400;
  for (std::uint64_t s = 1; s <= 10; ++s) cfg.seeds.push_back(s);
  const auto cmp = discrete_vs_ode(cfg);
  ASSERT_EQ(cmp.rows.size(), 401u);
  EXPECT_GE(cmp.dominance_agreement, 0.95);
  EXPECT_GE(cmp.lock_in_fraction, 0.7);
  const auto& last = cmp.rows.back();
  EXPECT_GT(last.mean_x_l, last.mean_x_r);
  EXPECT_DOUBLE_EQ(last.mean_x_l + last.mean_x_r, 402.0);
}

TEST(Discrete, SymmetricCorridorsTrackEquality) {
  DiscreteConfig cfg;
  cfg.ode = {10, 10, 0.01};
  cfg.episodes = 300;
  for (std::uint64_t s = 1; s <= 20; ++s) cfg.seeds.push_back(s);
  const auto cmp = discrete_vs_ode(cfg);
  const auto& last = cmp.rows.back();
  EXPECT_NEAR(last.mean_x_l / (last.mean_x_l + last.mean_x_r), 0.5, 0.15);
  EXPECT_EQ(cmp.crossing.status, CrossingStatus::kDegenerate);
}

TEST(Discrete, RejectsBadConfig) {
  DiscreteConfig cfg;
  EXPECT_THROW(discrete_vs_ode(cfg), ConfigError);
  cfg.seeds = {1};
  cfg.ode.t_l = 10.5;
  EXPECT_THROW(discrete_vs_ode(cfg), ConfigError);
}
