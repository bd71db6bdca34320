#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "savage/constructions.hpp"
#include "savage/prefs.hpp"
#include "savage/scenarios.hpp"

using namespace savage;

namespace {

std::vector<double> random_raw(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

Density random_density(std::mt19937_64& rng, std::size_t pieces) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> p(pieces);
  double s = 0.0;
  for (double& x : p) s += (x = u(rng));
  for (double& x : p) x /= s;
  return Density::from_cells(p);
}

Preference random_pref(std::mt19937_64& rng, std::size_t n, std::size_t pieces = 3) {
  return Preference(random_density(rng, pieces), normalize_utility(random_raw(rng, n)));
}

// sup over every act constant on the cells of the common refinement, by enumeration.
double brute_distance(const Preference& p, const Preference& q, std::size_t n) {
  const Density both[] = {p.belief(), q.belief()};
  const auto grid = common_refinement(both);
  const std::size_t s = grid.size() - 1;
  std::vector<std::size_t> pick(s, 0);
  double best = 0.0;
  while (true) {
    std::vector<Act::Segment> segs;
    for (std::size_t k = 0; k < s; ++k) segs.push_back({{grid[k], grid[k + 1]}, pick[k]});
    const Act f(segs);
    best = std::max(best, std::abs(expected_utility(p, f) - expected_utility(q, f)));
    std::size_t k = 0;
    while (k < s && ++pick[k] == n) pick[k++] = 0;
    if (k == s) break;
  }
  return best;
}

}  // namespace

TEST(Utility, NormalizeExamples) {
  const std::vector<double> bumpy{2, 4, 4, 2};
  EXPECT_EQ(normalize_utility(bumpy).values(), (std::vector<double>{0, 1, 1, 0}));
  const std::vector<double> flat{5, 5, 5, 5};
  EXPECT_TRUE(normalize_utility(flat).is_zero());
  const std::vector<double> t1{1, 0, 0.9, 0};
  EXPECT_EQ(normalize_utility(t1).values(), t1);
}

TEST(Utility, NormalizeIdempotentAndAffineInvariant) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> a(0.1, 20.0), b(-50.0, 50.0);
  for (int t = 0; t < 200; ++t) {
    const auto raw = random_raw(rng, 5);
    const auto u = normalize_utility(raw);
    EXPECT_EQ(normalize_utility(u.values()), u);
    const double sa = a(rng), sb = b(rng);
    std::vector<double> moved(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) moved[i] = sa * raw[i] + sb;
    const auto v = normalize_utility(moved);
    for (std::size_t i = 0; i < raw.size(); ++i) EXPECT_NEAR(v(i), u(i), 1e-12);
  }
}

TEST(Utility, RejectsUnnormalized) {
  EXPECT_THROW(Utility({0.0, 0.5}), InvalidInput);
  EXPECT_THROW(Utility({0.2, 1.0}), InvalidInput);
  EXPECT_THROW(OutcomeSpace({"a", "b", "c"}), InvalidInput);
  EXPECT_THROW(OutcomeSpace({"a", "b", "c", "a"}), InvalidInput);
}

TEST(Act, CanonicalForm) {
  const Act f({{{0.5, 1.0}, 1}, {{0.0, 0.25}, 1}, {{0.25, 0.5}, 1}});
  EXPECT_EQ(f, Act::constant(1));
  EXPECT_THROW(Act({{{0.0, 0.4}, 0}, {{0.5, 1.0}, 1}}), InvalidInput);
  const auto g = Act::bet(2, EventSet({{0.1, 0.2}, {0.7, 0.8}}), 0);
  EXPECT_EQ(g.event_of(2), EventSet({{0.1, 0.2}, {0.7, 0.8}}));
  EXPECT_EQ(g.outcome_at(0.75), 2u);
  EXPECT_EQ(g.outcome_at(0.5), 0u);
}

TEST(ExpectedUtility, Table1) {
  const auto t = scenarios::table1();
  EXPECT_NEAR(expected_utility(t.profile.agent(0), t.f), 0.9, 1e-12);
  EXPECT_NEAR(expected_utility(t.profile.agent(0), t.g), 0.9, 1e-12);
  EXPECT_NEAR(expected_utility(t.profile.agent(1), t.f), 0.9, 1e-12);
  EXPECT_NEAR(expected_utility(t.profile.agent(1), t.g), 0.8, 1e-12);
  EXPECT_EQ(expected_utility(Preference::indifferent(), t.f), 0.0);
}

TEST(Pushforward, Table1) {
  const auto t = scenarios::table1();
  const auto a1 = pushforward(t.f, t.profile.agent(0).belief(), 4);
  const auto a2 = pushforward(t.f, t.profile.agent(1).belief(), 4);
  EXPECT_LE(lottery_distance(a1, {0.9, 0.1, 0, 0}), 1e-12);
  EXPECT_LE(lottery_distance(a2, {0.1, 0.9, 0, 0}), 1e-12);
  EXPECT_EQ(pushforward(t.g, t.profile.agent(0).belief(), 4), (Lottery{0, 0, 1, 0}));
}

TEST(ExpectedUtility, AffineInLotteries) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const auto p = random_pref(rng, 5, 4);
    std::vector<Act::Segment> segs;
    double lo = 0.0;
    while (lo < 1.0) {
      const double hi = std::min(1.0, lo + 0.05 + 0.3 * u(rng));
      segs.push_back({{lo, hi}, static_cast<std::size_t>(u(rng) * 5)});
      lo = hi;
    }
    const Act f(segs);
    const auto lot = pushforward(f, p.belief(), 5);
    double ev = 0.0;
    for (std::size_t x = 0; x < 5; ++x) ev += lot[x] * p.utility()(x);
    EXPECT_NEAR(expected_utility(p, f), ev, 1e-12);
  }
}

TEST(Compare, Examples) {
  const auto t = scenarios::table1();
  EXPECT_EQ(compare(Preference::indifferent(), t.f, t.g).order, Order::kIndifferent);
  EXPECT_EQ(compare(t.profile.agent(0), t.f, t.g).order, Order::kIndifferent);
  const auto c = compare(t.profile.agent(1), t.f, t.g);
  EXPECT_EQ(c.order, Order::kFirst);
  EXPECT_NEAR(c.diff, 0.1, 1e-12);
  EXPECT_EQ(compare(t.profile.agent(1), t.g, t.f).order, Order::kSecond);
}

TEST(RealizeLottery, Examples) {
  const Density one[] = {Density::uniform()};
  const auto split = realize_lottery_act(one, {0.5, 0.5, 0, 0});
  ASSERT_TRUE(split);
  EXPECT_LE(lottery_distance(pushforward(*split, Density::uniform(), 4), {0.5, 0.5, 0, 0}), kMeasTol);

  const auto t = scenarios::table1();
  const auto beliefs = t.profile.concerned_beliefs();
  const auto f = realize_lottery_act(beliefs, {0.5, 0.5, 0, 0});
  ASSERT_TRUE(f);
  for (const auto& d : beliefs) EXPECT_LE(lottery_distance(pushforward(*f, d, 4), {0.5, 0.5, 0, 0}), kMeasTol);

  const auto point = realize_lottery_act(beliefs, {0, 0, 1, 0});
  ASSERT_TRUE(point);
  EXPECT_EQ(*point, Act::constant(2));
  EXPECT_THROW(realize_lottery_act(beliefs, {0.5, 0.4, 0, 0}), InvalidInput);
}

TEST(RealizeLottery, RoundTripUnderEveryBelief) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<Density> ds;
    for (int i = 0; i < 1 + t % 4; ++i) ds.push_back(random_density(rng, 2 + t % 3));
    Lottery lot(5);
    double s = 0.0;
    for (double& p : lot) s += (p = u(rng));
    for (double& p : lot) p /= s;
    const auto f = realize_lottery_act(ds, lot);
    ASSERT_TRUE(f);
    for (const auto& d : ds) EXPECT_LE(lottery_distance(pushforward(*f, d, 5), lot), kMeasTol);
  }
}

TEST(SimpleReduction, PreservesEvVector) {
  const auto t = scenarios::table1();
  const Act three({{{0.0, 0.3}, 0}, {{0.3, 0.6}, 2}, {{0.6, 1.0}, 1}});
  const auto r = simple_reduction(t.profile, three);
  for (std::size_t i = 0; i < 3; ++i)
    EXPECT_NEAR(expected_utility(t.profile.agent(i), r), expected_utility(t.profile.agent(i), three), 1e-12);

  // Already two outcomes per cell: the EV vector is a fixed point.
  const auto again = simple_reduction(t.profile, t.f);
  for (std::size_t i = 0; i < 2; ++i)
    EXPECT_NEAR(expected_utility(t.profile.agent(i), again), expected_utility(t.profile.agent(i), t.f), 1e-12);

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const OutcomeSpace o({"a", "b", "c", "d", "e"});
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t concerned = 1 + trial % 3;
    std::vector<Preference> agents;
    for (std::size_t i = 0; i < 3; ++i)
      agents.push_back(i < concerned ? random_pref(rng, 5) : Preference::indifferent());
    const Profile p(o, agents);
    std::vector<Act::Segment> segs;
    double lo = 0.0;
    while (lo < 1.0) {
      const double hi = std::min(1.0, lo + 0.05 + 0.2 * u(rng));
      segs.push_back({{lo, hi}, static_cast<std::size_t>(u(rng) * 5)});
      lo = hi;
    }
    const Act f(segs);
    const auto g = simple_reduction(p, f);
    for (std::size_t i = 0; i < 3; ++i)
      EXPECT_NEAR(expected_utility(p.agent(i), g), expected_utility(p.agent(i), f), 1e-12);
  }
}

TEST(PreferenceDistance, Examples) {
  const auto t = scenarios::table1();
  const auto& a1 = t.profile.agent(0);
  const auto& a2 = t.profile.agent(1);
  EXPECT_EQ(preference_distance(a1, a1), 0.0);
  EXPECT_NEAR(preference_distance(a1, a2), 1.0, 1e-12);
  EXPECT_NEAR(preference_distance(a1, Preference::indifferent()), 1.0, 1e-12);
  EXPECT_TRUE(outside_metric(a1, Preference::indifferent()));
  EXPECT_FALSE(outside_metric(a1, a2));
}

TEST(PreferenceDistance, MatchesEnumerationAndIsAMetric) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 60; ++t) {
    const auto p = random_pref(rng, 4), q = random_pref(rng, 4), r = random_pref(rng, 4);
    const double pq = preference_distance(p, q);
    EXPECT_NEAR(pq, brute_distance(p, q, 4), 1e-12);
    EXPECT_EQ(pq, preference_distance(q, p));
    EXPECT_LE(preference_distance(p, r), pq + preference_distance(q, r) + 2 * kExactTol);
    EXPECT_GE(pq, 0.0);
    EXPECT_LE(pq, 1.0 + kExactTol);
  }
}

TEST(DiscountToBelief, Examples) {
  const auto u = discount_to_belief({0.0, 1.0}, {3.0});
  EXPECT_EQ(u, Density::uniform());
  const auto d = discount_to_belief({0.0, 0.25, 0.5, 0.75, 1.0}, {2, 1, 0.5, 0.25});
  const double want[] = {2 / 0.9375, 1 / 0.9375, 0.5 / 0.9375, 0.25 / 0.9375};
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(d.values()[k], want[k], 1e-12);
  EXPECT_THROW(discount_to_belief({0.0, 0.5, 1.0}, {0.0, 0.0}), ZeroFunction);
}
