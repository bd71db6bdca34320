#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "savage/lyapunov.hpp"
#include "savage/measure.hpp"

using namespace savage;

namespace {

Density agent1() { return Density({0.0, 0.5, 1.0}, {1.8, 0.2}); }
Density agent2() { return Density({0.0, 0.5, 1.0}, {0.2, 1.8}); }

// Random density with up to `pieces` steps on random cut points.
Density random_density(std::mt19937_64& rng, int pieces) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> b{0.0};
  std::vector<double> cuts;
  for (int k = 1; k < pieces; ++k) cuts.push_back(u(rng));
  std::sort(cuts.begin(), cuts.end());
  for (double c : cuts)
    if (c > b.back() + 1e-3 && c < 1.0 - 1e-3) b.push_back(c);
  b.push_back(1.0);
  std::vector<double> v(b.size() - 1);
  double mass = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    v[k] = 0.05 + u(rng);
    mass += v[k] * (b[k + 1] - b[k]);
  }
  for (double& x : v) x /= mass;
  return Density(b, v);
}

EventSet random_event(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Interval> ivs;
  for (int k = 0; k < 3; ++k) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    ivs.push_back({a, b});
  }
  return EventSet(ivs);
}

// Midpoint-rule integral of d over e; independent of Density::cdf.
double riemann(const Density& d, const EventSet& e, int n = 200000) {
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    const double x = (k + 0.5) / n;
    if (e.contains(x)) total += d.value_at(x) / n;
  }
  return total;
}

}  // namespace

TEST(EventSet, NormalizesAndMerges) {
  EventSet e({{0.5, 0.7}, {0.1, 0.3}, {0.25, 0.4}, {0.6, 0.6}});
  ASSERT_EQ(e.intervals().size(), 2u);
  EXPECT_EQ(e.intervals()[0], (Interval{0.1, 0.4}));
  EXPECT_EQ(e.intervals()[1], (Interval{0.5, 0.7}));
  EXPECT_DOUBLE_EQ(e.length(), 0.5);
  EXPECT_THROW(EventSet({{0.5, 0.2}}), InvalidInput);
  EXPECT_THROW(EventSet({{-0.1, 0.2}}), InvalidInput);
}

TEST(EventSet, BooleanAlgebra) {
  const auto a = EventSet::interval(0.1, 0.6), b = EventSet::interval(0.4, 0.9);
  EXPECT_EQ(a.intersect(b), EventSet::interval(0.4, 0.6));
  EXPECT_EQ(a.unite(b), EventSet::interval(0.1, 0.9));
  EXPECT_EQ(a.minus(b), EventSet::interval(0.1, 0.4));
  EXPECT_EQ(a.complement().complement(), a);
  EXPECT_EQ(a.unite(a.complement()), EventSet::whole());
  EXPECT_TRUE(a.intersect(a.complement()).empty());
}

TEST(Density, RejectsBadInput) {
  EXPECT_THROW(Density({0.0, 1.0}, {0.9}), InvalidInput);
  EXPECT_THROW(Density({0.0, 0.5}, {2.0}), InvalidInput);
  EXPECT_THROW(Density({0.0, 0.5, 0.5, 1.0}, {1.0, 1.0, 1.0}), InvalidInput);
  EXPECT_THROW(Density({0.0, 0.5, 1.0}, {-0.2, 2.2}), InvalidInput);
  EXPECT_THROW(Density({0.0, 1.0}, {1.0, 1.0}), InvalidInput);
}

TEST(Measure, Examples) {
  EXPECT_NEAR(measure(Density::uniform(), EventSet::interval(0.0, 0.3)), 0.3, 1e-15);
  EXPECT_NEAR(measure(agent1(), EventSet::interval(0.0, 0.5)), 0.9, 1e-15);
  EXPECT_EQ(measure(agent1(), EventSet()), 0.0);
}

TEST(Measure, MatchesRiemannSum) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 40; ++t) {
    const auto d = random_density(rng, 6);
    const auto e = random_event(rng);
    EXPECT_NEAR(measure(d, e), riemann(d, e), 1e-4);
  }
}

TEST(Measure, FinitelyAdditive) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const auto d = random_density(rng, 5);
    const auto a = random_event(rng), b = random_event(rng);
    const double lhs = measure(d, a.unite(b)) + measure(d, a.intersect(b));
    EXPECT_NEAR(lhs, measure(d, a) + measure(d, b), 1e-12);
    EXPECT_NEAR(measure(d, a) + measure(d, a.complement()), 1.0, 1e-12);
  }
}

TEST(Density, FromCellsAndMix) {
  const std::vector<double> p{0.2, 0.5, 0.3};
  const auto d = Density::from_cells(p);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(measure(d, EventSet::interval(k / 3.0, (k + 1) / 3.0)), p[k], 1e-12);
  const Density both[] = {agent1(), agent2()};
  const double w[] = {2.0, 1.0};
  EXPECT_NEAR(measure(mix(both, w), EventSet::interval(0.0, 0.5)), (2 * 0.9 + 0.1) / 3, 1e-12);
  EXPECT_NEAR(belief_distance(agent1(), agent2()), 0.8, 1e-12);
  EXPECT_EQ(belief_distance(agent1(), agent1()), 0.0);
}

TEST(LeftSubevent, HitsMass) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const auto d = random_density(rng, 5);
    const auto dom = random_event(rng);
    const double m = u(rng) * measure(d, dom);
    const auto f = left_subevent(d, dom, m);
    EXPECT_NEAR(measure(d, f), m, 1e-12);
    EXPECT_EQ(f.minus(dom), EventSet());
  }
}

TEST(Lyapunov, Examples) {
  const Density one[] = {Density::uniform()};
  const double half[] = {0.5};
  const auto e = lyapunov_event(one, half);
  ASSERT_TRUE(e);
  EXPECT_NEAR(measure(Density::uniform(), *e), 0.5, kMeasTol);

  const Density t1[] = {agent1(), agent2()};
  const double both_half[] = {0.5, 0.5};
  const auto e2 = lyapunov_event(t1, both_half);
  ASSERT_TRUE(e2);
  EXPECT_NEAR(measure(agent1(), *e2), 0.5, kMeasTol);
  EXPECT_NEAR(measure(agent2(), *e2), 0.5, kMeasTol);
  // The hand-built witness for the same targets.
  const EventSet hand({{0.0, 0.25}, {0.5, 0.75}});
  EXPECT_NEAR(measure(agent1(), hand), 0.5, 1e-15);
  EXPECT_NEAR(measure(agent2(), hand), 0.5, 1e-15);

  const double apart[] = {1.0, 0.0};
  EXPECT_FALSE(lyapunov_event(t1, apart));
}

TEST(Lyapunov, RoundTripOnRandomFeasibleTargets) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<Density> ds;
    const int n = 1 + t % 4;
    for (int i = 0; i < n; ++i) ds.push_back(random_density(rng, 4));
    // Targets from a known event are feasible by construction.
    const auto witness = random_event(rng);
    std::vector<double> targets;
    for (const auto& d : ds) targets.push_back(measure(d, witness));
    const auto e = lyapunov_event(ds, targets);
    ASSERT_TRUE(e) << "trial " << t;
    for (int i = 0; i < n; ++i) EXPECT_NEAR(measure(ds[i], *e), targets[i], kMeasTol);
  }
}

TEST(Halving, Examples) {
  const auto flat = halving_subalgebra(Density::uniform(), Density::uniform(), 1);
  ASSERT_EQ(flat.cells.size(), 2u);
  for (const auto& c : flat.cells) EXPECT_NEAR(measure(Density::uniform(), c), 0.5, kMeasTol);

  const auto deep = halving_subalgebra(agent1(), agent2(), 3);
  ASSERT_EQ(deep.cells.size(), 8u);
  EventSet all;
  double covered = 0.0;
  for (const auto& c : deep.cells) {
    EXPECT_NEAR(measure(agent1(), c), 0.125, kMeasTol);
    EXPECT_NEAR(measure(agent2(), c), 0.125, kMeasTol);
    EXPECT_TRUE(all.intersect(c).empty());
    all = all.unite(c);
    covered += c.length();
  }
  EXPECT_NEAR(covered, 1.0, 1e-12);
}

TEST(Coarsening, Examples) {
  const auto d = agent1();
  EXPECT_EQ(pushforward_coarsening(Coarsening::identity(), d), d);
  const Coarsening swap({{{0.0, 0.5}, {0.0, 1.0}, false}, {{0.5, 1.0}, {0.0, 1.0}, true}});
  const auto flat = pushforward_coarsening(swap, d);
  for (double x : {0.1, 0.4, 0.6, 0.95}) EXPECT_NEAR(flat.value_at(x), 1.0, 1e-12);
  EXPECT_NEAR(swap(0.25), 0.5, 1e-15);
  EXPECT_NEAR(swap(0.75), 0.5, 1e-15);
}

TEST(Coarsening, PushforwardMatchesPreimageMeasure) {
  std::mt19937_64 rng(9);
  const Coarsening q({{{0.0, 0.2}, {0.0, 0.5}, false},
                      {{0.2, 0.6}, {0.5, 1.0}, true},
                      {{0.6, 1.0}, {0.0, 1.0}, false}});
  for (int t = 0; t < 100; ++t) {
    const auto d = random_density(rng, 5);
    const auto pf = pushforward_coarsening(q, d);
    const auto e = random_event(rng);
    EXPECT_NEAR(measure(pf, e), measure(d, q.preimage(e)), 1e-12);
  }
  EXPECT_THROW(Coarsening({{{0.0, 0.5}, {0.0, 0.5}, false}, {{0.5, 1.0}, {0.0, 0.4}, false}}), InvalidInput);
  EXPECT_THROW(Coarsening({{{0.0, 0.4}, {0.0, 1.0}, false}}), InvalidInput);
}
