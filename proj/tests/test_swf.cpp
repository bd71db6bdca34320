#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "savage/harness.hpp"
#include "savage/scenarios.hpp"
#include "savage/swf.hpp"

using namespace savage;

namespace {

const OutcomeSpace kFour({"a", "b", "c", "d"});

double mass_w1(const Preference& p) { return measure(p.belief(), scenarios::omega1()); }

// Same ordering on every pair from `acts`.
void expect_same_ranking(const Preference& a, const Preference& b, const std::vector<Act>& acts) {
  for (const auto& f : acts)
    for (const auto& g : acts) EXPECT_EQ(compare(a, f, g, 1e-9).order, compare(b, f, g, 1e-9).order);
}

std::vector<Act> sample_acts(std::uint64_t seed, std::size_t n, std::size_t outcomes) {
  auto rng = gen::trial_rng(seed, 0);
  std::vector<Act> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(gen::act(rng, outcomes));
  return out;
}

}  // namespace

TEST(Baru, AllIndifferent) {
  const Profile p(kFour, {Preference(), Preference(), Preference()});
  EXPECT_TRUE(baru(p).preference.is_indifferent());
}

TEST(Baru, Table1) {
  const auto t = scenarios::table1();
  const auto r = baru(t.profile);
  EXPECT_NEAR(mass_w1(r.preference), 0.5, 1e-12);
  // Summed utility (1, 1, 1.7, 0) normalized by 1.7.
  const std::vector<double> u{1 / 1.7, 1 / 1.7, 1.0, 0.0};
  for (std::size_t x = 0; x < 4; ++x) EXPECT_NEAR(r.preference.utility()(x), u[x], 1e-12);
  EXPECT_NEAR(1.7 * expected_utility(r.preference, t.f), 1.0, 1e-12);
  EXPECT_NEAR(1.7 * expected_utility(r.preference, t.g), 1.7, 1e-12);
  EXPECT_EQ(compare(r.preference, t.f, t.g).order, Order::kSecond);
  EXPECT_EQ(r.concerned, (std::vector<std::size_t>{0, 1}));
}

TEST(Baru, SingleConcernedAgentIsReproduced) {
  const auto t = scenarios::table1();
  const Profile p(kFour, {Preference(), t.profile.agent(1), Preference()});
  EXPECT_EQ(baru(p).preference, t.profile.agent(1));
}

TEST(Baru, CancelingCommonUtilityIsIndifferent) {
  const Profile p(kFour, {Preference(Density::uniform(), Utility({1, 0, 0, 0})),
                          Preference(Density::uniform(), Utility({0, 1, 1, 1})), Preference()});
  const auto r = baru(p);
  EXPECT_TRUE(r.preference.is_indifferent());
  ASSERT_TRUE(r.belief);
  EXPECT_EQ(*r.belief, Density::uniform());
}

TEST(Baru, BeliefIsArithmeticMean) {
  for (std::uint64_t t = 0; t < 100; ++t) {
    auto rng = gen::trial_rng(17, t);
    const auto p = gen::profile(rng, 1);
    const auto r = baru(p);
    if (r.preference.is_indifferent()) continue;
    const auto e = EventSet({{gen::uniform(rng, 0, 0.5), gen::uniform(rng, 0.5, 1)}});
    double mean = 0.0;
    for (std::size_t i : p.concerned()) mean += measure(p.agent(i).belief(), e);
    mean /= static_cast<double>(p.concerned().size());
    EXPECT_NEAR(measure(r.preference.belief(), e), mean, 1e-12);
  }
}

TEST(Baru, PermutationAndIndifferentInsertion) {
  for (std::uint64_t t = 0; t < 100; ++t) {
    auto rng = gen::trial_rng(19, t);
    const auto p = gen::profile(rng, 1);
    std::vector<std::size_t> perm(p.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    EXPECT_EQ(baru(p.permuted(perm)).preference, baru(p).preference);
    auto agents = p.agents();
    agents.push_back(Preference());
    EXPECT_EQ(baru(Profile(p.outcomes(), agents)).preference, baru(p).preference);
  }
}

TEST(Baru, AffineRawUtilityInvariance) {
  const auto t = scenarios::table1();
  const std::vector<double> raw{1, 3, 2.6, 1};  // agent 2 is 2u + 1
  const Profile moved(kFour, {t.profile.agent(0), Preference(t.profile.agent(1).belief(), normalize_utility(raw)),
                              Preference()});
  const auto acts = sample_acts(3, 12, 4);
  expect_same_ranking(baru(moved).preference, baru(t.profile).preference, acts);
}

TEST(Weighted, Examples) {
  const auto t = scenarios::table1();
  const auto ones = weighted(t.profile, {{1, 1, 1}, {1, 1, 1}});
  EXPECT_EQ(ones.preference, baru(t.profile).preference);

  const auto r = weighted(t.profile, {{2, 1, 1}, {2, 1, 1}});
  EXPECT_NEAR(mass_w1(r.preference), (2 * 0.9 + 0.1) / 3, 1e-12);
  const std::vector<double> u{2 / 2.6, 1 / 2.6, 1.0, 0.0};
  for (std::size_t x = 0; x < 4; ++x) EXPECT_NEAR(r.preference.utility()(x), u[x], 1e-12);

  const auto scaled = weighted(t.profile, {{14, 7, 7}, {14, 7, 7}});
  expect_same_ranking(scaled.preference, r.preference, sample_acts(5, 12, 4));
  EXPECT_THROW(weighted(t.profile, {{1, 0, 1}, {1, 1, 1}}), InvalidInput);
}

TEST(Swf6, Examples) {
  const auto t = scenarios::table1();
  const auto r = swf6_double_weight(t.profile);
  EXPECT_NEAR(mass_w1(r.preference), 1.9 / 3, 1e-12);
  const Profile without(kFour, {Preference(), t.profile.agent(0), t.profile.agent(1)});
  EXPECT_EQ(swf6_double_weight(without).preference, baru(without).preference);
  const std::size_t swap[] = {1, 0, 2};
  EXPECT_NE(swf6_double_weight(t.profile.permuted(swap)).preference, r.preference);
}

TEST(Swf4, Examples) {
  const auto t = scenarios::table1();
  EXPECT_NEAR(mass_w1(swf4_imposition(t.profile).preference), 0.9, 1e-12);
  const Profile off(kFour, {Preference(), t.profile.agent(0), t.profile.agent(1)});
  EXPECT_EQ(swf4_imposition(off).preference, baru(off).preference);
}

TEST(Swf3, Examples) {
  const auto t = scenarios::table1();
  const Preference phantom(Density::uniform(), Utility({1, 0, 0, 0}));
  const Profile none(kFour, {Preference(), Preference(), Preference()});
  EXPECT_EQ(swf3_phantom(none, phantom).preference, phantom);
  const Profile alone(kFour, {phantom, Preference(), Preference()});
  EXPECT_EQ(swf3_phantom(alone, phantom).preference, phantom);
  EXPECT_NEAR(mass_w1(swf3_phantom(t.profile, phantom).preference), 0.5, 1e-12);
}

TEST(Swf2, Examples) {
  const auto t = scenarios::table1();
  const auto r = swf2_distance_weights(t.profile, t.profile.agent(0));
  EXPECT_NEAR(r.belief_weights[0], 2.0, 1e-12);
  EXPECT_NEAR(r.belief_weights[1], 1.0, 1e-12);
  const Profile same(kFour, {t.profile.agent(0), t.profile.agent(0), Preference()});
  expect_same_ranking(swf2_distance_weights(same, t.profile.agent(0)).preference, baru(same).preference,
                      sample_acts(7, 10, 4));
  for (std::uint64_t k = 0; k < 50; ++k) {
    auto rng = gen::trial_rng(23, k);
    const auto p = gen::profile(rng, 1);
    const auto anchor = Preference(gen::density(rng), gen::utility(rng, p.outcomes().size()));
    for (std::size_t i : p.concerned()) {
      const double w = swf2_distance_weights(p, anchor).belief_weights[i];
      EXPECT_GE(w, 1.0 - kExactTol);
      EXPECT_LE(w, 2.0);
    }
  }
}

TEST(Swf5, Examples) {
  const auto t = scenarios::table1();
  const auto& a = t.profile.agent(0);
  const auto& b = t.profile.agent(1);
  const Profile distinct(kFour, {a, b, Preference()});
  EXPECT_EQ(swf5_shared(distinct).preference, baru(distinct).preference);

  const Profile shared(kFour, {a, a, b});
  const auto r = swf5_shared(shared);
  EXPECT_EQ(r.belief_weights, (std::vector<double>{4, 0, 1}));
  EXPECT_NEAR(mass_w1(r.preference), (4 * 0.9 + 0.1) / 5, 1e-12);

  // Nudging one of the twins splits the group: weight 4 becomes 1 + 1.
  const Preference nudged(scenarios::two_state(0.9 - 1e-7), a.utility());
  const auto split = swf5_shared(Profile(kFour, {a, nudged, b}));
  EXPECT_NEAR(mass_w1(split.preference), (0.9 + 0.9 - 1e-7 + 0.1) / 3, 1e-12);
  EXPECT_GT(preference_distance(r.preference, split.preference), 0.1);
}

TEST(Swf1, UnitSquareImage) {
  // Opposed outcomes a, b plus an outcome both like: the image is the unit square.
  const Profile p(kFour, {Preference(Density::uniform(), Utility({1, 0, 1, 0})),
                          Preference(Density::uniform(), Utility({0, 1, 1, 0})), Preference()});
  const auto np = nash_point(UtilityImage::of(p));
  EXPECT_NEAR(np.point[0], 1.0, 1e-12);
  EXPECT_NEAR(np.point[1], 1.0, 1e-12);
  EXPECT_NEAR(np.weights[0], 1.0, 1e-12);
  EXPECT_NEAR(np.weights[1], 1.0, 1e-12);
  expect_same_ranking(swf1_nash_weights(p).preference, baru(p).preference, sample_acts(9, 12, 4));
}

TEST(Swf1, SingleAgent) {
  const auto t = scenarios::table1();
  const Profile p(kFour, {t.profile.agent(0), Preference(), Preference()});
  const auto np = nash_point(UtilityImage::of(p));
  EXPECT_NEAR(np.point[0], 1.0, 1e-12);
  EXPECT_EQ(swf1_nash_weights(p).preference, t.profile.agent(0));
}

TEST(Swf1, ImageOnTheAxesIsDegenerate) {
  // One segment whose hull is a piece of the first axis.
  const UtilityImage img({{Vec{1.0, 0.0}, Vec{0.0, 0.0}}}, {0.0, 1.0}, {0, 1});
  EXPECT_THROW(nash_point(img), DegenerateNashPoint);
  const UtilityImage img3({{Vec{1.0, 0.0, 0.0}, Vec{0.0, 1.0, 0.0}}}, {0.0, 1.0}, {0, 1});
  EXPECT_THROW(nash_point(img3), DegenerateNashPoint);
}

TEST(Swf1, PlanarNashDominatesGridOracle) {
  for (std::uint64_t t = 0; t < 30; ++t) {
    auto rng = gen::trial_rng(29, t);
    const auto p = gen::profile(rng, 3, 4, 2);
    const auto img = UtilityImage::of(p);
    const auto np = nash_point(img);
    const double best = np.point[0] * np.point[1];
    // Dense sampling of the polygon boundary, where any product maximum lives.
    const auto verts = planar_vertices(img);
    double grid = 0.0;
    for (std::size_t i = 0; i < verts.size(); ++i) {
      const auto& a = verts[i];
      const auto& b = verts[(i + 1) % verts.size()];
      for (int k = 0; k <= 2000; ++k) {
        const double s = k / 2000.0;
        grid = std::max(grid, ((1 - s) * a[0] + s * b[0]) * ((1 - s) * a[1] + s * b[1]));
      }
    }
    EXPECT_GE(best, grid - 1e-12);
    EXPECT_LE(best - grid, 1e-6);
    // Any act's EV vector lies in the image, so it cannot beat the Nash product.
    for (int k = 0; k < 20; ++k) {
      const auto f = gen::act(rng, p.outcomes().size());
      const auto& c = p.concerned();
      EXPECT_LE(expected_utility(p.agent(c[0]), f) * expected_utility(p.agent(c[1]), f), best + 1e-12);
    }
  }
}

TEST(Swf1, ThreeAgentFirstOrderCertificate) {
  for (std::uint64_t t = 0; t < 20; ++t) {
    auto rng = gen::trial_rng(31, t);
    const auto p = gen::profile(rng, 3, 4, 3);
    const auto img = UtilityImage::of(p);
    const auto np = nash_point(img);
    // At the maximizer the hyperplane with normal 1/y supports the image at y.
    Vec c(3);
    for (std::size_t i = 0; i < 3; ++i) c[i] = 1.0 / np.point[i];
    EXPECT_NEAR(img.support(c), 3.0, 1e-9);
    const std::size_t perm[] = {2, 0, 1};
    const auto again = nash_point(UtilityImage::of(p.permuted(perm)));
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(again.point[i], np.point[perm[i]], 1e-9);
  }
}

TEST(ExAnteRu, Examples) {
  const auto t = scenarios::table1();
  const Act acts[] = {t.f, t.g};
  const auto s = ex_ante_ru_scores(t.profile, acts);
  EXPECT_NEAR(s[0], 1.8, 1e-12);
  EXPECT_NEAR(s[1], 1.7, 1e-12);
  const Profile one(kFour, {t.profile.agent(0), Preference(), Preference()});
  EXPECT_NEAR(ex_ante_ru_scores(one, acts)[0], 0.9, 1e-12);

  // Identical beliefs: ex-ante scores rank like baru.
  const Profile common(kFour, {Preference(Density::uniform(), t.profile.agent(0).utility()),
                               Preference(Density::uniform(), t.profile.agent(1).utility()), Preference()});
  const auto sample = sample_acts(11, 15, 4);
  const auto soc = baru(common).preference;
  const auto scores = ex_ante_ru_scores(common, sample);
  for (std::size_t i = 0; i < sample.size(); ++i)
    for (std::size_t j = 0; j < sample.size(); ++j) {
      const double d = scores[i] - scores[j];
      if (std::abs(d) < 1e-9) continue;
      EXPECT_EQ(compare(soc, sample[i], sample[j]).order, d > 0 ? Order::kFirst : Order::kSecond);
    }
}

TEST(GeometricPool, Examples) {
  const Density same[] = {scenarios::two_state(0.3), scenarios::two_state(0.3)};
  EXPECT_EQ(geometric_pool(same), scenarios::two_state(0.3));
  const auto h = scenarios::horses();
  const auto pooled = geometric_pool(h.profile.concerned_beliefs());
  EXPECT_NEAR(measure(pooled, EventSet::interval(2.0 / 3.0, 1.0)), 1.0, 1e-12);
  const Density disjoint[] = {Density({0.0, 0.5, 1.0}, {2, 0}), Density({0.0, 0.5, 1.0}, {0, 2})};
  EXPECT_THROW(geometric_pool(disjoint), NullPool);
}

TEST(MakeSwf, NamesAndParams) {
  const auto t = scenarios::table1();
  for (const auto& name : swf_names()) {
    if (name == "weighted") continue;
    EXPECT_NO_THROW(make_swf(name)(t.profile)) << name;
  }
  EXPECT_THROW(make_swf("weighted"), InvalidInput);
  EXPECT_THROW(make_swf("nope"), InvalidInput);
  SwfParams bad;
  bad.alpha = {1, 1};
  EXPECT_THROW(make_swf("swf5", bad), InvalidInput);
}
