#pragma once

// Worked examples: the two-state disagreement example (Table 1), the horse
// race with complementary ignorance, and the utility-image quadrangle.
// Two-agent examples carry a third, completely indifferent agent and a fourth
// outcome "d" with utility 0 so that profiles meet the standing assumptions.

#include <cstddef>
#include <optional>
#include <utility>
#include <string>
#include <vector>

#include "savage/axioms.hpp"
#include "savage/swf.hpp"

namespace savage::scenarios {

/// State w1 = [0, 0.5), w2 = [0.5, 1) with probabilities (p, 1 - p).
inline Density two_state(double p) { return Density({0.0, 0.5, 1.0}, {2.0 * p, 2.0 * (1.0 - p)}); }

inline EventSet omega1() { return EventSet::interval(0.0, 0.5); }

struct Table1 {
  Profile profile;
  Act f;  // a on w1, b on w2
  Act g;  // constant c
};

inline Table1 table1() {
  OutcomeSpace o({"a", "b", "c", "d"});
  Profile p(o, {Preference(two_state(0.9), Utility({1.0, 0.0, 0.9, 0.0})),
                Preference(two_state(0.1), Utility({0.0, 1.0, 0.8, 0.0})), Preference::indifferent()});
  return {p, Act::bet(0, omega1(), 1), Act::constant(2)};
}

/// Range of q(E) over which some common belief q makes every concerned agent
/// strictly prefer f to g. The best margin is concave in the pinned mass, so
/// the maximizer is found by ternary search and both ends by bisection.
inline std::optional<std::pair<double, double>> strict_common_belief_range(const Profile& p, const Act& f,
                                                                           const Act& g, const EventSet& e) {
  auto margin = [&](double m) { return common_belief_margin(p, f, g, std::pair{e, m}).value_or(-1e300); };
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
    (margin(a) < margin(b) ? lo : hi) = margin(a) < margin(b) ? a : b;
  }
  const double peak = 0.5 * (lo + hi);
  if (margin(peak) <= kExactTol) return std::nullopt;
  auto edge = [&](double in, double out) {
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (in + out);
      (margin(mid) > kExactTol ? in : out) = mid;
    }
    return 0.5 * (in + out);
  };
  return std::pair{edge(peak, 0.0), edge(peak, 1.0)};
}

struct HorseRace {
  Profile profile;
  Act bet1;  // $1 if horse 1 or 2 wins
  Act bet2;  // $1 if horse 3 wins
};

/// Horse k wins on [(k-1)/3, k/3). Agent 1 learned horse 1 cannot race,
/// agent 2 learned horse 2 cannot race.
inline HorseRace horses() {
  OutcomeSpace o({"$0", "$1", "pad1", "pad2"});
  const std::vector<double> b{0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0};
  Utility money({0.0, 1.0, 0.0, 0.0});
  Profile p(o, {Preference(Density(b, {0.0, 1.5, 1.5}), money), Preference(Density(b, {1.5, 0.0, 1.5}), money),
                Preference::indifferent()});
  const auto first_two = EventSet::interval(0.0, 2.0 / 3.0);
  return {p, Act::bet(1, first_two, 0), Act::bet(0, first_two, 1)};
}

struct HorseRaceReport {
  double agent_ev[2][2] = {};  // [agent][bet]
  bool bets_restricted = false;  // each bet induces the same lottery under both beliefs
  double baru_ev[2] = {};
  Order baru_order = Order::kIndifferent;
  Density pooled;
  double pooled_horse3 = 0.0;
  double geometric_ev[2] = {};
  Order geometric_order = Order::kIndifferent;
};

inline HorseRaceReport complementary_ignorance_demo() {
  const auto h = horses();
  HorseRaceReport r;
  const Act* bets[] = {&h.bet1, &h.bet2};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t b = 0; b < 2; ++b) r.agent_ev[i][b] = expected_utility(h.profile.agent(i), *bets[b]);
  const std::size_t nx = h.profile.outcomes().size();
  r.bets_restricted = true;
  for (const Act* b : bets)
    r.bets_restricted = r.bets_restricted && lottery_distance(pushforward(*b, h.profile.agent(0).belief(), nx),
                                                              pushforward(*b, h.profile.agent(1).belief(), nx)) <=
                                                 kMeasTol;
  const auto soc = baru(h.profile).preference;
  for (std::size_t b = 0; b < 2; ++b) r.baru_ev[b] = expected_utility(soc, *bets[b]);
  r.baru_order = compare(soc, h.bet1, h.bet2).order;
  r.pooled = geometric_pool(h.profile.concerned_beliefs());
  r.pooled_horse3 = measure(r.pooled, EventSet::interval(2.0 / 3.0, 1.0));
  const Preference geo(r.pooled, h.profile.agent(0).utility());
  for (std::size_t b = 0; b < 2; ++b) r.geometric_ev[b] = expected_utility(geo, *bets[b]);
  r.geometric_order = compare(geo, h.bet1, h.bet2).order;
  return r;
}

struct Fig1 {
  Profile p;        // before the change
  Profile p2;       // after changing preferences over a redundant outcome
  std::vector<std::size_t> subset;  // O'
};

/// Common uniform belief; outcomes q1..q4 span the quadrangle with corners
/// (.4,0), (1,.5), (.9,1), (0,.7) in utility space; outcome "r" sits inside
/// it and moves (staying inside) in the second profile.
inline Fig1 fig1() {
  OutcomeSpace o({"q1", "q2", "q3", "q4", "r"});
  auto make = [&](double r1, double r2) {
    return Profile(o, {Preference(Density::uniform(), Utility({0.4, 1.0, 0.9, 0.0, r1})),
                       Preference(Density::uniform(), Utility({0.0, 0.5, 1.0, 0.7, r2})),
                       Preference::indifferent()});
  };
  return {make(0.52, 0.35), make(0.6, 0.75), {0, 1, 2, 3}};
}

/// Three-outcome variant: x0 = (0,0), x1 = (1,1), x* = (0.6,0) span a
/// triangle; the fourth outcome moves inside it. Beliefs differ between the
/// agents, so the image is not just the outcome hull.
inline Fig1 fig1_lemma() {
  OutcomeSpace o({"x0", "x1", "xs", "y"});
  const Density b1({0.0, 0.5, 1.0}, {1.2, 0.8});
  const Density b2({0.0, 0.25, 1.0}, {0.4, 1.2});
  auto make = [&](double r1, double r2) {
    return Profile(o, {Preference(b1, Utility({0.0, 1.0, 0.6, r1})), Preference(b2, Utility({0.0, 1.0, 0.0, r2})),
                       Preference::indifferent()});
  };
  return {make(0.5, 0.3), make(0.7, 0.5), {0, 1, 2}};
}

}  // namespace savage::scenarios
