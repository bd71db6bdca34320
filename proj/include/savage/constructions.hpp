#pragma once

// Acts built to order: acts inducing a prescribed lottery under several
// beliefs at once, and the reduction of an act to a simple act with the
// same expected-utility vector.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "savage/lp.hpp"
#include "savage/prefs.hpp"

namespace savage {

inline void validate_lottery(const Lottery& l) {
  double sum = 0.0;
  for (double p : l) {
    require(std::isfinite(p) && p >= 0.0, "lottery entries must be nonnegative");
    sum += p;
  }
  require(std::abs(sum - 1.0) <= kMeasTol, "lottery must sum to 1");
}

/// An act whose pushforward under EVERY belief equals `lottery` within kMeasTol.
///
/// Solves for allocation fractions lambda_{s,x} per refinement segment and lays
/// the outcomes out left to right inside each segment. nullopt only signals an
/// LP failure; lambda_{s,x} = lottery(x) is always a solution.
inline std::optional<Act> realize_lottery_act(std::span<const Density> beliefs, const Lottery& lottery) {
  require(!beliefs.empty(), "need at least one belief");
  validate_lottery(lottery);
  const std::size_t nx = lottery.size();
  const auto grid = common_refinement(beliefs);
  const std::size_t ns = grid.size() - 1;
  auto var = [nx](std::size_t s, std::size_t x) { return s * nx + x; };

  lp::Problem prob(ns * nx);
  for (std::size_t s = 0; s < ns; ++s) {
    std::vector<double> row(ns * nx, 0.0);
    for (std::size_t x = 0; x < nx; ++x) row[var(s, x)] = 1.0;
    prob.add_row(std::move(row), lp::Sense::kEq, 1.0);
  }
  for (const auto& d : beliefs) {
    const auto m = segment_masses(d, grid);
    for (std::size_t x = 0; x < nx; ++x) {
      std::vector<double> row(ns * nx, 0.0);
      for (std::size_t s = 0; s < ns; ++s) row[var(s, x)] = m[s];
      prob.add_row(std::move(row), lp::Sense::kEq, lottery[x]);
    }
  }
  const auto sol = prob.solve();
  if (!sol.feasible()) return std::nullopt;

  std::vector<Act::Segment> segs;
  for (std::size_t s = 0; s < ns; ++s) {
    double total = 0.0;
    for (std::size_t x = 0; x < nx; ++x) total += std::max(0.0, sol.x[var(s, x)]);
    double cursor = grid[s];
    std::size_t last = nx;
    for (std::size_t x = 0; x < nx; ++x)
      if (sol.x[var(s, x)] > 0.0) last = x;
    if (last == nx) return std::nullopt;
    for (std::size_t x = 0; x < nx; ++x) {
      const double lam = std::max(0.0, sol.x[var(s, x)]) / total;
      if (lam <= 0.0) continue;
      const double end = x == last ? grid[s + 1] : std::min(grid[s + 1], cursor + lam * (grid[s + 1] - grid[s]));
      segs.push_back({{cursor, end}, x});
      cursor = end;
    }
  }
  Act act(std::move(segs));
  for (const auto& d : beliefs)
    if (lottery_distance(pushforward(act, d, nx), lottery) > kMeasTol) return std::nullopt;
  return act;
}

/// Simple act with the same expected-utility vector as `f` for every agent.
///
/// Outcomes are grouped by the utility vector of the non-focal agents; inside
/// each group's event the focal agent's conditional mean is matched by mixing
/// two outcomes, the upper one on a left sub-event.
inline Act simple_reduction(const Profile& profile, const Act& f, std::optional<std::size_t> focal = std::nullopt) {
  const auto concerned = profile.concerned();
  require(!concerned.empty(), "simple reduction needs a represented agent");
  const std::size_t fi = focal.value_or(concerned.front());
  require(!profile.agent(fi).is_indifferent(), "focal agent must be represented");
  const std::size_t nx = profile.outcomes().size();
  const auto& pi = profile.agent(fi).belief();
  const auto& ui = profile.agent(fi).utility();

  // Group outcomes by the utility vector of the other concerned agents.
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::vector<double>> keys;
  for (std::size_t x = 0; x < nx; ++x) {
    std::vector<double> key;
    for (std::size_t j : concerned)
      if (j != fi) key.push_back(profile.agent(j).utility()(x));
    auto same = [&](const std::vector<double>& k) {
      for (std::size_t t = 0; t < k.size(); ++t)
        if (std::abs(k[t] - key[t]) > kExactTol) return false;
      return true;
    };
    auto it = std::find_if(keys.begin(), keys.end(), same);
    if (it == keys.end()) {
      keys.push_back(key);
      groups.push_back({x});
    } else {
      groups[static_cast<std::size_t>(it - keys.begin())].push_back(x);
    }
  }

  std::vector<std::pair<EventSet, std::size_t>> parts;
  for (const auto& group : groups) {
    EventSet ev;
    double weighted = 0.0;
    std::vector<std::size_t> used;
    for (std::size_t x : group) {
      const auto e = f.event_of(x);
      if (e.empty()) continue;
      used.push_back(x);
      ev = ev.unite(e);
      weighted += measure(pi, e) * ui(x);
    }
    if (ev.empty()) continue;
    const double mass = measure(pi, ev);
    if (mass <= 0.0) {
      parts.push_back({ev, used.front()});
      continue;
    }
    const double mean = weighted / mass;
    std::size_t up = used.front(), down = used.front();
    for (std::size_t x : used) {
      if (ui(x) >= mean && (ui(up) < mean || ui(x) < ui(up))) up = x;
      if (ui(x) <= mean && (ui(down) > mean || ui(x) > ui(down))) down = x;
    }
    if (ui(up) < mean) up = down;    // rounding: mean above every value
    if (ui(down) > mean) down = up;  // rounding: mean below every value
    if (ui(up) == ui(down)) {
      parts.push_back({ev, up});
      continue;
    }
    const double alpha = std::clamp((mean - ui(down)) / (ui(up) - ui(down)), 0.0, 1.0);
    const auto upper = left_subevent(pi, ev, alpha * mass);
    parts.push_back({upper, up});
    parts.push_back({ev.minus(upper), down});
  }
  return Act::from_events(parts);
}

}  // namespace savage
