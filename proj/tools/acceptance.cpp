// Acceptance run: one PASS/FAIL line per criterion, exit code 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "savage/harness.hpp"
#include "savage/lyapunov.hpp"
#include "savage/scenarios.hpp"

using namespace savage;

namespace {

constexpr std::uint64_t kSeed = 20240601;
constexpr std::size_t kTrials = 10000;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void expect(Outcome& o, bool cond, const std::string& what) {
  if (!cond && o.pass) {
    o.pass = false;
    o.detail = what;
  }
}

double secs_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

Outcome table1_values() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto t = scenarios::table1();
  const double want[2][2] = {{0.9, 0.9}, {0.9, 0.8}};
  const Act* acts[] = {&t.f, &t.g};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 2; ++k) {
      const double ev = expected_utility(t.profile.agent(i), *acts[k]);
      expect(o, std::abs(ev - want[i][k]) <= 1e-12, "EV mismatch for agent " + std::to_string(i + 1));
    }
  const double dt = secs_since(t0);
  expect(o, dt < 1.0, "runtime " + std::to_string(dt) + " s");
  o.detail = o.pass ? "agent 1: f 0.9, g 0.9; agent 2: f 0.9, g 0.8" : o.detail;
  return o;
}

Outcome footnote_threshold() {
  Outcome o;
  const auto t = scenarios::table1();
  const auto w1 = scenarios::omega1();
  auto both_prefer_g = [&](double p) {
    const auto m = common_belief_margin(t.profile, t.g, t.f, std::pair{w1, p});
    return m && *m > kExactTol;
  };
  expect(o, !both_prefer_g(0.2 - 1e-6), "feasible below 0.2");
  expect(o, both_prefer_g(0.2 + 1e-6), "infeasible above 0.2");
  expect(o, both_prefer_g(0.9 - 1e-6), "infeasible below 0.9");
  expect(o, !both_prefer_g(0.9 + 1e-6), "feasible above 0.9");
  const auto r = scenarios::strict_common_belief_range(t.profile, t.g, t.f, w1);
  expect(o, r && std::abs(r->first - 0.2) <= 1e-9 && std::abs(r->second - 0.9) <= 1e-9, "region is not (0.2, 0.9)");
  const auto sp = detect_spurious_unanimity(t.profile, t.f, t.g);
  expect(o, sp.unanimous_weak && !sp.common_belief_exists && sp.spurious, "spurious unanimity not detected");
  if (o.pass) o.detail = "both prefer g exactly for P(w1) in (0.2, 0.9); unanimity for f is spurious";
  return o;
}

Outcome full_pareto_failure() {
  Outcome o;
  const auto t = scenarios::table1();
  const auto res = baru(t.profile);
  const auto& soc = res.preference;
  double ev[2] = {};
  const Act* acts[] = {&t.f, &t.g};
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t i : res.concerned)
      ev[k] += expected_utility(Preference(soc.belief(), t.profile.agent(i).utility()), *acts[k]);
  expect(o, std::abs(ev[0] - 1.0) <= 1e-12 && std::abs(ev[1] - 1.7) <= 1e-12, "summed EVs differ from 1.0 / 1.7");
  expect(o, compare(soc, t.g, t.f).order == Order::kFirst, "baru does not strictly prefer g");
  for (std::size_t i = 0; i < 2; ++i)
    expect(o, compare(t.profile.agent(i), t.f, t.g).order != Order::kSecond, "unanimity for f missing");
  if (o.pass) o.detail = "EV(f) = 1.0, EV(g) = 1.7, g ≻ f against unanimous weak preference for f";
  return o;
}

Outcome horse_race() {
  Outcome o;
  const auto r = scenarios::complementary_ignorance_demo();
  expect(o, std::abs(r.pooled_horse3 - 1.0) <= 1e-12, "pool does not put mass 1 on horse 3");
  expect(o, r.geometric_order == Order::kSecond, "geometric pool does not rank bet 2 above bet 1");
  expect(o, r.baru_order == Order::kIndifferent, "baru is not indifferent");
  expect(o, std::abs(r.baru_ev[0] - 0.5) <= 1e-12 && std::abs(r.baru_ev[1] - 0.5) <= 1e-12, "baru EVs not 0.5");
  if (o.pass) o.detail = "pool P(horse 3) = 1, bet 2 ≻ bet 1; baru EVs 0.5 / 0.5";
  return o;
}

Outcome independence_matrix() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<Axiom> six(all_axioms().begin(), all_axioms().begin() + 6);
  std::string summary;
  for (const char* name : {"swf1", "swf2", "swf3", "swf4", "swf5", "swf6"}) {
    const auto swf = make_swf(name);
    const auto expected = expected_violations(name);
    std::string found;
    for (Axiom a : six) {
      const auto v = run_axiom(swf, a, kTrials, kSeed, workers());
      if (v.violated()) found += (found.empty() ? "" : "+") + axiom_name(a);
      if (v.violated() != (expected.count(a) > 0))
        expect(o, false, std::string(name) + ": " + axiom_name(a) + " " + verdict_name(v.verdict));
      if (!v.violated() && v.trials < kTrials) expect(o, false, std::string(name) + ": short run");
    }
    summary += std::string(summary.empty() ? "" : "; ") + name + " violates " + found;
  }
  const double dt = secs_since(t0);
  expect(o, dt < 300.0, "runtime " + std::to_string(dt) + " s");
  if (o.pass) o.detail = summary + " (" + std::to_string(static_cast<int>(dt)) + " s)";
  return o;
}

Outcome baru_suite() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t rejected = 0;
  for (Axiom a : all_axioms()) {
    const auto v = run_axiom(baru, a, kTrials, kSeed, workers());
    rejected += v.rejected;
    expect(o, v.verdict == Verdict::kSatisfied && v.trials == kTrials,
           axiom_name(a) + " " + verdict_name(v.verdict) + (v.witness ? ": " + v.witness->detail : ""));
  }
  const double dt = secs_since(t0);
  expect(o, dt < 300.0, "runtime " + std::to_string(dt) + " s");
  if (o.pass)
    o.detail = "six axioms and restricted Pareto Satisfied-on-sample, " + std::to_string(kTrials) +
               " trials each, " + std::to_string(rejected) + " rejected (" + std::to_string(static_cast<int>(dt)) +
               " s)";
  return o;
}

Outcome constructive_lemmas() {
  Outcome o;
  double worst_event = 0.0, worst_lottery = 0.0;
  for (std::size_t trial = 0; trial < 1000; ++trial) {
    auto rng = gen::trial_rng(kSeed, trial);
    const std::size_t n = gen::pick(rng, 1, 4);
    std::vector<Density> ds;
    for (std::size_t i = 0; i < n; ++i) ds.push_back(gen::density(rng, 5));
    const auto grid = common_refinement(ds);
    expect(o, grid.size() - 1 <= 20, "more than 20 segments");
    // Feasible targets: masses of a random choice of left fractions.
    std::vector<double> targets(n, 0.0);
    for (std::size_t s = 0; s + 1 < grid.size(); ++s) {
      const double lam = gen::uniform(rng);
      const EventSet left = EventSet::interval(grid[s], grid[s] + lam * (grid[s + 1] - grid[s]));
      for (std::size_t i = 0; i < n; ++i) targets[i] += measure(ds[i], left);
    }
    const auto e = lyapunov_event(ds, targets);
    expect(o, e.has_value(), "feasible target reported infeasible");
    if (e)
      for (std::size_t i = 0; i < n; ++i) worst_event = std::max(worst_event, std::abs(measure(ds[i], *e) - targets[i]));
    const std::size_t nx = gen::pick(rng, 4, 6);
    const auto lot = gen::lottery(rng, nx);
    const auto f = realize_lottery_act(ds, lot);
    expect(o, f.has_value(), "lottery not realized");
    if (f)
      for (const auto& d : ds) worst_lottery = std::max(worst_lottery, lottery_distance(pushforward(*f, d, nx), lot));
  }
  expect(o, worst_event <= 1e-9, "lyapunov round trip error " + std::to_string(worst_event));
  expect(o, worst_lottery <= 1e-9, "lottery round trip error " + std::to_string(worst_lottery));
  const auto t = scenarios::table1();
  double worst_cell = 0.0;
  std::size_t cells = 0;
  const Density pairs[][2] = {{t.profile.agent(0).belief(), t.profile.agent(1).belief()},
                              {Density({0.0, 0.3, 0.7, 1.0}, {0.5, 1.75, 0.5}), Density({0.0, 0.5, 1.0}, {0.4, 1.6})}};
  for (const auto& pr : pairs) {
    const auto part = halving_subalgebra(pr[0], pr[1], 6);
    cells = part.cells.size();
    expect(o, cells == 64, "depth 6 does not give 64 cells");
    for (const auto& c : part.cells)
      for (const auto& d : pr) worst_cell = std::max(worst_cell, std::abs(measure(d, c) - 1.0 / 64.0));
  }
  expect(o, worst_cell <= 1e-9, "cell mass error " + std::to_string(worst_cell));
  if (o.pass) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "1000 instances: event error %.1e, lottery error %.1e; 64 cells, mass error %.1e",
                  worst_event, worst_lottery, worst_cell);
    o.detail = buf;
  }
  return o;
}

Outcome image_polytope_checks() {
  Outcome o;
  const auto t = scenarios::table1();
  const auto img = UtilityImage::of(t.profile);
  const Vec c{1.0, 1.0};
  const double h = img.support(c);
  const Act f = img.attaining_act(c);
  const double attained = expected_utility(t.profile.agent(0), f) + expected_utility(t.profile.agent(1), f);
  double hull = 0.0;
  for (std::size_t x = 0; x < 4; ++x) hull = std::max(hull, t.profile.agent(0).utility()(x) + t.profile.agent(1).utility()(x));
  expect(o, std::abs(h - 1.8) <= 1e-12, "h(1,1) = " + std::to_string(h));
  expect(o, std::abs(attained - h) <= 1e-9, "attaining act misses h");
  expect(o, std::abs(hull - 1.7) <= 1e-12 && h > hull, "outcome-hull bound not exceeded");
  double worst = 0.0;
  for (std::size_t trial = 0; trial < 200; ++trial) {
    auto rng = gen::trial_rng(kSeed + 1, trial);
    const std::size_t nx = gen::pick(rng, 4, 6);
    const auto d = gen::density(rng);
    Profile p(gen::outcomes(nx), {Preference(d, gen::utility(rng, nx)), Preference(d, gen::utility(rng, nx)),
                                  Preference::indifferent()});
    const auto poly = image_polytope(p);
    for (std::size_t k = 0; k < poly.directions.size(); ++k) {
      const auto& dir = poly.directions[k];
      double best = -1e300;
      for (std::size_t x = 0; x < nx; ++x)
        best = std::max(best, dir[0] * p.agent(0).utility()(x) + dir[1] * p.agent(1).utility()(x));
      worst = std::max(worst, std::abs(best - poly.support[k]));
    }
  }
  expect(o, worst <= 1e-9, "identical-belief image differs from outcome hull by " + std::to_string(worst));
  if (o.pass) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "h(1,1) = 1.8 attained by an explicit act > 1.7; identical beliefs: max gap %.1e", worst);
    o.detail = buf;
  }
  return o;
}

bool same_orders(const Preference& a, const Preference& b, const std::vector<std::pair<Act, Act>>& pairs) {
  for (const auto& [f, g] : pairs)
    if (compare(a, f, g).order != compare(b, f, g).order) return false;
  return true;
}

Outcome invariance_battery() {
  Outcome o;
  std::size_t profiles = 0;
  for (std::size_t trial = 0; trial < 1000; ++trial) {
    auto rng = gen::trial_rng(kSeed + 2, trial);
    const auto p = gen::profile(rng);
    const std::size_t nx = p.outcomes().size();
    const auto soc = baru(p).preference;
    std::vector<std::pair<Act, Act>> pairs;
    for (int k = 0; k < 8; ++k) pairs.emplace_back(gen::act(rng, nx), gen::act(rng, nx));

    std::vector<std::size_t> perm(p.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    expect(o, baru(p.permuted(perm)).preference == soc, "permutation changed baru");

    auto agents = p.agents();
    agents.insert(agents.begin() + static_cast<std::ptrdiff_t>(gen::pick(rng, 0, agents.size())), Preference::indifferent());
    expect(o, baru(Profile(p.outcomes(), agents)).preference == soc, "indifferent agent changed baru");

    const std::size_t i = p.concerned().front();
    const double scale = gen::uniform(rng, 0.1, 10.0), shift = gen::uniform(rng, -5.0, 5.0);
    std::vector<double> raw(nx);
    for (std::size_t x = 0; x < nx; ++x) raw[x] = scale * p.agent(i).utility()(x) + shift;
    const auto affine = p.with_agent(i, Preference(p.agent(i).belief(), normalize_utility(raw)));
    expect(o, same_orders(baru(affine).preference, soc, pairs), "affine utility change altered compare outcomes");

    WeightedAggregation w{std::vector<double>(p.size()), std::vector<double>(p.size())};
    for (std::size_t k = 0; k < p.size(); ++k) {
      w.v[k] = gen::uniform(rng, 0.1, 3.0);
      w.w[k] = gen::uniform(rng, 0.1, 3.0);
    }
    WeightedAggregation scaled = w;
    const double cv = gen::uniform(rng, 0.1, 10.0), cw = gen::uniform(rng, 0.1, 10.0);
    for (auto& x : scaled.v) x *= cv;
    for (auto& x : scaled.w) x *= cw;
    expect(o, same_orders(weighted(p, w).preference, weighted(p, scaled).preference, pairs),
           "weight scaling altered compare outcomes");
    ++profiles;
  }
  if (o.pass) o.detail = std::to_string(profiles) + " profiles: permutation, indifferent insertion, affine utility, weight scaling";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"Table 1 expected utilities", table1_values},
      {"common-belief threshold", footnote_threshold},
      {"full Pareto failure witness", full_pareto_failure},
      {"horse race", horse_race},
      {"independence matrix", independence_matrix},
      {"baru axiom suite", baru_suite},
      {"constructive lemmas", constructive_lemmas},
      {"image polytope", image_polytope_checks},
      {"invariance battery", invariance_battery},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
