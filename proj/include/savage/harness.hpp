#pragma once

// Randomized witness search. Trial t of a run with seed s draws everything
// from mt19937_64 seeded with (s, t), so a witness re-runs from its recorded
// seed and trial index alone.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "savage/axioms.hpp"
#include "savage/lyapunov.hpp"

namespace savage {

enum class Axiom {
  kRestrictedMonotonicity,
  kIndependence,
  kFaithfulness,
  kNoBeliefImposition,
  kContinuity,
  kAnonymity,
  kRestrictedPareto,
};

inline const std::vector<Axiom>& all_axioms() {
  static const std::vector<Axiom> all{Axiom::kRestrictedMonotonicity, Axiom::kIndependence, Axiom::kFaithfulness,
                                      Axiom::kNoBeliefImposition,     Axiom::kContinuity,   Axiom::kAnonymity,
                                      Axiom::kRestrictedPareto};
  return all;
}

inline std::string axiom_name(Axiom a) {
  switch (a) {
    case Axiom::kRestrictedMonotonicity: return "restricted monotonicity";
    case Axiom::kIndependence: return "independence of redundant acts";
    case Axiom::kFaithfulness: return "faithfulness";
    case Axiom::kNoBeliefImposition: return "no belief imposition";
    case Axiom::kContinuity: return "continuity";
    case Axiom::kAnonymity: return "anonymity";
    case Axiom::kRestrictedPareto: return "restricted Pareto";
  }
  return "?";
}

/// Axioms each rule is known to violate.
inline std::set<Axiom> expected_violations(const std::string& swf) {
  static const std::map<std::string, std::set<Axiom>> table{
      {"baru", {}},
      {"swf1", {Axiom::kRestrictedMonotonicity}},
      {"swf2", {Axiom::kIndependence}},
      {"swf3", {Axiom::kFaithfulness}},
      {"swf4", {Axiom::kNoBeliefImposition, Axiom::kAnonymity}},
      {"swf5", {Axiom::kContinuity}},
      {"swf6", {Axiom::kAnonymity}},
  };
  auto it = table.find(swf);
  return it == table.end() ? std::set<Axiom>{} : it->second;
}

namespace gen {

using Rng = std::mt19937_64;

inline Rng trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return Rng(seq);
}

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) { return uniform(rng) < p; }

/// Sorted cut points in (0,1), at least 1e-3 apart.
inline std::vector<double> cuts(Rng& rng, std::size_t pieces) {
  std::vector<double> b{0.0, 1.0};
  while (b.size() < pieces + 1) {
    const double c = uniform(rng, 0.01, 0.99);
    if (std::all_of(b.begin(), b.end(), [c](double x) { return std::abs(x - c) > 1e-3; })) b.push_back(c);
  }
  std::sort(b.begin(), b.end());
  return b;
}

inline Density density_on(Rng& rng, const std::vector<double>& b) {
  std::vector<double> v(b.size() - 1);
  for (auto& x : v) x = uniform(rng, 0.2, 2.0);
  return density_on_grid(b, v);
}

inline Density density(Rng& rng, std::size_t max_pieces = 4) { return density_on(rng, cuts(rng, pick(rng, 1, max_pieces))); }

inline std::vector<double> raw_utility(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = uniform(rng);
  return v;
}

inline Utility utility(Rng& rng, std::size_t n) {
  for (;;) {
    auto u = normalize_utility(raw_utility(rng, n));
    if (!u.is_zero()) return u;
  }
}

inline OutcomeSpace outcomes(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t x = 0; x < n; ++x) labels.push_back("x" + std::to_string(x + 1));
  return OutcomeSpace(labels);
}

/// All concerned utilities equal to u or 1 - u (within 1e-9).
inline bool common_utility(const Profile& p) {
  const auto idx = p.concerned();
  if (idx.size() < 2) return true;
  const auto& u = p.agent(idx[0]).utility();
  for (std::size_t k = 1; k < idx.size(); ++k) {
    const auto& v = p.agent(idx[k]).utility();
    bool same = true, flipped = true;
    for (std::size_t x = 0; x < u.size(); ++x) {
      same = same && std::abs(u(x) - v(x)) <= 1e-9;
      flipped = flipped && std::abs(1.0 - u(x) - v(x)) <= 1e-9;
    }
    if (!same && !flipped) return false;
  }
  return true;
}

/// Profile with `agents` agents of which exactly `concerned` are represented
/// (random positions); never a common-utility profile when concerned >= 2.
inline Profile profile(Rng& rng, std::size_t agents, std::size_t num_outcomes, std::size_t concerned) {
  for (;;) {
    std::vector<std::size_t> order(agents);
    for (std::size_t i = 0; i < agents; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Preference> prefs(agents);
    for (std::size_t k = 0; k < concerned; ++k) prefs[order[k]] = Preference(density(rng), utility(rng, num_outcomes));
    Profile p(outcomes(num_outcomes), prefs);
    if (concerned < 2 || !common_utility(p)) return p;
  }
}

inline Profile profile(Rng& rng, std::size_t min_concerned = 2) {
  const std::size_t agents = pick(rng, 3, 4);
  return profile(rng, agents, pick(rng, 4, 5), pick(rng, std::min(min_concerned, agents), agents));
}

inline Act act(Rng& rng, std::size_t num_outcomes, std::size_t max_segments = 5) {
  const auto b = cuts(rng, pick(rng, 1, max_segments));
  std::vector<Act::Segment> s;
  for (std::size_t k = 0; k + 1 < b.size(); ++k) s.push_back({{b[k], b[k + 1]}, pick(rng, 0, num_outcomes - 1)});
  return Act(std::move(s));
}

inline Lottery lottery(Rng& rng, std::size_t n) {
  std::exponential_distribution<double> e(1.0);
  Lottery l(n);
  double s = 0.0;
  for (auto& x : l) s += x = coin(rng, 0.8) ? e(rng) : 0.0;
  if (s <= 0.0) {
    l[pick(rng, 0, n - 1)] = 1.0;
    return l;
  }
  for (auto& x : l) x /= s;
  return l;
}

/// The density `d` reweighted inside every cell of the partition generated
/// by f and g, each cell keeping its mass.
inline Density reweight_within_cells(Rng& rng, const Density& d, const Act& f, const Act& g) {
  std::vector<std::pair<EventSet, double>> pieces;  // (event, factor)
  for (std::size_t x = 0; x <= f.max_outcome(); ++x) {
    for (std::size_t y = 0; y <= g.max_outcome(); ++y) {
      const auto cell = f.event_of(x).intersect(g.event_of(y));
      if (cell.empty()) continue;
      const double m = measure(d, cell);
      const double t = uniform(rng, -0.9, 0.9);
      const Density one[] = {d};
      const double half[] = {0.5 * m};
      const auto left = m > 0.0 ? lyapunov_event(one, half, cell) : std::nullopt;
      if (!left) {
        pieces.push_back({cell, 1.0});
        continue;
      }
      pieces.push_back({*left, 1.0 + t});
      pieces.push_back({cell.minus(*left), 1.0 - t});
    }
  }
  std::vector<std::vector<double>> lists{d.breakpoints()};
  for (const auto& [e, fac] : pieces) lists.push_back(event_breakpoints(e));
  const auto grid = merge_breakpoints(lists);
  std::vector<double> vals(grid.size() - 1);
  for (std::size_t s = 0; s + 1 < grid.size(); ++s) {
    const double mid = 0.5 * (grid[s] + grid[s + 1]);
    double fac = 1.0;
    for (const auto& [e, k] : pieces)
      if (e.contains(mid)) fac = k;
    vals[s] = d.value_at(mid) * fac;
  }
  return density_on_grid(grid, vals);
}

/// Fine density whose pushforward under q is `coarse`, with the mass above
/// each target point split among the pieces of q by `shares` (shares[k] is
/// the share of piece k, a step function on the grid `sb`).
inline Density lift(const Coarsening& q, const Density& coarse, const std::vector<double>& sb,
                    const std::vector<std::vector<double>>& shares) {
  std::vector<std::vector<double>> lists;
  std::vector<double> pts = coarse.breakpoints();
  pts.insert(pts.end(), sb.begin(), sb.end());
  for (const auto& piece : q.pieces()) {
    std::vector<double> b{piece.source.lo, piece.source.hi};
    for (double y : pts) {
      if (y <= piece.target.lo || y >= piece.target.hi) continue;
      const double t = (y - piece.target.lo) / piece.target.length();
      b.push_back(piece.reversed ? piece.source.hi - t * piece.source.length()
                                 : piece.source.lo + t * piece.source.length());
    }
    lists.push_back(b);
  }
  const auto grid = merge_breakpoints(lists);
  std::vector<double> vals(grid.size() - 1);
  for (std::size_t s = 0; s + 1 < grid.size(); ++s) {
    const double mid = 0.5 * (grid[s] + grid[s + 1]);
    std::size_t k = 0;
    while (k + 1 < q.pieces().size() && mid >= q.pieces()[k].source.hi) ++k;
    const auto& piece = q.pieces()[k];
    const double y = q(mid);
    auto it = std::upper_bound(sb.begin(), sb.end(), y);
    const std::size_t cell = std::min<std::size_t>(static_cast<std::size_t>(it - sb.begin()) - 1, shares[k].size() - 1);
    vals[s] = shares[k][cell] * coarse.value_at(y) * piece.target.length() / piece.source.length();
  }
  return density_on_grid(grid, vals);
}

/// q sending each of `n` equal source pieces onto all of [0,1).
inline Coarsening periodic(Rng& rng, std::size_t n) {
  std::vector<Coarsening::Piece> pieces;
  for (std::size_t k = 0; k < n; ++k) {
    const double lo = static_cast<double>(k) / static_cast<double>(n);
    const double hi = k + 1 == n ? 1.0 : static_cast<double>(k + 1) / static_cast<double>(n);
    pieces.push_back({{lo, hi}, {0.0, 1.0}, coin(rng)});
  }
  return Coarsening(pieces);
}

inline std::vector<std::vector<double>> shares(Rng& rng, std::size_t pieces, std::size_t cells) {
  std::vector<std::vector<double>> s(pieces, std::vector<double>(cells));
  for (std::size_t c = 0; c < cells; ++c) {
    double tot = 0.0;
    for (std::size_t k = 0; k < pieces; ++k) tot += s[k][c] = uniform(rng, 0.1, 1.0);
    for (std::size_t k = 0; k < pieces; ++k) s[k][c] /= tot;
  }
  return s;
}

}  // namespace gen

// ----------------------------------------------------------------- trials

namespace detail {

inline AxiomVerdict trial_restricted_monotonicity(const Swf& swf, gen::Rng& rng) {
  const std::size_t agents = gen::pick(rng, 3, 4);
  const std::size_t nx = gen::pick(rng, 4, 5);
  const std::size_t concerned = gen::pick(rng, 2, agents - 1);
  auto base = gen::profile(rng, agents, nx, concerned);
  std::size_t focal = 0;
  while (!base.agent(focal).is_indifferent()) ++focal;
  const auto soc = swf(base).preference;
  if (soc.is_indifferent()) return verdict("restricted monotonicity", Verdict::kRejected, "society indifferent");
  const auto& pi = soc.belief();
  const auto& us = soc.utility();
  const Act f = gen::act(rng, nx);
  const double e = expected_utility(soc, f);
  std::size_t hi = 0, lo = 0;
  for (std::size_t x = 0; x < nx; ++x) {
    if (us(x) > us(hi)) hi = x;
    if (us(x) < us(lo)) lo = x;
  }
  const double from = gen::uniform(rng, 0.0, 1.0 - e);  // E lies inside [0, 1) starting at mass `from`
  const auto skip = left_subevent(pi, EventSet::whole(), from);
  const auto ev = left_subevent(pi, EventSet::whole().minus(skip), e);
  const Act g = Act::bet(hi, ev, lo);

  Density belief = pi;
  if (gen::coin(rng)) belief = gen::reweight_within_cells(rng, pi, f, g);
  Utility u;
  if (gen::coin(rng, 0.3)) {
    auto raw = us.values();
    const double eps = gen::uniform(rng, 0.01, 0.2);
    for (auto& v : raw) v += eps * gen::uniform(rng, -1.0, 1.0);
    u = normalize_utility(raw);
    if (u.is_zero()) u = us;
  } else {
    u = gen::utility(rng, nx);
  }
  return check_restricted_monotonicity(swf, base, focal, Preference(belief, u), f, g);
}

/// Two concerned agents; three outcomes O' carry utilities 0 and 1 for both,
/// every other outcome is a convex combination of them (so O' is co-redundant
/// for any beliefs), and the second profile redraws those combinations.
inline AxiomVerdict trial_independence(const Swf& swf, gen::Rng& rng) {
  const std::size_t nx = gen::pick(rng, 4, 6);
  std::vector<std::size_t> order(nx);
  for (std::size_t x = 0; x < nx; ++x) order[x] = x;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> subset(order.begin(), order.begin() + 3);
  std::sort(subset.begin(), subset.end());

  std::vector<std::vector<double>> base(2, std::vector<double>(3));
  for (auto& b : base) {
    b = {0.0, 1.0, gen::uniform(rng)};
    std::shuffle(b.begin(), b.end(), rng);
  }
  auto utilities = [&] {
    std::vector<std::vector<double>> u(2, std::vector<double>(nx, 0.0));
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t a = 0; a < 2; ++a) u[a][subset[k]] = base[a][k];
    for (std::size_t x = 0; x < nx; ++x) {
      if (std::find(subset.begin(), subset.end(), x) != subset.end()) continue;
      const auto lam = gen::lottery(rng, 3);
      for (std::size_t a = 0; a < 2; ++a)
        u[a][x] = lam[0] * base[a][0] + lam[1] * base[a][1] + lam[2] * base[a][2];
    }
    return u;
  };
  const auto u1 = utilities();
  const auto u2 = utilities();

  Coarsening q = Coarsening::identity();
  std::vector<Density> b1, b2;
  if (gen::coin(rng)) {
    b1 = {gen::density(rng), gen::density(rng)};
    b2 = b1;
  } else {
    const std::size_t pieces = gen::pick(rng, 2, 3);
    q = gen::periodic(rng, pieces);
    const auto sb = gen::cuts(rng, gen::pick(rng, 1, 3));
    const auto s1 = gen::shares(rng, pieces, sb.size() - 1);
    const auto s2 = gen::shares(rng, pieces, sb.size() - 1);
    for (int a = 0; a < 2; ++a) {
      const auto c = gen::density(rng, 3);
      b1.push_back(gen::lift(q, c, sb, s1));
      b2.push_back(gen::lift(q, c, sb, s2));
    }
  }
  const std::size_t idle = gen::pick(rng, 0, 2);
  auto make = [&](const std::vector<Density>& b, const std::vector<std::vector<double>>& u) {
    std::vector<Preference> prefs;
    std::size_t k = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      if (i == idle) {
        prefs.emplace_back();
      } else {
        prefs.emplace_back(b[k], Utility(u[k]));
        ++k;
      }
    }
    return Profile(gen::outcomes(nx), prefs);
  };
  return check_independence_redundant_acts(swf, make(b1, u1), make(b2, u2), q, subset);
}

inline AxiomVerdict trial_faithfulness(const Swf& swf, gen::Rng& rng) {
  return check_faithfulness(swf, gen::pick(rng, 3, 5), gen::pick(rng, 4, 6));
}

inline AxiomVerdict trial_no_belief_imposition(const Swf& swf, gen::Rng& rng) {
  const auto p = gen::profile(rng);
  const auto idx = p.concerned();
  return check_no_belief_imposition(swf, p, idx[gen::pick(rng, 0, idx.size() - 1)]);
}

inline AxiomVerdict trial_continuity(const Swf& swf, gen::Rng& rng) {
  const bool duplicate = gen::coin(rng);
  const std::size_t agents = gen::pick(rng, 3, 4);
  const std::size_t nx = gen::pick(rng, 4, 5);
  auto p = gen::profile(rng, agents, nx, duplicate ? 3 : gen::pick(rng, 2, agents));
  const auto idx = p.concerned();
  const std::size_t agent = idx[0];
  if (duplicate) p = p.with_agent(idx[1], p.agent(agent));
  const auto toward = gen::density(rng);
  std::vector<double> raw(nx);
  for (auto& r : raw) r = gen::uniform(rng, -1.0, 1.0);
  return check_continuity(swf, p, agent, toward, raw);
}

inline AxiomVerdict trial_anonymity(const Swf& swf, gen::Rng& rng) { return check_anonymity(swf, gen::profile(rng, 1)); }

inline AxiomVerdict trial_restricted_pareto(const Swf& swf, gen::Rng& rng) {
  const auto p = gen::profile(rng);
  const std::size_t nx = p.outcomes().size();
  const auto beliefs = p.concerned_beliefs();
  const auto f = realize_lottery_act(beliefs, gen::lottery(rng, nx));
  const auto g = realize_lottery_act(beliefs, gen::lottery(rng, nx));
  if (!f || !g) return verdict("restricted Pareto", Verdict::kRejected, "lottery act not realized");
  return check_restricted_pareto(swf, p, *f, *g);
}

}  // namespace detail

/// One randomized scenario for the axiom; deterministic in (seed, trial).
inline AxiomVerdict run_trial(const Swf& swf, Axiom axiom, std::uint64_t seed, std::uint64_t trial) {
  auto rng = gen::trial_rng(seed, trial);
  AxiomVerdict v;
  try {
    switch (axiom) {
      case Axiom::kRestrictedMonotonicity: v = detail::trial_restricted_monotonicity(swf, rng); break;
      case Axiom::kIndependence: v = detail::trial_independence(swf, rng); break;
      case Axiom::kFaithfulness: v = detail::trial_faithfulness(swf, rng); break;
      case Axiom::kNoBeliefImposition: v = detail::trial_no_belief_imposition(swf, rng); break;
      case Axiom::kContinuity: v = detail::trial_continuity(swf, rng); break;
      case Axiom::kAnonymity: v = detail::trial_anonymity(swf, rng); break;
      case Axiom::kRestrictedPareto: v = detail::trial_restricted_pareto(swf, rng); break;
    }
  } catch (const Error& e) {
    v = detail::verdict(axiom_name(axiom), Verdict::kRejected, std::string("error: ") + e.what());
  }
  v.axiom = axiom_name(axiom);
  if (v.witness) {
    v.witness->seed = seed;
    v.witness->trial = trial;
  }
  return v;
}

/// Runs up to `trials` scenarios and reports the violation with the smallest
/// trial index. Workers take trial indices round-robin; the merged result does
/// not depend on `threads`.
inline AxiomVerdict run_axiom(const Swf& swf, Axiom axiom, std::size_t trials, std::uint64_t seed,
                              unsigned threads = 1) {
  threads = std::max(1u, threads);
  std::atomic<std::size_t> first_bad{trials};
  std::vector<char> rejected(trials, 0);
  std::vector<std::string> notes(trials);
  std::mutex mu;
  std::optional<AxiomVerdict> bad;
  auto work = [&](unsigned id) {
    for (std::size_t t = id; t < trials && t < first_bad.load(); t += threads) {
      auto v = run_trial(swf, axiom, seed, t);
      if (v.verdict == Verdict::kRejected) {
        rejected[t] = 1;
        notes[t] = v.note;
      }
      if (v.violated()) {
        std::lock_guard lock(mu);
        if (t < first_bad.load()) {
          first_bad = t;
          bad = std::move(v);
        }
        return;
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned id = 0; id < threads; ++id) pool.emplace_back(work, id);
    for (auto& th : pool) th.join();
  }
  const std::size_t stop = first_bad.load();
  AxiomVerdict out = bad ? *bad : AxiomVerdict{};
  out.axiom = axiom_name(axiom);
  out.trials = bad ? stop + 1 : trials;
  out.rejected = 0;
  out.note.clear();
  for (std::size_t t = 0; t < std::min(stop, trials); ++t) {
    if (!rejected[t]) continue;
    ++out.rejected;
    if (out.note.empty() && !bad) out.note = notes[t];
  }
  if (bad) out.note = bad->note;
  return out;
}

}  // namespace savage
