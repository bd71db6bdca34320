#pragma once

// Executable axioms. Every checker evaluates one concrete scenario and answers
// Satisfied, Violated (with the scenario as witness) or ScenarioRejected when
// the axiom's antecedent does not apply. Randomized search lives in harness.hpp.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "savage/constructions.hpp"
#include "savage/image.hpp"
#include "savage/lp.hpp"
#include "savage/swf.hpp"

namespace savage {

enum class Verdict { kSatisfied, kViolated, kRejected };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kSatisfied: return "Satisfied-on-sample";
    case Verdict::kViolated: return "Violated";
    case Verdict::kRejected: return "ScenarioRejected";
  }
  return "?";
}

/// Everything needed to re-run a scenario.
struct Witness {
  std::vector<Profile> profiles;
  std::vector<Act> acts;
  std::optional<Coarsening> q;
  std::vector<std::size_t> outcomes;
  std::optional<std::size_t> agent;
  std::optional<Preference> newpref;
  std::string detail;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
};

struct AxiomVerdict {
  std::string axiom;
  Verdict verdict = Verdict::kSatisfied;
  std::optional<Witness> witness;
  std::size_t trials = 1;
  std::size_t rejected = 0;
  std::string note;

  bool violated() const { return verdict == Verdict::kViolated; }
};

/// Agent-side threshold for a strict preference in the strict parts of
/// restricted monotonicity and restricted Pareto.
inline constexpr double kStrictWitness = 1e-6;
/// Society-side band for weak and strict comparisons.
inline constexpr double kSocietyBand = 1e-9;
/// Equality of society preferences across relabelings and perturbations.
inline constexpr double kPreferenceTol = 1e-9;

namespace detail {

inline AxiomVerdict verdict(std::string name, Verdict v, std::string note = {}) {
  AxiomVerdict out;
  out.axiom = std::move(name);
  out.verdict = v;
  out.rejected = v == Verdict::kRejected ? 1 : 0;
  out.note = std::move(note);
  return out;
}

inline AxiomVerdict violated(std::string name, Witness w) {
  AxiomVerdict out = verdict(std::move(name), Verdict::kViolated);
  out.witness = std::move(w);
  return out;
}

inline Profile all_indifferent(std::size_t agents, std::size_t outcomes) {
  std::vector<std::string> labels;
  for (std::size_t x = 0; x < outcomes; ++x) labels.push_back("x" + std::to_string(x));
  return Profile(OutcomeSpace(labels), std::vector<Preference>(agents));
}

}  // namespace detail

// ---------------------------------------------------------------- faithfulness

inline AxiomVerdict check_faithfulness(const Swf& swf, std::size_t agents = 3, std::size_t outcomes = 4) {
  const auto p = detail::all_indifferent(agents, outcomes);
  const auto r = swf(p);
  if (r.preference.is_indifferent()) return detail::verdict("faithfulness", Verdict::kSatisfied);
  Witness w;
  w.profiles = {p};
  w.detail = "all agents completely indifferent, society represented";
  return detail::violated("faithfulness", std::move(w));
}

// ------------------------------------------------------------------- anonymity

inline AxiomVerdict check_anonymity(const Swf& swf, const Profile& p) {
  const auto base = swf(p).preference;
  std::vector<std::size_t> perm(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) perm[i] = i;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      std::swap(perm[i], perm[j]);
      const auto swapped = p.permuted(perm);
      std::swap(perm[i], perm[j]);
      if (!same_preference(base, swf(swapped).preference, kPreferenceTol)) {
        Witness w;
        w.profiles = {p, swapped};
        w.detail = "transposition of agents " + std::to_string(i + 1) + " and " + std::to_string(j + 1);
        return detail::violated("anonymity", std::move(w));
      }
    }
  }
  return detail::verdict("anonymity", Verdict::kSatisfied);
}

// ------------------------------------------------------- no belief imposition

inline AxiomVerdict check_no_belief_imposition(const Swf& swf, const Profile& p, std::size_t agent) {
  const std::string name = "no belief imposition";
  if (p.agent(agent).is_indifferent()) return detail::verdict(name, Verdict::kRejected, "agent indifferent");
  const auto without = swf(p.with_agent(agent, Preference::indifferent())).preference;
  const auto with = swf(p).preference;
  if (without.is_indifferent() || with.is_indifferent())
    return detail::verdict(name, Verdict::kRejected, "society completely indifferent");
  const auto& pi_i = p.agent(agent).belief();
  if (belief_distance(without.belief(), pi_i) > kMeasTol && belief_distance(with.belief(), pi_i) <= kMeasTol) {
    Witness w;
    w.profiles = {p};
    w.agent = agent;
    w.detail = "society adopts the agent's belief although the rest of society would not";
    return detail::violated(name, std::move(w));
  }
  return detail::verdict(name, Verdict::kSatisfied);
}

// --------------------------------------------------- restricted monotonicity

inline AxiomVerdict check_restricted_monotonicity(const Swf& swf, const Profile& base, std::size_t agent,
                                                  const Preference& newpref, const Act& f, const Act& g) {
  const std::string name = "restricted monotonicity";
  auto reject = [&](const char* why) { return detail::verdict(name, Verdict::kRejected, why); };
  if (!base.agent(agent).is_indifferent()) return reject("focal agent is not completely indifferent");
  if (newpref.is_indifferent()) return reject("new preference is complete indifference");
  const auto soc = swf(base).preference;
  const std::size_t nx = base.outcomes().size();
  const auto after = swf(base.with_agent(agent, newpref)).preference;
  const double di = expected_utility(newpref, f) - expected_utility(newpref, g);

  Witness w;
  w.profiles = {base};
  w.acts = {f, g};
  w.agent = agent;
  w.newpref = newpref;

  if (soc.is_indifferent()) {
    // pi_{~i} may be chosen equal to pi_i, so society must adopt the agent's preference.
    if (same_preference(after, newpref, kPreferenceTol)) return detail::verdict(name, Verdict::kSatisfied);
    w.detail = "society was completely indifferent but does not adopt the agent's preference";
    return detail::violated(name, std::move(w));
  }
  if (std::abs(expected_utility(soc, f) - expected_utility(soc, g)) > kExactTol)
    return reject("society not indifferent between f and g");
  if (lottery_distance(pushforward(f, soc.belief(), nx), pushforward(f, newpref.belief(), nx)) > kMeasTol ||
      lottery_distance(pushforward(g, soc.belief(), nx), pushforward(g, newpref.belief(), nx)) > kMeasTol)
    return reject("pushforwards of f or g differ between society and the new belief");

  const double ds = after.is_indifferent() ? 0.0 : expected_utility(after, f) - expected_utility(after, g);
  bool ok = true;
  if (di > kStrictWitness) {
    ok = ds > kSocietyBand;
    w.detail = "agent strictly prefers f, society does not";
  } else if (di < -kStrictWitness) {
    ok = ds < -kSocietyBand;
    w.detail = "agent strictly prefers g, society does not";
  } else if (di >= -kExactTol) {
    ok = ds >= -kSocietyBand;
    w.detail = "agent weakly prefers f, society strictly prefers g";
  }
  if (ok && di <= kExactTol && !(di < -kStrictWitness)) {
    ok = ds <= kSocietyBand;
    w.detail = "agent weakly prefers g, society strictly prefers f";
  }
  if (ok) return detail::verdict(name, Verdict::kSatisfied);
  return detail::violated(name, std::move(w));
}

// ---------------------------------------------------------- co-redundancy

struct CoRedundancyCertificate {
  Coarsening q = Coarsening::identity();
  std::vector<std::size_t> outcomes;
  std::vector<Density> pushforwards;  // per concerned agent
  double residual = 0.0;              // max |h_full - h_restricted| over the direction set
};

struct Refused {
  int condition = 1;    // 1 or 2
  std::string reason;
  Vec direction;        // separating direction when condition (i) fails
  double residual = 0.0;
};

inline std::variant<CoRedundancyCertificate, Refused> certify_coredundancy(const Profile& p, const Coarsening& q,
                                                                        const std::vector<std::size_t>& subset) {
  require(!subset.empty(), "outcome subset must be non-empty");
  for (std::size_t x : subset) require(x < p.outcomes().size(), "outcome subset index out of range");
  CoRedundancyCertificate cert;
  cert.q = q;
  cert.outcomes = subset;
  for (std::size_t i : p.concerned()) {
    try {
      cert.pushforwards.push_back(pushforward_coarsening(q, p.agent(i).belief()));
    } catch (const Error& e) {
      return Refused{2, std::string("pushforward is not a density: ") + e.what(), {}, 0.0};
    }
  }
  if (p.concerned().empty()) return cert;
  const auto full = UtilityImage::of(p);
  const auto restricted = UtilityImage::of(p, ImageRestriction{q, subset});
  for (const auto& c : direction_set(full.dimension())) {
    const double r = full.support(c) - restricted.support(c);
    if (r > cert.residual) {
      cert.residual = r;
      if (r > kMeasTol) return Refused{1, "restricted acts do not span the utility image", c, r};
    }
  }
  return cert;
}

// --------------------------------------------- independence of redundant acts

inline AxiomVerdict check_independence_redundant_acts(const Swf& swf, const Profile& p, const Profile& p2,
                                                      const Coarsening& q, const std::vector<std::size_t>& subset) {
  const std::string name = "independence of redundant acts";
  auto reject = [&](const std::string& why) { return detail::verdict(name, Verdict::kRejected, why); };
  require(p.size() == p2.size() && p.outcomes() == p2.outcomes(), "profiles must share agents and outcomes");
  if (!std::holds_alternative<CoRedundancyCertificate>(certify_coredundancy(p, q, subset)) ||
      !std::holds_alternative<CoRedundancyCertificate>(certify_coredundancy(p2, q, subset)))
    return reject("restricted acts are not co-redundant for both profiles");
  auto restricted_utility = [&](const Preference& pref) -> std::optional<Utility> {
    if (pref.is_indifferent()) return std::nullopt;
    std::vector<double> u;
    for (std::size_t x : subset) u.push_back(pref.utility()(x));
    auto n = normalize_utility(u);
    if (n.is_zero()) return std::nullopt;
    return n;
  };
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& a = p.agent(i);
    const auto& b = p2.agent(i);
    if (a.is_indifferent() != b.is_indifferent()) return reject("an agent is concerned in only one profile");
    if (a.is_indifferent()) continue;
    if (belief_distance(pushforward_coarsening(q, a.belief()), pushforward_coarsening(q, b.belief())) > kMeasTol)
      return reject("agent beliefs differ on the sub-algebra");
    for (std::size_t x : subset)
      if (std::abs(a.utility()(x) - b.utility()(x)) > kExactTol)
        return reject("agent utilities differ on the outcome subset");
  }
  const auto s1 = swf(p).preference;
  const auto s2 = swf(p2).preference;
  const auto u1 = restricted_utility(s1);
  const auto u2 = restricted_utility(s2);
  Witness w;
  w.profiles = {p, p2};
  w.q = q;
  w.outcomes = subset;
  if (!u1 && !u2) return detail::verdict(name, Verdict::kSatisfied);
  if (!u1 || !u2) {
    w.detail = "society indifferent on the restricted acts in only one profile";
    return detail::violated(name, std::move(w));
  }
  const double db = belief_distance(pushforward_coarsening(q, s1.belief()), pushforward_coarsening(q, s2.belief()));
  double du = 0.0;
  for (std::size_t k = 0; k < subset.size(); ++k) du = std::max(du, std::abs((*u1)(k) - (*u2)(k)));
  if (db <= kMeasTol && du <= kExactTol) return detail::verdict(name, Verdict::kSatisfied);
  w.detail = db > kMeasTol ? "society beliefs differ on the sub-algebra" : "society utilities differ on the subset";
  return detail::violated(name, std::move(w));
}

// ---------------------------------------------------------- restricted Pareto

inline AxiomVerdict check_restricted_pareto(const Swf& swf, const Profile& p, const Act& f, const Act& g) {
  const std::string name = "restricted Pareto";
  const auto idx = p.concerned();
  const std::size_t nx = p.outcomes().size();
  if (idx.empty()) return detail::verdict(name, Verdict::kRejected, "no concerned agent");
  const auto& ref = p.agent(idx.front()).belief();
  for (std::size_t i : idx) {
    const auto& b = p.agent(i).belief();
    if (lottery_distance(pushforward(f, b, nx), pushforward(f, ref, nx)) > kMeasTol ||
        lottery_distance(pushforward(g, b, nx), pushforward(g, ref, nx)) > kMeasTol)
      return detail::verdict(name, Verdict::kRejected, "pushforwards differ across agents");
  }
  const auto soc = swf(p).preference;
  const double ds = soc.is_indifferent() ? 0.0 : expected_utility(soc, f) - expected_utility(soc, g);
  for (double sign : {1.0, -1.0}) {
    bool weak = true, strict = false;
    for (std::size_t i : idx) {
      const double d = sign * (expected_utility(p.agent(i), f) - expected_utility(p.agent(i), g));
      weak = weak && d >= -kExactTol;
      strict = strict || d > kStrictWitness;
    }
    if (!weak) continue;
    const bool ok = strict ? sign * ds > kSocietyBand : sign * ds >= -kSocietyBand;
    if (!ok) {
      Witness w;
      w.profiles = {p};
      w.acts = {f, g};
      w.detail = sign > 0 ? "unanimous preference for f not respected" : "unanimous preference for g not respected";
      return detail::violated(name, std::move(w));
    }
  }
  return detail::verdict(name, Verdict::kSatisfied);
}

// ------------------------------------------------------------ continuity probe

struct ContinuityRow {
  double step = 0.0;
  double input_distance = 0.0;
  double output_distance = 0.0;
};

struct ContinuityReport {
  std::vector<ContinuityRow> rows;
  bool flagged = false;
};

/// Agent `agent` moves to belief (1-d) pi + d pi' and utility normalize(u + d r).
inline Preference perturb(const Preference& p, double step, const Density& toward, const std::vector<double>& raw) {
  const Density both[] = {p.belief(), toward};
  const double w[] = {1.0 - step, step};
  std::vector<double> u(raw.size());
  for (std::size_t x = 0; x < raw.size(); ++x) u[x] = p.utility()(x) + step * raw[x];
  auto nu = normalize_utility(u);
  require(!nu.is_zero(), "perturbation reaches complete indifference");
  return Preference(step == 0.0 ? p.belief() : mix(both, w), std::move(nu));
}

/// Output distance at each step. A two-decade pair (d, d/100) fails the
/// ratio test when the output shrinks by less than 10x; the probe is flagged
/// when every such pair fails.
inline ContinuityReport continuity_probe(const Swf& swf, const Profile& p, std::size_t agent,
                                         const std::vector<double>& steps, const Density& toward,
                                         const std::vector<double>& raw) {
  require(!p.agent(agent).is_indifferent(), "continuity is probed only inside the represented preferences");
  ContinuityReport rep;
  const auto base = swf(p).preference;
  for (double d : steps) {
    const auto moved = perturb(p.agent(agent), d, toward, raw);
    const auto out = swf(p.with_agent(agent, moved)).preference;
    ContinuityRow row{d, preference_distance(p.agent(agent), moved), 0.0};
    row.output_distance = base.is_indifferent() && out.is_indifferent() ? 0.0 : preference_distance(base, out);
    rep.rows.push_back(row);
  }
  bool any_pair = false, all_fail = true;
  for (const auto& big : rep.rows) {
    for (const auto& small : rep.rows) {
      if (small.step <= 0.0 || std::abs(small.step * 100.0 - big.step) > 1e-9 * big.step) continue;
      any_pair = true;
      const bool fails = small.output_distance > kMeasTol && small.output_distance > big.output_distance / 10.0;
      all_fail = all_fail && fails;
    }
  }
  rep.flagged = any_pair && all_fail;
  return rep;
}

inline AxiomVerdict check_continuity(const Swf& swf, const Profile& p, std::size_t agent, const Density& toward,
                                     const std::vector<double>& raw,
                                     const std::vector<double>& steps = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
  const auto rep = continuity_probe(swf, p, agent, steps, toward, raw);
  if (!rep.flagged) return detail::verdict("continuity", Verdict::kSatisfied);
  Witness w;
  w.profiles = {p};
  w.agent = agent;
  w.newpref = perturb(p.agent(agent), steps.back(), toward, raw);
  w.detail = "output distance " + std::to_string(rep.rows.back().output_distance) + " at step " +
             std::to_string(rep.rows.back().step);
  return detail::violated("continuity", std::move(w));
}

// ---------------------------------------------------- spurious unanimity

/// Largest t such that some common belief q on the refinement gives
/// EV_i(f) - EV_i(g) >= t for every concerned agent; `pin` fixes q(E).
/// nullopt when no common belief satisfies the pin.
inline std::optional<double> common_belief_margin(const Profile& p, const Act& f, const Act& g,
                                                  const std::optional<std::pair<EventSet, double>>& pin = std::nullopt) {
  const auto idx = p.concerned();
  require(!idx.empty(), "common belief needs a concerned agent");
  std::vector<double> extra = f.breakpoints();
  for (double b : g.breakpoints()) extra.push_back(b);
  if (pin)
    for (double b : event_breakpoints(pin->first)) extra.push_back(b);
  const auto grid = common_refinement(p.concerned_beliefs(), extra);
  const std::size_t ns = grid.size() - 1;
  // Variables: q_0..q_{ns-1}, t+ , t-.
  lp::Problem prob(ns + 2);
  prob.set_cost(ns, -1.0);
  prob.set_cost(ns + 1, 1.0);
  prob.set_upper(ns, 2.0);
  prob.set_upper(ns + 1, 2.0);
  std::vector<double> total(ns + 2, 0.0);
  for (std::size_t s = 0; s < ns; ++s) total[s] = 1.0;
  prob.add_row(total, lp::Sense::kEq, 1.0);
  for (std::size_t i : idx) {
    std::vector<double> row(ns + 2, 0.0);
    const auto& u = p.agent(i).utility();
    for (std::size_t s = 0; s < ns; ++s) {
      const double mid = 0.5 * (grid[s] + grid[s + 1]);
      row[s] = u(f.outcome_at(mid)) - u(g.outcome_at(mid));
    }
    row[ns] = -1.0;
    row[ns + 1] = 1.0;
    prob.add_row(std::move(row), lp::Sense::kGreaterEq, 0.0);
  }
  if (pin) {
    std::vector<double> row(ns + 2, 0.0);
    for (std::size_t s = 0; s < ns; ++s)
      if (pin->first.contains(0.5 * (grid[s] + grid[s + 1]))) row[s] = 1.0;
    prob.add_row(std::move(row), lp::Sense::kEq, pin->second);
  }
  const auto sol = prob.solve();
  if (!sol.feasible()) return std::nullopt;
  return sol.x[ns] - sol.x[ns + 1];
}

struct SpuriousReport {
  bool unanimous_weak = false;    // every concerned agent weakly prefers f
  bool unanimous_strict = false;  // ... and at least one strictly
  bool common_belief_exists = false;
  double best_margin = 0.0;
  bool spurious = false;
};

inline SpuriousReport detect_spurious_unanimity(const Profile& p, const Act& f, const Act& g) {
  SpuriousReport r;
  r.unanimous_weak = true;
  for (std::size_t i : p.concerned()) {
    const auto c = compare(p.agent(i), f, g);
    r.unanimous_weak = r.unanimous_weak && c.order != Order::kSecond;
    r.unanimous_strict = r.unanimous_strict || c.order == Order::kFirst;
  }
  r.unanimous_strict = r.unanimous_strict && r.unanimous_weak;
  const auto m = common_belief_margin(p, f, g);
  r.best_margin = m.value_or(-1.0);
  r.common_belief_exists = m && *m >= -kExactTol;
  r.spurious = r.unanimous_weak && !r.common_belief_exists;
  return r;
}

}  // namespace savage
