#pragma once

// Social welfare functions: belief-averaging relative utilitarianism, its
// weighted generalizations, the six rivals that separate the axioms, and two
// comparison rules (ex-ante relative utilitarianism and geometric pooling).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "savage/nash.hpp"
#include "savage/prefs.hpp"

namespace savage {

struct SwfResult {
  Preference preference;
  std::vector<double> belief_weights;   // per agent, 0 for unconcerned agents
  std::vector<double> utility_weights;  // per agent, 0 for unconcerned agents
  std::vector<std::size_t> concerned;
  std::optional<Density> belief;        // society belief, kept when the utility sum is constant
};

using Swf = std::function<SwfResult(const Profile&)>;

/// Positive belief weights v and utility weights w, one per agent.
struct WeightedAggregation {
  std::vector<double> v;
  std::vector<double> w;
};

namespace detail {

struct Term {
  const Density* belief;
  double v;
  const Utility* utility;
  double w;
};

/// Sums in a canonical order so that relabeling agents gives bit-identical output.
inline void canonical_order(std::vector<Term>& terms) {
  std::stable_sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    return std::tie(a.belief->breakpoints(), a.belief->values(), a.utility->values(), a.v, a.w) <
           std::tie(b.belief->breakpoints(), b.belief->values(), b.utility->values(), b.v, b.w);
  });
}

inline Preference combine(std::vector<Term> terms, std::size_t num_outcomes, std::optional<Density>* belief_out) {
  canonical_order(terms);
  std::vector<Density> ds;
  std::vector<double> vs;
  double wmax = 0.0;
  for (const auto& t : terms) {
    ds.push_back(*t.belief);
    vs.push_back(t.v);
    wmax = std::max(wmax, std::abs(t.w));
  }
  Density belief = mix(ds, vs);
  std::vector<double> sum(num_outcomes, 0.0);
  for (const auto& t : terms)
    for (std::size_t x = 0; x < num_outcomes; ++x) sum[x] += (t.w / wmax) * (*t.utility)(x);
  Utility u = normalize_utility(sum);
  if (belief_out) *belief_out = belief;
  if (u.is_zero()) return Preference::indifferent();
  return Preference(std::move(belief), std::move(u));
}

inline SwfResult weighted_terms(const Profile& p, std::span<const double> v, std::span<const double> w,
                                const Preference* extra = nullptr) {
  SwfResult r;
  r.concerned = p.concerned();
  r.belief_weights.assign(p.size(), 0.0);
  r.utility_weights.assign(p.size(), 0.0);
  std::vector<Term> terms;
  for (std::size_t i : r.concerned) {
    r.belief_weights[i] = v[i];
    r.utility_weights[i] = w[i];
    terms.push_back({&p.agent(i).belief(), v[i], &p.agent(i).utility(), w[i]});
  }
  if (extra) terms.push_back({&extra->belief(), 1.0, &extra->utility(), 1.0});
  if (terms.empty()) return r;
  r.preference = combine(std::move(terms), p.outcomes().size(), &r.belief);
  return r;
}

}  // namespace detail

/// Weighted mean of concerned beliefs with weighted sum of concerned utilities.
inline SwfResult weighted(const Profile& p, const WeightedAggregation& a) {
  require(a.v.size() == p.size() && a.w.size() == p.size(), "one belief and one utility weight per agent");
  for (std::size_t i = 0; i < p.size(); ++i)
    require(a.v[i] > 0.0 && a.w[i] > 0.0 && std::isfinite(a.v[i]) && std::isfinite(a.w[i]),
            "aggregation weights must be positive");
  return detail::weighted_terms(p, a.v, a.w);
}

/// Weights that may depend on the agent and its own preference.
using WeightFunction = std::function<double(std::size_t agent, const Preference& own)>;

/// Generic representation-form rule: belief weight nu(i, p_i), utility weight
/// omega(i, p_i). Weights are not required to be positive, so that defective
/// rules can be built for testing the axiom checkers.
inline SwfResult weighted_by(const Profile& p, const WeightFunction& nu, const WeightFunction& omega) {
  std::vector<double> v(p.size(), 0.0), w(p.size(), 0.0);
  for (std::size_t i : p.concerned()) {
    v[i] = nu(i, p.agent(i));
    w[i] = omega(i, p.agent(i));
  }
  return detail::weighted_terms(p, v, w);
}

/// Belief averaging and relative utilitarianism.
inline SwfResult baru(const Profile& p) {
  const std::vector<double> ones(p.size(), 1.0);
  return detail::weighted_terms(p, ones, ones);
}

/// SWF 1: utility weights prod_{j != i} y_j at the Nash point y of the utility image.
inline SwfResult swf1_nash_weights(const Profile& p) {
  const auto idx = p.concerned();
  if (idx.empty()) return baru(p);
  const auto np = nash_point(UtilityImage::of(p));
  std::vector<double> v(p.size(), 1.0), w(p.size(), 0.0);
  for (std::size_t k = 0; k < idx.size(); ++k) w[idx[k]] = np.weights[k];
  return detail::weighted_terms(p, v, w);
}

/// SWF 2: nu_i = omega_i = 2 - d(anchor, p_i).
inline SwfResult swf2_distance_weights(const Profile& p, const Preference& anchor) {
  require(!anchor.is_indifferent(), "anchor preference must be represented");
  require(anchor.utility().size() == p.outcomes().size(), "anchor utility must cover the outcome space");
  auto weight = [&](std::size_t, const Preference& own) { return 2.0 - preference_distance(anchor, own); };
  return weighted_by(p, weight, weight);
}

/// SWF 3: BARU with an additional phantom agent.
inline SwfResult swf3_phantom(const Profile& p, const Preference& phantom) {
  require(!phantom.is_indifferent(), "phantom preference must be represented");
  require(phantom.utility().size() == p.outcomes().size(), "phantom utility must cover the outcome space");
  const std::vector<double> ones(p.size(), 1.0);
  return detail::weighted_terms(p, ones, ones, &phantom);
}

/// SWF 4: BARU utility, with society adopting agent 1's belief whenever agent 1 is concerned.
inline SwfResult swf4_imposition(const Profile& p) {
  auto r = baru(p);
  if (p.agent(0).is_indifferent()) return r;
  r.belief = p.agent(0).belief();
  std::fill(r.belief_weights.begin(), r.belief_weights.end(), 0.0);
  r.belief_weights[0] = 1.0;
  if (!r.preference.is_indifferent()) r.preference = Preference(p.agent(0).belief(), r.preference.utility());
  return r;
}

/// Multiplicity weights for SWF 5: alpha(n) for a preference held by n agents.
using MultiplicityWeights = std::function<double(std::size_t)>;

inline double square_multiplicity(std::size_t n) { return static_cast<double>(n * n); }

/// True when both preferences have the same belief and utility within kExactTol.
inline bool same_preference(const Preference& a, const Preference& b, double tol = kExactTol) {
  if (a.is_indifferent() || b.is_indifferent()) return a.is_indifferent() == b.is_indifferent();
  const auto& ua = a.utility().values();
  const auto& ub = b.utility().values();
  if (ua.size() != ub.size()) return false;
  for (std::size_t x = 0; x < ua.size(); ++x)
    if (std::abs(ua[x] - ub[x]) > tol) return false;
  const Density both[] = {a.belief(), b.belief()};
  const auto grid = common_refinement(both);
  for (std::size_t s = 0; s + 1 < grid.size(); ++s) {
    const double mid = 0.5 * (grid[s] + grid[s + 1]);
    if (std::abs(a.belief().value_at(mid) - b.belief().value_at(mid)) > tol) return false;
  }
  return true;
}

/// SWF 5: every distinct concerned preference enters once, weighted by
/// alpha(number of agents holding it).
inline SwfResult swf5_shared(const Profile& p, const MultiplicityWeights& alpha = square_multiplicity) {
  const auto idx = p.concerned();
  std::vector<double> weight(p.size(), 0.0);
  std::vector<bool> done(p.size(), false);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    if (done[idx[a]]) continue;
    std::size_t n = 0;
    for (std::size_t b = a; b < idx.size(); ++b) {
      if (!done[idx[b]] && same_preference(p.agent(idx[a]), p.agent(idx[b]))) {
        done[idx[b]] = true;
        ++n;
      }
    }
    const double al = alpha(n);
    require(al > 0.0 && std::isfinite(al), "multiplicity weights must be positive");
    weight[idx[a]] = al;
  }
  SwfResult r;
  r.concerned = idx;
  r.belief_weights = weight;
  r.utility_weights = weight;
  std::vector<detail::Term> terms;
  for (std::size_t i : idx)
    if (weight[i] > 0.0) terms.push_back({&p.agent(i).belief(), weight[i], &p.agent(i).utility(), weight[i]});
  if (terms.empty()) return r;
  r.preference = detail::combine(std::move(terms), p.outcomes().size(), &r.belief);
  return r;
}

/// SWF 6: agent 1's belief and utility count twice.
inline SwfResult swf6_double_weight(const Profile& p) {
  std::vector<double> v(p.size(), 1.0);
  v[0] = 2.0;
  return detail::weighted_terms(p, v, v);
}

/// Ex-ante relative utilitarianism: score(f) = sum_i EV_i(f) with each agent's own belief.
inline std::vector<double> ex_ante_ru_scores(const Profile& p, std::span<const Act> acts) {
  std::vector<double> out;
  for (const auto& f : acts) {
    double s = 0.0;
    for (const auto& a : p.agents()) s += expected_utility(a, f);
    out.push_back(s);
  }
  return out;
}

/// Normalized pointwise geometric mean of densities; throws NullPool when it vanishes.
inline Density geometric_pool(std::span<const Density> beliefs) {
  require(!beliefs.empty(), "geometric pool needs a belief");
  const auto grid = common_refinement(beliefs);
  const double n = static_cast<double>(beliefs.size());
  std::vector<double> vals(grid.size() - 1, 1.0);
  double mass = 0.0;
  for (std::size_t s = 0; s + 1 < grid.size(); ++s) {
    const double mid = 0.5 * (grid[s] + grid[s + 1]);
    double logsum = 0.0;
    bool zero = false;
    for (const auto& d : beliefs) {
      const double v = d.value_at(mid);
      if (v <= 0.0) {
        zero = true;
        break;
      }
      logsum += std::log(v);
    }
    vals[s] = zero ? 0.0 : std::exp(logsum / n);
    mass += vals[s] * (grid[s + 1] - grid[s]);
  }
  if (!(mass > 0.0)) throw NullPool();
  return density_on_grid(grid, vals);
}

/// A rule by name, with the parameters the rivals need.
struct SwfParams {
  std::optional<Preference> phantom;
  std::optional<Preference> anchor;
  std::vector<double> alpha;  // alpha[n-1] for multiplicity n; empty means n^2
  std::optional<WeightedAggregation> weights;
};

inline const std::vector<std::string>& swf_names() {
  static const std::vector<std::string> names{"baru", "swf1", "swf2", "swf3", "swf4", "swf5", "swf6", "weighted"};
  return names;
}

/// Uniform belief with utility 1 on the first outcome and 0 elsewhere.
inline Preference default_reference(std::size_t num_outcomes) {
  std::vector<double> u(num_outcomes, 0.0);
  u[0] = 1.0;
  return Preference(Density::uniform(), Utility(u));
}

/// Resolves a rule name; phantom and anchor default to default_reference.
inline Swf make_swf(const std::string& name, const SwfParams& params = {}) {
  if (name == "baru") return baru;
  if (name == "swf1") return swf1_nash_weights;
  if (name == "swf2") {
    const auto anchor = params.anchor;
    return [anchor](const Profile& p) {
      return swf2_distance_weights(p, anchor.value_or(default_reference(p.outcomes().size())));
    };
  }
  if (name == "swf3") {
    const auto phantom = params.phantom;
    return [phantom](const Profile& p) {
      return swf3_phantom(p, phantom.value_or(default_reference(p.outcomes().size())));
    };
  }
  if (name == "swf4") return swf4_imposition;
  if (name == "swf5") {
    if (params.alpha.empty()) return [](const Profile& p) { return swf5_shared(p); };
    for (std::size_t n = 0; n < params.alpha.size(); ++n)
      require(params.alpha[n] > 0.0 && (n == 0 || params.alpha[n] > params.alpha[n - 1]),
              "alpha must be positive and strictly increasing");
    const auto alpha = params.alpha;
    return [alpha](const Profile& p) {
      return swf5_shared(p, [&alpha](std::size_t n) {
        require(n >= 1 && n <= alpha.size(), "alpha sequence too short for this profile");
        return alpha[n - 1];
      });
    };
  }
  if (name == "swf6") return swf6_double_weight;
  if (name == "weighted") {
    require(params.weights.has_value(), "weighted rule needs params.weights");
    const auto w = *params.weights;
    return [w](const Profile& p) { return weighted(p, w); };
  }
  throw InvalidInput("unknown social welfare function '" + name + "'");
}

}  // namespace savage
