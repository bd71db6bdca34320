#pragma once

// Outcomes, normalized utilities, simple acts, and subjective expected
// utility preferences over acts.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "savage/measure.hpp"

namespace savage {

class OutcomeSpace {
 public:
  OutcomeSpace() = default;
  explicit OutcomeSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
    require(labels_.size() >= 4, "outcome space needs at least 4 outcomes");
    std::set<std::string> seen(labels_.begin(), labels_.end());
    require(seen.size() == labels_.size(), "outcome labels must be unique");
  }

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

  std::size_t index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    require(it != labels_.end(), "unknown outcome label '" + label + "'");
    return static_cast<std::size_t>(it - labels_.begin());
  }

  bool operator==(const OutcomeSpace&) const = default;

 private:
  std::vector<std::string> labels_;
};

/// Utility normalized to min 0 / max 1, or the Zero element (complete indifference).
class Utility {
 public:
  /// The Zero utility.
  Utility() = default;

  explicit Utility(std::vector<double> values) : values_(std::move(values)) {
    require(!values_.empty(), "non-zero utility needs values");
    const auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
    require(std::abs(*lo) <= kExactTol && std::abs(*hi - 1.0) <= kExactTol,
            "utility must have minimum 0 and maximum 1");
    for (double& v : values_) {
      require(std::isfinite(v), "utility values must be finite");
      v = std::clamp(v, 0.0, 1.0);
    }
  }

  static Utility zero() { return Utility(); }

  bool is_zero() const { return values_.empty(); }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator()(std::size_t outcome) const { return is_zero() ? 0.0 : values_[outcome]; }

  bool operator==(const Utility&) const = default;

 private:
  std::vector<double> values_;
};

/// (raw - min) / (max - min), or Zero when the range is below kExactTol.
inline Utility normalize_utility(std::span<const double> raw) {
  require(!raw.empty(), "utility needs one value per outcome");
  const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
  const double range = *hi - *lo;
  if (!(range >= kExactTol)) return Utility::zero();
  std::vector<double> v(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) v[i] = (raw[i] - *lo) / range;
  v[static_cast<std::size_t>(lo - raw.begin())] = 0.0;
  v[static_cast<std::size_t>(hi - raw.begin())] = 1.0;
  return Utility(std::move(v));
}

inline Utility normalize_utility(const OutcomeSpace& o, const std::map<std::string, double>& raw) {
  std::vector<double> v(o.size());
  require(raw.size() == o.size(), "utility must give a value for every outcome");
  for (const auto& [label, value] : raw) v[o.index_of(label)] = value;
  return normalize_utility(v);
}

/// Simple act: finitely many intervals each mapped to one outcome.
class Act {
 public:
  struct Segment {
    Interval where;
    std::size_t outcome;
  };

  Act() : Act(std::vector<Segment>{{{0.0, 1.0}, 0}}) {}

  explicit Act(std::vector<Segment> segments) {
    std::erase_if(segments, [](const Segment& s) { return s.where.hi <= s.where.lo; });
    std::sort(segments.begin(), segments.end(),
              [](const Segment& a, const Segment& b) { return a.where.lo < b.where.lo; });
    double cursor = 0.0;
    for (const auto& s : segments) {
      require(s.where.lo == cursor, "act segments must partition [0,1)");
      cursor = s.where.hi;
      if (!segs_.empty() && segs_.back().outcome == s.outcome) {
        segs_.back().where.hi = s.where.hi;
      } else {
        segs_.push_back(s);
      }
    }
    require(cursor == 1.0, "act segments must partition [0,1)");
  }

  static Act constant(std::size_t outcome) { return Act({{{0.0, 1.0}, outcome}}); }

  /// x on E, y elsewhere.
  static Act bet(std::size_t x, const EventSet& e, std::size_t y) {
    std::vector<Segment> s;
    for (const auto& iv : e.intervals()) s.push_back({iv, x});
    const auto rest = e.complement();
    for (const auto& iv : rest.intervals()) s.push_back({iv, y});
    return Act(std::move(s));
  }

  /// Act assigning outcome per event; events must partition [0,1).
  static Act from_events(const std::vector<std::pair<EventSet, std::size_t>>& parts) {
    std::vector<Segment> s;
    for (const auto& [e, x] : parts)
      for (const auto& iv : e.intervals()) s.push_back({iv, x});
    return Act(std::move(s));
  }

  const std::vector<Segment>& segments() const { return segs_; }

  std::size_t max_outcome() const {
    std::size_t m = 0;
    for (const auto& s : segs_) m = std::max(m, s.outcome);
    return m;
  }

  std::size_t outcome_at(double x) const {
    for (const auto& s : segs_)
      if (x >= s.where.lo && x < s.where.hi) return s.outcome;
    return segs_.back().outcome;
  }

  /// f^{-1}(x).
  EventSet event_of(std::size_t outcome) const {
    std::vector<Interval> out;
    for (const auto& s : segs_)
      if (s.outcome == outcome) out.push_back(s.where);
    return EventSet(std::move(out));
  }

  std::vector<double> breakpoints() const {
    std::vector<double> b;
    for (const auto& s : segs_) b.push_back(s.where.lo);
    b.push_back(1.0);
    return b;
  }

  bool operator==(const Act& o) const {
    if (segs_.size() != o.segs_.size()) return false;
    for (std::size_t i = 0; i < segs_.size(); ++i)
      if (segs_[i].where != o.segs_[i].where || segs_[i].outcome != o.segs_[i].outcome) return false;
    return true;
  }

 private:
  std::vector<Segment> segs_;
};

/// h ∘ q: the fine-space act measurable with respect to the coarsening.
inline Act compose(const Act& h, const Coarsening& q) {
  std::vector<Act::Segment> out;
  for (const auto& s : h.segments()) {
    const auto pre = q.preimage(EventSet({s.where}));
    for (const auto& iv : pre.intervals()) out.push_back({iv, s.outcome});
  }
  return Act(std::move(out));
}

using Lottery = std::vector<double>;

/// Either complete indifference or a (belief, non-Zero utility) pair.
class Preference {
 public:
  /// Complete indifference.
  Preference() = default;

  Preference(Density belief, Utility utility) : belief_(std::move(belief)), utility_(std::move(utility)) {
    require(!utility_.is_zero(), "represented preference needs a non-zero utility");
  }

  static Preference indifferent() { return Preference(); }

  bool is_indifferent() const { return !belief_.has_value(); }
  const Density& belief() const { return *belief_; }
  const Utility& utility() const { return utility_; }

  bool operator==(const Preference&) const = default;

 private:
  std::optional<Density> belief_;
  Utility utility_;
};

/// Agents' preferences over a shared outcome space; at least three agents.
class Profile {
 public:
  Profile(OutcomeSpace outcomes, std::vector<Preference> agents)
      : outcomes_(std::move(outcomes)), agents_(std::move(agents)) {
    require(agents_.size() >= 3, "profile needs at least 3 agents");
    for (const auto& a : agents_)
      require(a.is_indifferent() || a.utility().size() == outcomes_.size(),
              "agent utility must cover the outcome space");
  }

  const OutcomeSpace& outcomes() const { return outcomes_; }
  const std::vector<Preference>& agents() const { return agents_; }
  const Preference& agent(std::size_t i) const { return agents_.at(i); }
  std::size_t size() const { return agents_.size(); }

  /// I_p: indices of agents that are not completely indifferent.
  std::vector<std::size_t> concerned() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < agents_.size(); ++i)
      if (!agents_[i].is_indifferent()) out.push_back(i);
    return out;
  }

  Profile with_agent(std::size_t i, Preference p) const {
    auto a = agents_;
    a.at(i) = std::move(p);
    return Profile(outcomes_, std::move(a));
  }

  Profile permuted(std::span<const std::size_t> perm) const {
    std::vector<Preference> a;
    for (std::size_t i : perm) a.push_back(agents_.at(i));
    return Profile(outcomes_, std::move(a));
  }

  std::vector<Density> concerned_beliefs() const {
    std::vector<Density> out;
    for (std::size_t i : concerned()) out.push_back(agents_[i].belief());
    return out;
  }

 private:
  OutcomeSpace outcomes_;
  std::vector<Preference> agents_;
};

/// EV(f) = ∫ u∘f dπ; zero for complete indifference.
inline double expected_utility(const Preference& p, const Act& f) {
  if (p.is_indifferent()) return 0.0;
  const auto& d = p.belief();
  const auto& u = p.utility();
  double ev = 0.0;
  for (const auto& s : f.segments()) ev += (d.cdf(s.where.hi) - d.cdf(s.where.lo)) * u(s.outcome);
  return ev;
}

/// f*π: distribution over outcomes induced by the act under the belief.
inline Lottery pushforward(const Act& f, const Density& belief, std::size_t num_outcomes) {
  require(f.max_outcome() < num_outcomes, "act uses an outcome outside the space");
  Lottery out(num_outcomes, 0.0);
  for (const auto& s : f.segments()) out[s.outcome] += belief.cdf(s.where.hi) - belief.cdf(s.where.lo);
  return out;
}

inline double lottery_distance(const Lottery& a, const Lottery& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

enum class Order { kFirst, kSecond, kIndifferent };

struct Comparison {
  Order order;
  double diff;  // EV(f) - EV(g)
};

inline Comparison compare(const Preference& p, const Act& f, const Act& g, double band = kExactTol) {
  const double d = expected_utility(p, f) - expected_utility(p, g);
  if (d > band) return {Order::kFirst, d};
  if (d < -band) return {Order::kSecond, d};
  return {Order::kIndifferent, d};
}

/// Uniform metric sup_f |EV_p(f) - EV_q(f)|, computed exactly by choosing
/// the best outcome per refinement segment in each direction.
///
/// Defined as a metric only between represented preferences; against
/// complete indifference it returns the sup of the other's EV, which is 1.
inline double preference_distance(const Preference& p, const Preference& q) {
  if (p.is_indifferent() && q.is_indifferent()) return 0.0;
  require(p.is_indifferent() || q.is_indifferent() || p.utility().size() == q.utility().size(),
          "preferences must share the outcome space");
  std::vector<Density> ds;
  if (!p.is_indifferent()) ds.push_back(p.belief());
  if (!q.is_indifferent()) ds.push_back(q.belief());
  const auto grid = common_refinement(ds);
  const std::size_t n = p.is_indifferent() ? q.utility().size() : p.utility().size();
  double up = 0.0, down = 0.0;
  for (std::size_t s = 0; s + 1 < grid.size(); ++s) {
    const double mid = 0.5 * (grid[s] + grid[s + 1]);
    const double len = grid[s + 1] - grid[s];
    const double mp = p.is_indifferent() ? 0.0 : p.belief().value_at(mid) * len;
    const double mq = q.is_indifferent() ? 0.0 : q.belief().value_at(mid) * len;
    double best_up = -1e300, best_down = -1e300;
    for (std::size_t x = 0; x < n; ++x) {
      const double diff = mp * p.utility()(x) - mq * q.utility()(x);
      best_up = std::max(best_up, diff);
      best_down = std::max(best_down, -diff);
    }
    up += best_up;
    down += best_down;
  }
  return std::max(up, down);
}

/// Exactly one side completely indifferent: the distance is a convention,
/// not a value of the uniform metric.
inline bool outside_metric(const Preference& p, const Preference& q) {
  return p.is_indifferent() != q.is_indifferent();
}

/// L1-normalizes a nonnegative step function (e.g. a discount profile over time).
inline Density discount_to_belief(std::vector<double> breakpoints, std::vector<double> values) {
  require(breakpoints.size() == values.size() + 1 && !values.empty(),
          "discount function needs one value per piece");
  double mass = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    require(std::isfinite(values[k]) && values[k] >= 0.0, "discount values must be nonnegative");
    mass += values[k] * (breakpoints[k + 1] - breakpoints[k]);
  }
  if (mass <= 0.0) throw ZeroFunction();
  for (double& v : values) v /= mass;
  return Density(std::move(breakpoints), std::move(values));
}

}  // namespace savage
