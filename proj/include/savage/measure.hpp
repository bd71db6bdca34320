#pragma once

// Events, piecewise-constant beliefs on the unit interval, and the
// quotient maps that stand in for sub-sigma-algebras.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "savage/core.hpp"

namespace savage {

/// Half-open interval [lo, hi) inside [0, 1).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

/// Finite union of disjoint half-open subintervals of [0, 1).
///
/// The stored list is sorted, free of empty pieces and merged, so two
/// events are equal exactly when their interval lists are equal.
class EventSet {
 public:
  EventSet() = default;

  explicit EventSet(std::vector<Interval> intervals) {
    for (const auto& iv : intervals) {
      require(std::isfinite(iv.lo) && std::isfinite(iv.hi),
              "event interval endpoints must be finite");
      require(iv.lo >= 0.0 && iv.hi <= 1.0 && iv.lo <= iv.hi,
              "event intervals must satisfy 0 <= a <= b <= 1");
    }
    std::erase_if(intervals, [](const Interval& iv) { return iv.hi <= iv.lo; });
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (const auto& iv : intervals) {
      if (!intervals_.empty() && iv.lo <= intervals_.back().hi) {
        intervals_.back().hi = std::max(intervals_.back().hi, iv.hi);
      } else {
        intervals_.push_back(iv);
      }
    }
  }

  static EventSet whole() { return EventSet({{0.0, 1.0}}); }
  static EventSet interval(double lo, double hi) { return EventSet({{lo, hi}}); }

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }

  double length() const {
    double total = 0.0;
    for (const auto& iv : intervals_) total += iv.length();
    return total;
  }

  bool contains(double x) const {
    for (const auto& iv : intervals_)
      if (x >= iv.lo && x < iv.hi) return true;
    return false;
  }

  EventSet complement() const {
    std::vector<Interval> out;
    double cursor = 0.0;
    for (const auto& iv : intervals_) {
      if (iv.lo > cursor) out.push_back({cursor, iv.lo});
      cursor = iv.hi;
    }
    if (cursor < 1.0) out.push_back({cursor, 1.0});
    return EventSet(std::move(out));
  }

  EventSet intersect(const EventSet& other) const {
    std::vector<Interval> out;
    std::size_t i = 0, j = 0;
    while (i < intervals_.size() && j < other.intervals_.size()) {
      const auto& a = intervals_[i];
      const auto& b = other.intervals_[j];
      const double lo = std::max(a.lo, b.lo);
      const double hi = std::min(a.hi, b.hi);
      if (lo < hi) out.push_back({lo, hi});
      (a.hi < b.hi) ? ++i : ++j;
    }
    return EventSet(std::move(out));
  }

  EventSet unite(const EventSet& other) const {
    auto all = intervals_;
    all.insert(all.end(), other.intervals_.begin(), other.intervals_.end());
    return EventSet(std::move(all));
  }

  EventSet minus(const EventSet& other) const { return intersect(other.complement()); }

  bool operator==(const EventSet&) const = default;

 private:
  std::vector<Interval> intervals_;
};

/// Sorted union of breakpoint lists; always contains 0 and 1.
inline std::vector<double> merge_breakpoints(std::span<const std::vector<double>> lists) {
  std::vector<double> out{0.0, 1.0};
  for (const auto& l : lists) out.insert(out.end(), l.begin(), l.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<double> event_breakpoints(const EventSet& e) {
  std::vector<double> out;
  for (const auto& iv : e.intervals()) {
    out.push_back(iv.lo);
    out.push_back(iv.hi);
  }
  return out;
}

/// A belief: piecewise-constant probability density on [0, 1).
class Density {
 public:
  Density() : Density({0.0, 1.0}, {1.0}) {}

  Density(std::vector<double> breakpoints, std::vector<double> values)
      : breaks_(std::move(breakpoints)), values_(std::move(values)) {
    require(breaks_.size() >= 2, "density needs at least one piece");
    require(values_.size() + 1 == breaks_.size(),
            "density needs exactly one value per piece");
    require(breaks_.front() == 0.0 && breaks_.back() == 1.0,
            "density breakpoints must start at 0 and end at 1");
    for (std::size_t k = 0; k + 1 < breaks_.size(); ++k)
      require(breaks_[k] < breaks_[k + 1], "density breakpoints must increase strictly");
    for (double v : values_)
      require(std::isfinite(v) && v >= 0.0, "density values must be finite and nonnegative");
    cumulative_.assign(breaks_.size(), 0.0);
    for (std::size_t k = 0; k < values_.size(); ++k)
      cumulative_[k + 1] = cumulative_[k] + values_[k] * (breaks_[k + 1] - breaks_[k]);
    require(std::abs(cumulative_.back() - 1.0) <= kMeasTol,
            "density must integrate to 1 within 1e-9");
  }

  static Density uniform() { return Density(); }

  /// Finite-state embedding: state k occupies [k/n, (k+1)/n) with density n * p_k.
  static Density from_cells(std::span<const double> probs) {
    const std::size_t n = probs.size();
    require(n > 0, "need at least one state");
    std::vector<double> b(n + 1), v(n);
    for (std::size_t k = 0; k <= n; ++k) b[k] = static_cast<double>(k) / static_cast<double>(n);
    b[n] = 1.0;
    for (std::size_t k = 0; k < n; ++k) v[k] = static_cast<double>(n) * probs[k];
    return Density(std::move(b), std::move(v));
  }

  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t pieces() const { return values_.size(); }

  double value_at(double x) const {
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    std::size_t k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - breaks_.begin() - 1, 0));
    return values_[std::min(k, values_.size() - 1)];
  }

  /// Probability of [0, x).
  double cdf(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return cumulative_.back();
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - breaks_.begin() - 1);
    return cumulative_[k] + values_[k] * (x - breaks_[k]);
  }

  double total() const { return cumulative_.back(); }

  bool operator==(const Density&) const = default;

 private:
  std::vector<double> breaks_;
  std::vector<double> values_;
  std::vector<double> cumulative_;
};

/// pi(E).
inline double measure(const Density& d, const EventSet& e) {
  double total = 0.0;
  for (const auto& iv : e.intervals()) total += d.cdf(iv.hi) - d.cdf(iv.lo);
  return total;
}

/// Common refinement of several densities (plus optional extra cut points).
inline std::vector<double> common_refinement(std::span<const Density> ds,
                                             std::span<const double> extra = {}) {
  std::vector<std::vector<double>> lists;
  lists.reserve(ds.size() + 1);
  for (const auto& d : ds) lists.push_back(d.breakpoints());
  lists.emplace_back(extra.begin(), extra.end());
  return merge_breakpoints(lists);
}

/// Mass of every refinement segment under d.
inline std::vector<double> segment_masses(const Density& d, std::span<const double> grid) {
  std::vector<double> out(grid.size() - 1);
  for (std::size_t s = 0; s + 1 < grid.size(); ++s) {
    const double mid = 0.5 * (grid[s] + grid[s + 1]);
    out[s] = d.value_at(mid) * (grid[s + 1] - grid[s]);
  }
  return out;
}

/// Builds a density from per-segment values on a grid, rescaled to total mass 1
/// and with equal neighbouring pieces merged.
inline Density density_on_grid(std::span<const double> grid, std::span<const double> values) {
  double mass = 0.0;
  for (std::size_t s = 0; s < values.size(); ++s) mass += values[s] * (grid[s + 1] - grid[s]);
  require(mass > 0.0, "density on grid has zero mass");
  std::vector<double> b{0.0}, v;
  for (std::size_t s = 0; s < values.size(); ++s) {
    const double val = values[s] / mass;
    if (!v.empty() && v.back() == val) {
      b.back() = grid[s + 1];
    } else {
      v.push_back(val);
      b.push_back(grid[s + 1]);
    }
  }
  b.back() = 1.0;
  return Density(std::move(b), std::move(v));
}

/// (sum_i w_i d_i) / (sum_i w_i).
inline Density mix(std::span<const Density> ds, std::span<const double> weights) {
  require(!ds.empty() && ds.size() == weights.size(), "mix needs one weight per density");
  const auto grid = common_refinement(ds);
  std::vector<double> vals(grid.size() - 1, 0.0);
  double wsum = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    require(weights[i] >= 0.0, "mix weights must be nonnegative");
    wsum += weights[i];
    for (std::size_t s = 0; s + 1 < grid.size(); ++s)
      vals[s] += weights[i] * ds[i].value_at(0.5 * (grid[s] + grid[s + 1]));
  }
  require(wsum > 0.0, "mix weights must not all vanish");
  for (double& v : vals) v /= wsum;
  return density_on_grid(grid, vals);
}

/// Uniform metric on beliefs: sup_E |pi(E) - pi'(E)|, i.e. the positive part
/// of the density difference integrated.
inline double belief_distance(const Density& a, const Density& b) {
  const Density both[] = {a, b};
  const auto grid = common_refinement(both);
  double pos = 0.0, neg = 0.0;
  for (std::size_t s = 0; s + 1 < grid.size(); ++s) {
    const double mid = 0.5 * (grid[s] + grid[s + 1]);
    const double diff = (a.value_at(mid) - b.value_at(mid)) * (grid[s + 1] - grid[s]);
    (diff > 0 ? pos : neg) += std::abs(diff);
  }
  return std::max(pos, neg);
}

/// Left-most sub-event F of `domain` with pi(F) = mass: F = domain ∩ [0, t).
inline EventSet left_subevent(const Density& d, const EventSet& domain, double mass) {
  std::vector<Interval> out;
  double remaining = mass;
  if (remaining <= 0.0) return {};
  for (const auto& iv : domain.intervals()) {
    const double avail = d.cdf(iv.hi) - d.cdf(iv.lo);
    if (avail < remaining) {
      out.push_back(iv);
      remaining -= avail;
      continue;
    }
    // Walk the density pieces inside iv until `remaining` is used up.
    const auto& b = d.breakpoints();
    const auto& v = d.values();
    double x = iv.lo;
    auto it = std::upper_bound(b.begin(), b.end(), x);
    std::size_t k = static_cast<std::size_t>(it - b.begin() - 1);
    while (remaining > 0.0 && k < v.size()) {
      const double end = std::min(iv.hi, b[k + 1]);
      const double piece = v[k] * (end - x);
      if (piece >= remaining && v[k] > 0.0) {
        x = std::min(end, x + remaining / v[k]);
        remaining = 0.0;
        break;
      }
      remaining -= piece;
      x = end;
      if (end >= iv.hi) break;
      ++k;
    }
    out.push_back({iv.lo, x});
    break;
  }
  return EventSet(std::move(out));
}

/// Piecewise-affine quotient map q: [0,1) -> [0,1) standing for a sub-sigma-algebra.
///
/// Each piece sends its source interval affinely onto its target interval,
/// optionally reversing orientation. Sources partition [0,1) and targets cover it.
class Coarsening {
 public:
  struct Piece {
    Interval source;
    Interval target;
    bool reversed = false;
  };

  explicit Coarsening(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
    require(!pieces_.empty(), "coarsening needs at least one piece");
    std::sort(pieces_.begin(), pieces_.end(),
              [](const Piece& a, const Piece& b) { return a.source.lo < b.source.lo; });
    double cursor = 0.0;
    std::vector<Interval> targets;
    for (const auto& p : pieces_) {
      require(p.source.lo == cursor, "coarsening sources must partition [0,1)");
      require(p.source.hi > p.source.lo, "coarsening source intervals must be non-empty");
      require(p.target.lo >= 0.0 && p.target.hi <= 1.0 && p.target.hi > p.target.lo,
              "coarsening pieces need a non-degenerate target inside [0,1)");
      cursor = p.source.hi;
      targets.push_back(p.target);
    }
    require(cursor == 1.0, "coarsening sources must partition [0,1)");
    require(EventSet(std::move(targets)) == EventSet::whole(),
            "coarsening targets must cover [0,1)");
  }

  static Coarsening identity() { return Coarsening({{{0.0, 1.0}, {0.0, 1.0}, false}}); }

  const std::vector<Piece>& pieces() const { return pieces_; }

  double operator()(double x) const {
    for (const auto& p : pieces_) {
      if (x >= p.source.lo && x < p.source.hi) {
        const double t = (x - p.source.lo) / p.source.length();
        return p.reversed ? p.target.hi - t * p.target.length()
                          : p.target.lo + t * p.target.length();
      }
    }
    return 1.0;
  }

  /// q^{-1}(E) as an event of the fine space.
  EventSet preimage(const EventSet& e) const {
    std::vector<Interval> out;
    for (const auto& p : pieces_) {
      const double scale = p.source.length() / p.target.length();
      for (const auto& iv : e.intervals()) {
        const double lo = std::max(iv.lo, p.target.lo);
        const double hi = std::min(iv.hi, p.target.hi);
        if (lo >= hi) continue;
        if (!p.reversed) {
          out.push_back({p.source.lo + (lo - p.target.lo) * scale,
                         p.source.lo + (hi - p.target.lo) * scale});
        } else {
          out.push_back({p.source.lo + (p.target.hi - hi) * scale,
                         p.source.lo + (p.target.hi - lo) * scale});
        }
      }
    }
    return EventSet(std::move(out));
  }

  bool is_identity() const {
    return pieces_.size() == 1 && pieces_[0].target == Interval{0.0, 1.0} && !pieces_[0].reversed;
  }

 private:
  std::vector<Piece> pieces_;
};

/// Density of the pushforward q*pi on [0,1).
inline Density pushforward_coarsening(const Coarsening& q, const Density& d) {
  struct Contribution {
    Interval where;
    double value;
  };
  std::vector<Contribution> parts;
  std::vector<double> cuts;
  const auto& b = d.breakpoints();
  const auto& v = d.values();
  for (const auto& p : q.pieces()) {
    const double slope = p.target.length() / p.source.length();
    for (std::size_t k = 0; k < v.size(); ++k) {
      const double lo = std::max(b[k], p.source.lo);
      const double hi = std::min(b[k + 1], p.source.hi);
      if (lo >= hi) continue;
      const double t0 = (lo - p.source.lo) / p.source.length();
      const double t1 = (hi - p.source.lo) / p.source.length();
      Interval image = p.reversed
                           ? Interval{p.target.hi - t1 * p.target.length(),
                                      p.target.hi - t0 * p.target.length()}
                           : Interval{p.target.lo + t0 * p.target.length(),
                                      p.target.lo + t1 * p.target.length()};
      if (hi == p.source.hi) (p.reversed ? image.lo : image.hi) = p.reversed ? p.target.lo : p.target.hi;
      if (lo == p.source.lo) (p.reversed ? image.hi : image.lo) = p.reversed ? p.target.hi : p.target.lo;
      parts.push_back({image, v[k] / slope});
      cuts.push_back(image.lo);
      cuts.push_back(image.hi);
    }
  }
  const std::vector<double> lists[] = {cuts};
  const auto grid = merge_breakpoints(lists);
  std::vector<double> vals(grid.size() - 1, 0.0);
  for (std::size_t s = 0; s + 1 < grid.size(); ++s) {
    const double mid = 0.5 * (grid[s] + grid[s + 1]);
    for (const auto& c : parts)
      if (mid >= c.where.lo && mid < c.where.hi) vals[s] += c.value;
  }
  return density_on_grid(grid, vals);
}

}  // namespace savage
