#pragma once

// Constructive Lyapunov machinery: events with prescribed probabilities under
// several beliefs at once, and the dyadic halving partition on which two
// beliefs agree.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "savage/lp.hpp"
#include "savage/measure.hpp"

namespace savage {

/// Finds E ⊂ domain with |pi_i(E) - targets_i| <= kMeasTol for every i.
///
/// E is the union of the LEFT fractions lambda_s of the common refinement
/// segments inside `domain`; the fractions solve a feasibility LP. Returns
/// nullopt when the targets lie outside the Lyapunov range.
inline std::optional<EventSet> lyapunov_event(std::span<const Density> densities,
                                              std::span<const double> targets,
                                              const EventSet& domain = EventSet::whole()) {
  require(!densities.empty(), "lyapunov_event needs at least one density");
  require(densities.size() == targets.size(), "one target per density");
  for (double t : targets)
    require(std::isfinite(t) && t >= -kMeasTol && t <= 1.0 + kMeasTol,
            "lyapunov targets must lie in [0,1]");
  const auto cuts = event_breakpoints(domain);
  const auto grid = common_refinement(densities, cuts);
  std::vector<Interval> segs;
  for (std::size_t s = 0; s + 1 < grid.size(); ++s)
    if (domain.contains(0.5 * (grid[s] + grid[s + 1]))) segs.push_back({grid[s], grid[s + 1]});

  lp::Problem prob(segs.size());
  for (std::size_t j = 0; j < segs.size(); ++j) prob.set_upper(j, 1.0);
  std::vector<std::vector<double>> mass(densities.size(), std::vector<double>(segs.size()));
  for (std::size_t i = 0; i < densities.size(); ++i) {
    for (std::size_t j = 0; j < segs.size(); ++j) {
      const double mid = 0.5 * (segs[j].lo + segs[j].hi);
      mass[i][j] = densities[i].value_at(mid) * segs[j].length();
    }
    prob.add_row(mass[i], lp::Sense::kEq, targets[i]);
  }
  const auto sol = prob.solve();
  if (!sol.feasible()) return std::nullopt;

  std::vector<Interval> out;
  for (std::size_t j = 0; j < segs.size(); ++j) {
    const double lam = std::clamp(sol.x[j], 0.0, 1.0);
    if (lam <= 0.0) continue;
    const double hi = lam >= 1.0 ? segs[j].hi : segs[j].lo + lam * segs[j].length();
    out.push_back({segs[j].lo, hi});
  }
  EventSet e(std::move(out));
  for (std::size_t i = 0; i < densities.size(); ++i)
    if (std::abs(measure(densities[i], e) - targets[i]) > kMeasTol) return std::nullopt;
  return e;
}

/// Depth-k partition of [0,1) into 2^k cells of mass 2^-k under two beliefs.
struct DyadicPartition {
  int depth = 0;
  std::vector<EventSet> cells;
};

/// Recursive bisection: every cell is split into two sub-events carrying half of
/// the parent's mass under BOTH beliefs.
inline DyadicPartition halving_subalgebra(const Density& d1, const Density& d2, int depth) {
  require(depth >= 1, "halving depth must be positive");
  DyadicPartition part{depth, {EventSet::whole()}};
  const Density pair[] = {d1, d2};
  for (int level = 0; level < depth; ++level) {
    std::vector<EventSet> next;
    next.reserve(part.cells.size() * 2);
    for (const auto& cell : part.cells) {
      const double half[] = {0.5 * measure(d1, cell), 0.5 * measure(d2, cell)};
      auto left = lyapunov_event(pair, half, cell);
      // Two non-atomic measures always admit an equal split (lambda = 1/2 works).
      if (!left) throw Error("halving split failed: LP did not find the equal split");
      next.push_back(*left);
      next.push_back(cell.minus(*left));
    }
    part.cells = std::move(next);
  }
  return part;
}

}  // namespace savage
