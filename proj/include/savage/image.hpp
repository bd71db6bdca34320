#pragma once

// The image of all acts in utility space, {(EV_i(f))_i : f act}, for the
// concerned agents of a profile. Because every refinement segment can be
// split among outcomes, the image is the Minkowski sum over segments of the
// convex hulls of the per-outcome points (m_{i,s} u_i(x))_i, so its support
// function is exact: h(c) = sum_s max_x sum_i c_i m_{i,s} u_i(x).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "savage/prefs.hpp"

namespace savage {

using Vec = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Restriction to acts h∘q with range in a subset of outcomes.
struct ImageRestriction {
  Coarsening q = Coarsening::identity();
  std::vector<std::size_t> outcomes;
};

/// Per-segment point sets whose Minkowski sum of hulls is the utility image.
class UtilityImage {
 public:
  UtilityImage(std::vector<std::vector<Vec>> points, std::vector<double> grid,
               std::vector<std::size_t> outcome_ids)
      : points_(std::move(points)), grid_(std::move(grid)), outcome_ids_(std::move(outcome_ids)) {
    dim_ = points_.empty() || points_[0].empty() ? 0 : points_[0][0].size();
  }

  static UtilityImage of(const Profile& p, const std::optional<ImageRestriction>& r = std::nullopt) {
    const auto idx = p.concerned();
    std::vector<Density> beliefs;
    for (std::size_t i : idx) {
      beliefs.push_back(r ? pushforward_coarsening(r->q, p.agent(i).belief()) : p.agent(i).belief());
    }
    std::vector<std::size_t> outs;
    if (r) {
      outs = r->outcomes;
    } else {
      for (std::size_t x = 0; x < p.outcomes().size(); ++x) outs.push_back(x);
    }
    auto grid = common_refinement(beliefs);
    std::vector<std::vector<double>> masses;
    for (const auto& d : beliefs) masses.push_back(segment_masses(d, grid));
    std::vector<std::vector<Vec>> pts(grid.size() - 1);
    for (std::size_t s = 0; s + 1 < grid.size(); ++s) {
      for (std::size_t x : outs) {
        Vec v(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) v[k] = masses[k][s] * p.agent(idx[k]).utility()(x);
        pts[s].push_back(std::move(v));
      }
    }
    UtilityImage img(std::move(pts), std::move(grid), std::move(outs));
    img.agents_ = idx;
    if (r) img.q_ = r->q;
    return img;
  }

  std::size_t dimension() const { return dim_; }
  std::size_t segments() const { return points_.size(); }
  const std::vector<std::vector<Vec>>& points() const { return points_; }
  const std::vector<std::size_t>& agents() const { return agents_; }

  /// Index (into the per-segment list) of the maximizer of c.p, lowest index on ties.
  std::size_t best(std::size_t s, std::span<const double> c) const {
    std::size_t arg = 0;
    double m = -1e300;
    for (std::size_t x = 0; x < points_[s].size(); ++x) {
      const double v = dot(c, points_[s][x]);
      if (v > m) {
        m = v;
        arg = x;
      }
    }
    return arg;
  }

  double support(std::span<const double> c) const {
    double h = 0.0;
    for (std::size_t s = 0; s < points_.size(); ++s) h += dot(c, points_[s][best(s, c)]);
    return h;
  }

  Vec support_point(std::span<const double> c) const {
    Vec y(dim_, 0.0);
    for (std::size_t s = 0; s < points_.size(); ++s) {
      const auto& p = points_[s][best(s, c)];
      for (std::size_t i = 0; i < dim_; ++i) y[i] += p[i];
    }
    return y;
  }

  /// Act on the fine state space whose EV vector is support_point(c).
  Act attaining_act(std::span<const double> c) const {
    std::vector<Act::Segment> segs;
    for (std::size_t s = 0; s < points_.size(); ++s)
      segs.push_back({{grid_[s], grid_[s + 1]}, outcome_ids_[best(s, c)]});
    Act h(std::move(segs));
    return q_ ? compose(h, *q_) : h;
  }

 private:
  std::vector<std::vector<Vec>> points_;
  std::vector<double> grid_;
  std::vector<std::size_t> outcome_ids_;
  std::vector<std::size_t> agents_;
  std::optional<Coarsening> q_;
  std::size_t dim_ = 0;
};

/// Deterministic direction sets: 720 rotated directions in the plane, 1000
/// Fibonacci sphere points in 3-space, 1000 seeded Gaussian directions above.
inline std::vector<Vec> direction_set(std::size_t dim) {
  std::vector<Vec> out;
  if (dim == 0) return out;
  if (dim == 1) return {{1.0}, {-1.0}};
  if (dim == 2) {
    for (int k = 0; k < 720; ++k) {
      const double a = 2.0 * std::numbers::pi * k / 720.0;
      out.push_back({std::cos(a), std::sin(a)});
    }
    return out;
  }
  if (dim == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < 1000; ++k) {
      const double z = 1.0 - 2.0 * (k + 0.5) / 1000.0;
      const double r = std::sqrt(1.0 - z * z);
      out.push_back({r * std::cos(golden * k), r * std::sin(golden * k), z});
    }
    return out;
  }
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> g;
  for (int k = 0; k < 1000; ++k) {
    Vec v(dim);
    double n = 0.0;
    for (auto& x : v) {
      x = g(rng);
      n += x * x;
    }
    for (auto& x : v) x /= std::sqrt(n);
    out.push_back(std::move(v));
  }
  return out;
}

namespace geom {

struct P2 {
  double x, y;
};

inline double cross(P2 o, P2 a, P2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

/// Counter-clockwise convex hull without collinear points.
inline std::vector<P2> hull(std::vector<P2> pts) {
  std::sort(pts.begin(), pts.end(), [](P2 a, P2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end(), [](P2 a, P2 b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  if (pts.size() < 3) return pts;
  std::vector<P2> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

}  // namespace geom

/// Exact vertex list (counter-clockwise) of a planar utility image.
inline std::vector<Vec> planar_vertices(const UtilityImage& img) {
  using geom::P2;
  require(img.dimension() == 2, "planar vertices need a 2-dimensional image");
  P2 start{0.0, 0.0};
  std::vector<P2> edges;
  for (const auto& seg : img.points()) {
    std::vector<P2> pts;
    for (const auto& p : seg) pts.push_back({p[0], p[1]});
    auto h = geom::hull(pts);
    // Start at the lowest (then leftmost) vertex of each hull.
    std::size_t lo = 0;
    for (std::size_t i = 1; i < h.size(); ++i)
      if (h[i].y < h[lo].y || (h[i].y == h[lo].y && h[i].x < h[lo].x)) lo = i;
    start.x += h[lo].x;
    start.y += h[lo].y;
    if (h.size() == 2) {
      edges.push_back({h[1].x - h[0].x, h[1].y - h[0].y});
      edges.push_back({h[0].x - h[1].x, h[0].y - h[1].y});
    } else if (h.size() > 2) {
      for (std::size_t i = 0; i < h.size(); ++i) {
        const auto& a = h[i];
        const auto& b = h[(i + 1) % h.size()];
        edges.push_back({b.x - a.x, b.y - a.y});
      }
    }
  }
  auto angle = [](P2 e) {
    double a = std::atan2(e.y, e.x);
    if (a < 0) a += 2.0 * std::numbers::pi;
    return a;
  };
  std::stable_sort(edges.begin(), edges.end(), [&](P2 a, P2 b) { return angle(a) < angle(b); });
  std::vector<Vec> out{{start.x, start.y}};
  P2 cur = start;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    cur.x += edges[i].x;
    cur.y += edges[i].y;
    const bool last = i + 1 == edges.size();
    // Merge collinear consecutive edges.
    if (!last) {
      const auto& e = edges[i];
      const auto& f = edges[i + 1];
      const double cr = e.x * f.y - e.y * f.x;
      const double scale = std::hypot(e.x, e.y) * std::hypot(f.x, f.y);
      if (std::abs(cr) <= 1e-12 * scale && e.x * f.x + e.y * f.y > 0) continue;
      out.push_back({cur.x, cur.y});
    }
  }
  // Drop near-duplicates (zero-length edges).
  std::vector<Vec> clean;
  for (auto& v : out)
    if (clean.empty() || std::hypot(v[0] - clean.back()[0], v[1] - clean.back()[1]) > 1e-14) clean.push_back(v);
  while (clean.size() > 1 &&
         std::hypot(clean.back()[0] - clean[0][0], clean.back()[1] - clean[0][1]) <= 1e-14)
    clean.pop_back();
  return clean;
}

/// Support function over the standard direction set, plus vertices for
/// dimension <= 3 (exact in the plane, rotating-direction enumeration above).
struct ImagePolytope {
  std::size_t dimension = 0;
  std::vector<Vec> directions;
  std::vector<double> support;
  std::vector<Vec> vertices;
};

inline std::vector<Vec> enumerate_vertices(const UtilityImage& img, const std::vector<Vec>& dirs) {
  std::vector<Vec> out;
  for (const auto& c : dirs) {
    auto y = img.support_point(c);
    bool dup = false;
    for (const auto& v : out) {
      double d = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) d = std::max(d, std::abs(v[i] - y[i]));
      if (d <= 1e-12) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(std::move(y));
  }
  return out;
}

inline ImagePolytope image_polytope(const Profile& p, const std::optional<ImageRestriction>& r = std::nullopt) {
  const auto img = UtilityImage::of(p, r);
  require(img.dimension() >= 1, "image polytope needs a concerned agent");
  ImagePolytope out;
  out.dimension = img.dimension();
  out.directions = direction_set(out.dimension);
  for (const auto& c : out.directions) out.support.push_back(img.support(c));
  if (out.dimension == 1) {
    out.vertices = {{-img.support(Vec{-1.0})}, {img.support(Vec{1.0})}};
  } else if (out.dimension == 2) {
    out.vertices = planar_vertices(img);
  } else if (out.dimension == 3) {
    out.vertices = enumerate_vertices(img, out.directions);
  }
  return out;
}

}  // namespace savage
