#pragma once

// Maximizer of the product of expected utilities over the utility image.
//
// In the plane the exact polygon is scanned edge by edge. In higher dimension
// a log-barrier method runs on the mixing weights of the segment point sets.
// The duality gap h(1/y) - k bounds the log-product suboptimality.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "savage/image.hpp"

namespace savage {

struct NashPoint {
  Vec point;          // maximizing EV vector
  Vec weights;        // prod_{j != i} point_j
  double gap = 0.0;   // certified log-product gap
};

namespace detail {

inline double log_product(const Vec& y) {
  double s = 0.0;
  for (double v : y) s += std::log(v);
  return s;
}

inline NashPoint finish(Vec y, double gap) {
  NashPoint n;
  n.weights.assign(y.size(), 1.0);
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j)
      if (j != i) n.weights[i] *= y[j];
  n.point = std::move(y);
  n.gap = gap;
  return n;
}

inline double certificate_gap(const UtilityImage& img, const Vec& y) {
  Vec c(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) c[i] = 1.0 / y[i];
  return img.support(c) - static_cast<double>(y.size());
}

inline NashPoint planar_nash(const UtilityImage& img) {
  const auto verts = planar_vertices(img);
  Vec best{0.0, 0.0};
  double bestp = 0.0;
  auto consider = [&](double a, double b) {
    if (a > 0 && b > 0 && a * b > bestp) {
      bestp = a * b;
      best = {a, b};
    }
  };
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const auto& a = verts[i];
    const auto& b = verts[(i + 1) % verts.size()];
    consider(a[0], a[1]);
    const double d1 = b[0] - a[0], d2 = b[1] - a[1];
    if (d1 * d2 < 0) {
      const double t = -(a[0] * d2 + a[1] * d1) / (2.0 * d1 * d2);
      if (t > 0 && t < 1) consider(a[0] + t * d1, a[1] + t * d2);
    }
  }
  if (bestp <= kMeasTol) throw DegenerateNashPoint("maximum product of utilities is zero");
  return finish(best, certificate_gap(img, best));
}

/// Solves A x = b for a small dense symmetric system (Gaussian elimination).
inline Vec solve_small(std::vector<Vec> a, Vec b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    if (std::abs(a[c][c]) < 1e-300) return Vec(n, 0.0);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  Vec x(n);
  for (std::size_t c = n; c-- > 0;) {
    double s = b[c];
    for (std::size_t k = c + 1; k < n; ++k) s -= a[c][k] * x[k];
    x[c] = s / a[c][c];
  }
  return x;
}

/// Barrier path following on the per-segment mixing weights lambda. Each
/// segment contributes sum_x lambda_x p_x with lambda in a simplex, so every
/// iterate lies in the image. Points weakly Pareto-dominated within their
/// segment are dropped first; the maximizer is Pareto optimal.
inline Vec barrier_nash(const UtilityImage& img, double mu_end) {
  const std::size_t k = img.dimension();
  Vec fixed(k, 0.0);
  std::vector<std::size_t> seg_of;
  std::vector<Vec> vert;
  std::size_t segs = 0;
  for (const auto& seg : img.points()) {
    std::vector<std::size_t> keep;
    for (std::size_t a = 0; a < seg.size(); ++a) {
      bool dominated = false;
      for (std::size_t b = 0; b < seg.size() && !dominated; ++b) {
        if (b == a) continue;
        bool ge = true, gt = false;
        for (std::size_t i = 0; i < k; ++i) {
          ge = ge && seg[b][i] >= seg[a][i];
          gt = gt || seg[b][i] > seg[a][i];
        }
        dominated = ge && (gt || b < a);
      }
      if (!dominated) keep.push_back(a);
    }
    if (keep.size() == 1) {
      for (std::size_t i = 0; i < k; ++i) fixed[i] += seg[keep[0]][i];
      continue;
    }
    for (std::size_t a : keep) {
      seg_of.push_back(segs);
      vert.push_back(seg[a]);
    }
    ++segs;
  }
  const std::size_t n = vert.size();
  std::vector<double> count(segs, 0.0);
  for (std::size_t s : seg_of) count[s] += 1.0;
  Vec lam(n);
  for (std::size_t j = 0; j < n; ++j) lam[j] = 1.0 / count[seg_of[j]];
  auto ev = [&](const Vec& l) {
    Vec y = fixed;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < k; ++i) y[i] += l[j] * vert[j][i];
    return y;
  };
  auto objective = [&](const Vec& l, double mu) {
    double f = 0.0;
    for (double v : ev(l)) {
      if (v <= 0.0) return -std::numeric_limits<double>::infinity();
      f += std::log(v);
    }
    for (double v : l) {
      if (v <= 0.0) return -std::numeric_limits<double>::infinity();
      f += mu * std::log(v);
    }
    return f;
  };
  for (double v : ev(lam))
    if (v <= kMeasTol) throw DegenerateNashPoint("an agent's expected utility is identically zero");
  if (n == 0) return ev(lam);

  // Newton in delta = d(lambda) / lambda: Hessian mu I + U^T U with
  // U_ij = p_ji lambda_j / y_i, one equality row per segment.
  const std::size_t m = n + segs;
  std::vector<Vec> u(n, Vec(k));
  for (double mu = 1.0;; mu *= 0.1) {
    for (int it = 0; it < 60; ++it) {
      const Vec y = ev(lam);
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < k; ++i) u[j][i] = vert[j][i] * lam[j] / y[i];
      std::vector<Vec> kkt(m, Vec(m, 0.0));
      Vec rhs(m, 0.0);
      for (std::size_t a = 0; a < n; ++a) {
        rhs[a] = mu;
        for (std::size_t i = 0; i < k; ++i) rhs[a] += u[a][i];
        for (std::size_t b = a; b < n; ++b) {
          double h = a == b ? mu : 0.0;
          for (std::size_t i = 0; i < k; ++i) h += u[a][i] * u[b][i];
          kkt[a][b] = kkt[b][a] = h;
        }
        kkt[a][n + seg_of[a]] = kkt[n + seg_of[a]][a] = lam[a];
      }
      const Vec sol = solve_small(std::move(kkt), rhs);
      double dec = 0.0;
      for (std::size_t j = 0; j < n; ++j) dec += sol[j] * rhs[j];
      double t = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (sol[j] < 0.0) t = std::min(t, 0.99 / -sol[j]);
      const double f0 = objective(lam, mu);
      Vec next(n);
      for (; t > 1e-16; t *= 0.5) {
        for (std::size_t j = 0; j < n; ++j) next[j] = lam[j] * (1.0 + t * sol[j]);
        if (objective(next, mu) >= f0 + 0.25 * t * dec - 1e-15 * std::abs(f0)) break;
      }
      if (t <= 1e-16) break;
      lam = next;
      if (dec < 1e-20) break;
    }
    if (mu <= mu_end) break;
  }
  return ev(lam);
}

}  // namespace detail

/// Nash point of the utility image; throws DegenerateNashPoint when the
/// product of utilities cannot be made positive.
inline NashPoint nash_point(const UtilityImage& img) {
  const std::size_t k = img.dimension();
  require(k >= 1, "nash point needs at least one concerned agent");
  if (k == 1) {
    const double top = img.support(Vec{1.0});
    if (top <= kMeasTol) throw DegenerateNashPoint("maximum product of utilities is zero");
    return detail::finish({top}, 0.0);
  }
  if (k == 2) return detail::planar_nash(img);

  Vec y = detail::barrier_nash(img, 1e-14);
  if (detail::log_product(y) <= std::log(kMeasTol))
    throw DegenerateNashPoint("maximum product of utilities is zero");
  const double gap = detail::certificate_gap(img, y);
  return detail::finish(std::move(y), gap);
}

}  // namespace savage
