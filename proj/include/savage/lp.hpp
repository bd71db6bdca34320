#pragma once

// Small dense two-phase simplex. Problems here have at most a few hundred
// variables (segments x outcomes of a common refinement), so a full
// tableau with Bland's rule is plenty.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "savage/core.hpp"

namespace savage::lp {

enum class Sense { kLessEq, kEq, kGreaterEq };
enum class Status { kOptimal, kInfeasible, kUnbounded };

struct Solution {
  Status status = Status::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;

  bool feasible() const { return status == Status::kOptimal; }
};

/// minimize c.x  s.t.  rows,  0 <= x_j <= upper_j.
class Problem {
 public:
  explicit Problem(std::size_t num_vars)
      : n_(num_vars), cost_(num_vars, 0.0), upper_(num_vars, kInf) {}

  std::size_t num_vars() const { return n_; }

  void set_cost(std::size_t j, double c) { cost_[j] = c; }
  void set_upper(std::size_t j, double u) { upper_[j] = u; }

  void add_row(std::vector<double> coeffs, Sense sense, double rhs) {
    require(coeffs.size() == n_, "lp row has wrong width");
    rows_.push_back({std::move(coeffs), sense, rhs});
  }

  Solution solve(double feas_tol = 1e-11) const;

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  struct Row {
    std::vector<double> a;
    Sense sense;
    double b;
  };
  std::size_t n_;
  std::vector<double> cost_;
  std::vector<double> upper_;
  std::vector<Row> rows_;
};

namespace detail {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : m_(rows), w_(cols + 1), t_((rows + 1) * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return t_[r * w_ + c]; }
  double at(std::size_t r, std::size_t c) const { return t_[r * w_ + c]; }
  double& rhs(std::size_t r) { return at(r, w_ - 1); }
  double& obj(std::size_t c) { return at(m_, c); }
  std::size_t cols() const { return w_ - 1; }
  std::size_t rows() const { return m_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c < w_; ++c) at(pr, c) /= p;
    for (std::size_t r = 0; r <= m_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < w_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    basis_[pr] = pc;
  }

  // Objective row holds reduced costs; minimization. Returns false if unbounded.
  bool run(const std::vector<bool>& allowed, double eps) {
    for (std::size_t iter = 0; iter < 50000; ++iter) {
      std::size_t enter = cols();
      for (std::size_t c = 0; c < cols(); ++c) {
        if (allowed[c] && at(m_, c) < -eps) {
          enter = c;
          break;  // Bland: lowest index
        }
      }
      if (enter == cols()) return true;
      std::size_t leave = m_;
      double best = 0.0;
      for (std::size_t r = 0; r < m_; ++r) {
        const double a = at(r, enter);
        if (a <= eps) continue;
        const double ratio = at(r, w_ - 1) / a;
        if (leave == m_ || ratio < best - 1e-15 ||
            (std::abs(ratio - best) <= 1e-15 && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
    return true;
  }

  void drop_row(std::size_t r) {
    std::vector<double> nt;
    nt.reserve(t_.size() - w_);
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      nt.insert(nt.end(), t_.begin() + static_cast<std::ptrdiff_t>(i * w_),
                t_.begin() + static_cast<std::ptrdiff_t>((i + 1) * w_));
    }
    t_ = std::move(nt);
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --m_;
  }

 private:
  std::size_t m_;
  std::size_t w_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

inline Solution Problem::solve(double feas_tol) const {
  constexpr double eps = 1e-12;
  // Equality rows: user rows plus one row per finite upper bound.
  struct EqRow {
    std::vector<double> a;  // over original vars
    double b;
    int slack_sign;  // +1 for <=, -1 for >=, 0 for =
    std::size_t bound_var = static_cast<std::size_t>(-1);
  };
  std::vector<EqRow> eq;
  for (const auto& r : rows_) {
    int s = r.sense == Sense::kLessEq ? 1 : (r.sense == Sense::kGreaterEq ? -1 : 0);
    eq.push_back({r.a, r.b, s});
  }
  for (std::size_t j = 0; j < n_; ++j) {
    if (std::isfinite(upper_[j])) {
      std::vector<double> a(n_, 0.0);
      a[j] = 1.0;
      eq.push_back({std::move(a), upper_[j], 1, j});
    }
  }
  const std::size_t m = eq.size();
  std::size_t num_slack = 0;
  for (const auto& r : eq) num_slack += r.slack_sign != 0 ? 1 : 0;
  const std::size_t art0 = n_ + num_slack;
  const std::size_t cols = art0 + m;
  detail::Tableau t(m, cols);
  std::size_t slack = n_;
  for (std::size_t r = 0; r < m; ++r) {
    const double sign = eq[r].b < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n_; ++j) t.at(r, j) = sign * eq[r].a[j];
    if (eq[r].slack_sign != 0) t.at(r, slack++) = sign * eq[r].slack_sign;
    t.at(r, art0 + r) = 1.0;
    t.rhs(r) = sign * eq[r].b;
    t.basis()[r] = art0 + r;
  }
  // Phase 1: minimize the sum of artificials.
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c <= cols; ++c)
      if (c < art0 || c == cols) t.obj(c) -= t.at(r, c);
  std::vector<bool> allowed(cols, true);
  t.run(allowed, eps);
  Solution sol;
  if (-t.obj(cols) > feas_tol) {
    sol.status = Status::kInfeasible;
    return sol;
  }
  // Drive artificials out of the basis or drop redundant rows.
  for (std::size_t r = 0; r < t.rows();) {
    if (t.basis()[r] >= art0) {
      std::size_t c = 0;
      for (; c < art0; ++c)
        if (std::abs(t.at(r, c)) > 1e-9) break;
      if (c < art0) {
        t.pivot(r, c);
      } else {
        t.drop_row(r);
        continue;
      }
    }
    ++r;
  }
  for (std::size_t c = art0; c < cols; ++c) allowed[c] = false;
  // Phase 2 objective.
  for (std::size_t c = 0; c <= cols; ++c) t.obj(c) = c < n_ ? cost_[c] : 0.0;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    const std::size_t bvar = t.basis()[r];
    const double cb = bvar < n_ ? cost_[bvar] : 0.0;
    if (cb == 0.0) continue;
    for (std::size_t c = 0; c <= cols; ++c) t.obj(c) -= cb * t.at(r, c);
  }
  if (!t.run(allowed, eps)) {
    sol.status = Status::kUnbounded;
    return sol;
  }
  sol.status = Status::kOptimal;
  sol.x.assign(n_, 0.0);
  for (std::size_t r = 0; r < t.rows(); ++r)
    if (t.basis()[r] < n_) sol.x[t.basis()[r]] = std::max(0.0, t.rhs(r));
  for (std::size_t j = 0; j < n_; ++j) {
    if (std::isfinite(upper_[j])) sol.x[j] = std::min(sol.x[j], upper_[j]);
    sol.objective += cost_[j] * sol.x[j];
  }
  return sol;
}

}  // namespace savage::lp
