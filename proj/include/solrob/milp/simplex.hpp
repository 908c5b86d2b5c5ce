#ifndef SOLROB_MILP_SIMPLEX_HPP
#define SOLROB_MILP_SIMPLEX_HPP

// Bounded-variable primal simplex on a dense tableau. Two phases with
// artificial variables; Dantzig pricing with a switch to Bland's rule after a
// run of degenerate pivots.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "solrob/error.hpp"
#include "solrob/milp/model.hpp"

namespace solrob::milp {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct LpRow {
  std::vector<std::pair<std::size_t, double>> coefs;
  Relation relation = Relation::LessEqual;
  double rhs = 0;
};

/// Minimize cost.x subject to rows and lower <= x <= upper (entries may be infinite).
struct LpProblem {
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<LpRow> rows;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double objective = 0;
  std::size_t iterations = 0;
};

struct LpOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  std::size_t degenerate_switch = 60;  // degenerate pivots before Bland's rule
  std::size_t max_iterations = 0;      // 0: automatic
};

namespace detail {

class DenseSimplex {
 public:
  DenseSimplex(const LpProblem& lp, const LpOptions& options) : opt_(options) { build(lp); }

  LpSolution run() {
    LpSolution sol;
    if (trivially_infeasible_) {
      sol.status = LpStatus::Infeasible;
      return sol;
    }
    // Phase 1: drive artificials to zero.
    std::vector<double> phase1(cols_, 0.0);
    bool any_artificial = false;
    for (std::size_t j = 0; j < cols_; ++j)
      if (kind_[j] == ColKind::Artificial) {
        phase1[j] = 1.0;
        any_artificial = true;
      }
    if (any_artificial) {
      set_costs(phase1);
      if (iterate() == LpStatus::Unbounded) throw NumericalError("phase 1 reported unbounded");
      double infeasibility = 0;
      for (std::size_t j = 0; j < cols_; ++j)
        if (kind_[j] == ColKind::Artificial) infeasibility += value(j);
      if (infeasibility > 1e-7 * std::max(1.0, rhs_scale_)) {
        sol.status = LpStatus::Infeasible;
        sol.iterations = iterations_;
        return sol;
      }
      drive_out_artificials();
    }
    set_costs(cost_);
    const LpStatus status = iterate();
    sol.status = status;
    sol.iterations = iterations_;
    if (status == LpStatus::Optimal) {
      sol.x.assign(structurals_, 0.0);
      for (std::size_t j = 0; j < structurals_; ++j) sol.x[j] = value(j);
      double obj = 0;
      for (std::size_t j = 0; j < structurals_; ++j) obj += cost_[j] * sol.x[j];
      sol.objective = obj;
    }
    return sol;
  }

 private:
  enum class ColKind { Structural, Slack, Artificial };
  enum class At { Lower, Upper, Zero, Basic };

  void build(const LpProblem& lp) {
    structurals_ = lp.cost.size();
    m_ = lp.rows.size();
    std::size_t slacks = 0;
    for (const auto& row : lp.rows)
      if (row.relation != Relation::Equal) ++slacks;
    // Columns: structurals, slacks, then at most one artificial per row.
    std::vector<double> row_residual(m_);
    std::vector<double> start(structurals_);
    for (std::size_t j = 0; j < structurals_; ++j) {
      if (std::isfinite(lp.lower[j])) start[j] = lp.lower[j];
      else if (std::isfinite(lp.upper[j])) start[j] = lp.upper[j];
      else start[j] = 0.0;
    }
    for (std::size_t i = 0; i < m_; ++i) {
      double r = lp.rows[i].rhs;
      for (const auto& [j, a] : lp.rows[i].coefs) r -= a * start[j];
      row_residual[i] = r;
      rhs_scale_ = std::max(rhs_scale_, std::fabs(lp.rows[i].rhs));
    }
    std::size_t artificials = 0;
    std::vector<int> needs_art(m_, 0);
    for (std::size_t i = 0; i < m_; ++i) {
      const auto rel = lp.rows[i].relation;
      const double r = row_residual[i];
      const bool slack_ok = (rel == Relation::LessEqual && r >= 0) || (rel == Relation::GreaterEqual && r <= 0);
      if (!slack_ok) {
        needs_art[i] = 1;
        ++artificials;
      }
    }
    cols_ = structurals_ + slacks + artificials;
    tab_.assign(m_ * cols_, 0.0);
    beta_.assign(m_, 0.0);
    basis_.assign(m_, 0);
    lower_.assign(cols_, 0.0);
    upper_.assign(cols_, kInf);
    at_.assign(cols_, At::Lower);
    xval_.assign(cols_, 0.0);
    kind_.assign(cols_, ColKind::Structural);
    cost_.assign(cols_, 0.0);
    for (std::size_t j = 0; j < structurals_; ++j) {
      lower_[j] = lp.lower[j];
      upper_[j] = lp.upper[j];
      cost_[j] = lp.cost[j];
      xval_[j] = start[j];
      if (std::isfinite(lp.lower[j])) at_[j] = At::Lower;
      else if (std::isfinite(lp.upper[j])) at_[j] = At::Upper;
      else at_[j] = At::Zero;
      if (lower_[j] > upper_[j] + opt_.feasibility_tol) trivially_infeasible_ = true;
    }
    std::size_t next_slack = structurals_;
    std::size_t next_art = structurals_ + slacks;
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& row = lp.rows[i];
      double* t = &tab_[i * cols_];
      for (const auto& [j, a] : row.coefs) t[j] += a;
      std::size_t slack_col = cols_;
      if (row.relation != Relation::Equal) {
        slack_col = next_slack++;
        kind_[slack_col] = ColKind::Slack;
        t[slack_col] = 1.0;
        if (row.relation == Relation::LessEqual) {
          lower_[slack_col] = 0.0;
          upper_[slack_col] = kInf;
          at_[slack_col] = At::Lower;
        } else {
          lower_[slack_col] = -kInf;
          upper_[slack_col] = 0.0;
          at_[slack_col] = At::Upper;
        }
      }
      const double r = row_residual[i];
      if (!needs_art[i]) {
        basis_[i] = slack_col;
        at_[slack_col] = At::Basic;
        beta_[i] = r;
      } else {
        const std::size_t art = next_art++;
        kind_[art] = ColKind::Artificial;
        const double sigma = r >= 0 ? 1.0 : -1.0;
        t[art] = sigma;
        lower_[art] = 0.0;
        upper_[art] = kInf;
        // Scale the row so the artificial has a unit column.
        if (sigma < 0)
          for (std::size_t j = 0; j < cols_; ++j) t[j] = -t[j];
        basis_[i] = art;
        at_[art] = At::Basic;
        beta_[i] = std::fabs(r);
      }
    }
    if (opt_.max_iterations == 0) opt_.max_iterations = 200 * (m_ + cols_) + 10000;
  }

  double value(std::size_t j) const {
    if (at_[j] == At::Basic) {
      for (std::size_t i = 0; i < m_; ++i)
        if (basis_[i] == j) return beta_[i];
    }
    return xval_[j];
  }

  void set_costs(const std::vector<double>& c) {
    phase_cost_ = c;
    red_.assign(cols_, 0.0);
    for (std::size_t j = 0; j < cols_; ++j) red_[j] = c[j];
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      const double* t = &tab_[i * cols_];
      for (std::size_t j = 0; j < cols_; ++j) red_[j] -= cb * t[j];
    }
    for (std::size_t i = 0; i < m_; ++i) red_[basis_[i]] = 0.0;
  }

  bool eligible(std::size_t j, double& direction) const {
    if (at_[j] == At::Basic || dead(j)) return false;
    if (upper_[j] - lower_[j] <= 0.0) return false;
    const double d = red_[j];
    const bool can_up = at_[j] != At::Upper;
    const bool can_down = at_[j] != At::Lower;
    if (can_up && d < -opt_.optimality_tol) {
      direction = 1.0;
      return true;
    }
    if (can_down && d > opt_.optimality_tol) {
      direction = -1.0;
      return true;
    }
    return false;
  }

  bool dead(std::size_t j) const { return dead_.size() > j && dead_[j]; }

  LpStatus iterate() {
    std::size_t degenerate_run = 0;
    bool bland = false;
    std::vector<std::size_t> pivot_nz;
    while (true) {
      if (++iterations_ > opt_.max_iterations) throw NumericalError("simplex iteration limit reached");
      // Pricing.
      std::size_t q = cols_;
      double dir = 0;
      double best = 0;
      for (std::size_t j = 0; j < cols_; ++j) {
        double d;
        if (!eligible(j, d)) continue;
        if (bland) {
          q = j;
          dir = d;
          break;
        }
        const double score = std::fabs(red_[j]);
        if (score > best) {
          best = score;
          q = j;
          dir = d;
        }
      }
      if (q == cols_) return LpStatus::Optimal;

      // Ratio test, Harris two-pass: bounds relaxed by the feasibility
      // tolerance give the step limit, then the largest pivot within it wins.
      // Bland mode keeps the exact minimum ratio with lowest-index ties.
      double theta = upper_[q] - lower_[q];  // bound flip
      std::size_t leave = m_;
      double leave_alpha = 0;
      bool leave_to_upper = false;
      auto ratio = [&](std::size_t i, double alpha, double slack, bool& to_upper) {
        const std::size_t b = basis_[i];
        if (alpha > 0) {
          to_upper = false;
          return std::isfinite(lower_[b]) ? (beta_[i] - lower_[b] + slack) / alpha : kInf;
        }
        to_upper = true;
        return std::isfinite(upper_[b]) ? (upper_[b] - beta_[i] + slack) / -alpha : kInf;
      };
      if (bland) {
        for (std::size_t i = 0; i < m_; ++i) {
          const double alpha = tab_[i * cols_ + q] * dir;
          if (std::fabs(alpha) <= opt_.pivot_tol) continue;
          bool to_upper;
          const double limit = std::max(0.0, ratio(i, alpha, 0.0, to_upper));
          if (limit < theta - 1e-12 || (leave != m_ && limit <= theta + 1e-12 && basis_[i] < basis_[leave])) {
            theta = std::min(theta, limit);
            leave = i;
            leave_alpha = alpha;
            leave_to_upper = to_upper;
          }
        }
      } else {
        double relaxed = theta;
        for (std::size_t i = 0; i < m_; ++i) {
          const double alpha = tab_[i * cols_ + q] * dir;
          if (std::fabs(alpha) <= opt_.pivot_tol) continue;
          bool to_upper;
          relaxed = std::min(relaxed, ratio(i, alpha, opt_.feasibility_tol, to_upper));
        }
        if (relaxed < theta) {
          for (std::size_t i = 0; i < m_; ++i) {
            const double alpha = tab_[i * cols_ + q] * dir;
            if (std::fabs(alpha) <= opt_.pivot_tol) continue;
            bool to_upper;
            const double limit = ratio(i, alpha, 0.0, to_upper);
            if (limit <= relaxed && std::fabs(alpha) > std::fabs(leave_alpha)) {
              leave = i;
              leave_alpha = alpha;
              leave_to_upper = to_upper;
              theta = std::max(0.0, limit);
            }
          }
        }
      }
      if (!std::isfinite(theta)) return LpStatus::Unbounded;

      // A step counts as progress only when it moves the objective by more
      // than noise; tiny steps would otherwise keep resetting Bland's rule.
      if (theta * std::fabs(red_[q]) <= 1e-9) {
        if (++degenerate_run > opt_.degenerate_switch) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }

      // Update basic values.
      if (theta > 0)
        for (std::size_t i = 0; i < m_; ++i) {
          const double a = tab_[i * cols_ + q];
          if (a != 0.0) beta_[i] -= theta * dir * a;
        }
      const double entering_value = xval_[q] + theta * dir;
      if (leave == m_) {
        // Bound flip.
        xval_[q] = dir > 0 ? upper_[q] : lower_[q];
        at_[q] = dir > 0 ? At::Upper : At::Lower;
        continue;
      }
      const std::size_t out = basis_[leave];
      at_[out] = leave_to_upper ? At::Upper : At::Lower;
      xval_[out] = leave_to_upper ? upper_[out] : lower_[out];
      pivot(leave, q, pivot_nz);
      beta_[leave] = entering_value;
      at_[q] = At::Basic;
    }
  }

  void pivot(std::size_t r, std::size_t q, std::vector<std::size_t>& nz) {
    double* prow = &tab_[r * cols_];
    const double piv = prow[q];
    if (std::fabs(piv) <= opt_.pivot_tol || !std::isfinite(piv)) {
      std::ostringstream msg;
      msg << "unstable pivot " << piv << " at row " << r << ", column " << q;
      throw NumericalError(msg.str());
    }
    nz.clear();
    const double inv = 1.0 / piv;
    for (std::size_t j = 0; j < cols_; ++j) {
      if (prow[j] == 0.0) continue;
      prow[j] *= inv;
      if (std::fabs(prow[j]) < 1e-13) prow[j] = 0.0;
      else nz.push_back(j);
    }
    prow[q] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &tab_[i * cols_];
      const double f = row[q];
      if (f == 0.0) continue;
      for (std::size_t j : nz) {
        double v = row[j] - f * prow[j];
        if (std::fabs(v) < 1e-13) v = 0.0;
        row[j] = v;
      }
      row[q] = 0.0;
    }
    const double fd = red_[q];
    if (fd != 0.0)
      for (std::size_t j : nz) red_[j] -= fd * prow[j];
    red_[q] = 0.0;
    basis_[r] = q;
  }

  void drive_out_artificials() {
    std::vector<std::size_t> nz;
    dead_.assign(cols_, false);
    for (std::size_t i = 0; i < m_; ++i) {
      if (kind_[basis_[i]] != ColKind::Artificial) continue;
      const double* row = &tab_[i * cols_];
      std::size_t best = cols_;
      double best_abs = 1e-9;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (kind_[j] == ColKind::Artificial || at_[j] == At::Basic) continue;
        if (std::fabs(row[j]) > best_abs) {
          best_abs = std::fabs(row[j]);
          best = j;
        }
      }
      if (best == cols_) continue;  // redundant row; the artificial stays basic at zero
      const std::size_t out = basis_[i];
      // Degenerate pivot: the artificial sits at (numerically) zero.
      const double entering_value = xval_[best];
      pivot(i, best, nz);
      beta_[i] = entering_value;
      at_[best] = At::Basic;
      at_[out] = At::Lower;
      xval_[out] = 0.0;
    }
    for (std::size_t j = 0; j < cols_; ++j)
      if (kind_[j] == ColKind::Artificial) {
        dead_[j] = true;
        upper_[j] = 0.0;
      }
  }

  LpOptions opt_;
  std::size_t structurals_ = 0;
  std::size_t m_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> tab_;
  std::vector<double> beta_;
  std::vector<std::size_t> basis_;
  std::vector<double> lower_, upper_, xval_, cost_, phase_cost_, red_;
  std::vector<At> at_;
  std::vector<ColKind> kind_;
  std::vector<bool> dead_;
  std::size_t iterations_ = 0;
  double rhs_scale_ = 1.0;
  bool trivially_infeasible_ = false;
};

}  // namespace detail

/// Solves an LP after substituting fixed columns and dropping empty rows.
inline LpSolution solve_lp(const LpProblem& lp, const LpOptions& options = {}) {
  const std::size_t n = lp.cost.size();
  std::vector<std::size_t> map(n, n);
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < n; ++j) {
    if (lp.lower[j] > lp.upper[j] + options.feasibility_tol) return LpSolution{LpStatus::Infeasible, {}, 0, 0};
    if (std::isfinite(lp.lower[j]) && lp.upper[j] - lp.lower[j] <= 0.0) continue;
    map[j] = keep.size();
    keep.push_back(j);
  }
  LpProblem reduced;
  reduced.cost.reserve(keep.size());
  for (std::size_t j : keep) {
    reduced.cost.push_back(lp.cost[j]);
    reduced.lower.push_back(lp.lower[j]);
    reduced.upper.push_back(lp.upper[j]);
  }
  double fixed_objective = 0;
  for (std::size_t j = 0; j < n; ++j)
    if (map[j] == n) fixed_objective += lp.cost[j] * lp.lower[j];
  for (const auto& row : lp.rows) {
    LpRow r;
    r.relation = row.relation;
    r.rhs = row.rhs;
    for (const auto& [j, a] : row.coefs) {
      if (map[j] == n) r.rhs -= a * lp.lower[j];
      else r.coefs.emplace_back(map[j], a);
    }
    if (r.coefs.empty()) {
      const double tol = options.feasibility_tol * std::max(1.0, std::fabs(row.rhs));
      const bool ok = (r.relation == Relation::LessEqual && 0 <= r.rhs + tol) ||
                      (r.relation == Relation::GreaterEqual && 0 >= r.rhs - tol) ||
                      (r.relation == Relation::Equal && std::fabs(r.rhs) <= tol);
      if (!ok) return LpSolution{LpStatus::Infeasible, {}, 0, 0};
      continue;
    }
    reduced.rows.push_back(std::move(r));
  }
  detail::DenseSimplex simplex(reduced, options);
  LpSolution inner = simplex.run();
  LpSolution out;
  out.status = inner.status;
  out.iterations = inner.iterations;
  if (inner.status == LpStatus::Optimal) {
    out.x.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) out.x[j] = map[j] == n ? lp.lower[j] : inner.x[map[j]];
    out.objective = inner.objective + fixed_objective;
  }
  return out;
}

}  // namespace solrob::milp

#endif  // SOLROB_MILP_SIMPLEX_HPP
