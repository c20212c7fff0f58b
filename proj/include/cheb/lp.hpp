// Dense two-phase simplex for small linear programs.
//
// Solves  min c.x  over  l <= x <= u  subject to rows  a_i.x {<=,=,>=} b_i.
// Every outcome carries its own evidence: optimal solutions come with dual
// prices satisfying strong duality, infeasible systems with a Farkas
// certificate over the rows, unbounded ones with an explicit ray.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "cheb/core.hpp"

namespace cheb {

enum class Relation { LessEq, Equal, GreaterEq };
enum class LpStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
  }
  return "?";
}

// Bounds default to the whole line; callers tighten what they need.
struct LpProblem {
  Vec objective;
  Mat rows;
  std::vector<Relation> relations;
  Vec rhs;
  Vec lower, upper;

  explicit LpProblem(std::size_t nvars)
      : objective(nvars, 0.0), lower(nvars, -kInf), upper(nvars, kInf) {}

  std::size_t num_vars() const { return objective.size(); }
  std::size_t num_rows() const { return rows.size(); }

  void add_row(Vec coeffs, Relation rel, double b) {
    if (coeffs.size() != num_vars())
      throw DimensionError("add_row: coefficient count != variable count");
    rows.push_back(std::move(coeffs));
    relations.push_back(rel);
    rhs.push_back(b);
  }
};

struct LpOptions {
  double tol = 1e-9;    // feasibility and reduced-cost tolerance
  long max_pivots = 0;  // 0 = cap chosen from problem size
};

// dual:
//   Optimal    one price per row; <= rows get y <= 0, >= rows y >= 0 (min
//              orientation), so  c.x* = y.b + sum_j min(r_j l_j, r_j u_j)
//              with r = c - A^T y.
//   Infeasible a Farkas certificate y over the rows: y >= 0 on <= rows,
//              y <= 0 on >= rows, free on = rows. The rows then force
//              (A^T y).x <= y.b, yet min over the box of (A^T y).x exceeds
//              y.b, so nothing inside the bounds satisfies all rows.
// ray: on Unbounded, a recession direction honouring rows and bounds with
//      c.ray < 0; objective is reported as -inf.
struct LpOutcome {
  LpStatus status = LpStatus::Optimal;
  Vec solution;
  double objective = 0.0;
  Vec dual;
  Vec ray;
  long iterations = 0;
};

namespace detail {

inline constexpr std::size_t lp_npos = static_cast<std::size_t>(-1);

// x_j = shift + sign * x'[col_pos] - x'[col_neg]; col_neg only for free vars.
struct LpVarMap {
  std::size_t col_pos = 0;
  std::size_t col_neg = lp_npos;
  double shift = 0.0;
  double sign = 1.0;
};

}  // namespace detail

inline LpOutcome solve(const LpProblem& p, const LpOptions& opts = {}) {
  const std::size_t n = p.num_vars();
  const std::size_t m = p.num_rows();
  if (p.relations.size() != m || p.rhs.size() != m)
    throw DimensionError("solve: rows, relations and rhs must have equal length");
  for (const auto& r : p.rows)
    if (r.size() != n) throw DimensionError("solve: row length != variable count");
  if (p.lower.size() != n || p.upper.size() != n)
    throw DimensionError("solve: bound vectors must match variable count");

  const double tol = opts.tol;

  // Shift, negate or split every variable so all internal columns are >= 0.
  std::vector<detail::LpVarMap> vmap(n);
  std::size_t ncols = 0;
  std::size_t nbound = 0;  // rows x'_j <= u_j - l_j for doubly bounded vars
  for (std::size_t j = 0; j < n; ++j) {
    const double l = p.lower[j], u = p.upper[j];
    const bool lf = std::isfinite(l), uf = std::isfinite(u);
    if (lf && uf && u < l) throw PreconditionError("solve: variable bounds cross");
    auto& vm = vmap[j];
    if (lf) {
      vm.shift = l;
      vm.sign = 1.0;
      vm.col_pos = ncols++;
      if (uf) ++nbound;
    } else if (uf) {
      vm.shift = u;
      vm.sign = -1.0;
      vm.col_pos = ncols++;
    } else {
      vm.col_pos = ncols++;
      vm.col_neg = ncols++;
    }
  }

  const std::size_t mi = m + nbound;

  Mat A(mi, Vec(ncols, 0.0));
  Vec b(mi, 0.0);
  std::vector<Relation> rel(mi, Relation::LessEq);
  for (std::size_t i = 0; i < m; ++i) {
    double shift_dot = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = p.rows[i][j];
      if (a == 0.0) continue;
      const auto& vm = vmap[j];
      A[i][vm.col_pos] += a * vm.sign;
      if (vm.col_neg != detail::lp_npos) A[i][vm.col_neg] -= a;
      shift_dot += a * vm.shift;
    }
    b[i] = p.rhs[i] - shift_dot;
    rel[i] = p.relations[i];
  }
  {
    std::size_t r = m;
    for (std::size_t j = 0; j < n; ++j)
      if (std::isfinite(p.lower[j]) && std::isfinite(p.upper[j])) {
        A[r][vmap[j].col_pos] = 1.0;
        b[r] = p.upper[j] - p.lower[j];
        ++r;
      }
  }

  // Orient every rhs nonnegative so the artificial basis starts feasible.
  Vec flip(mi, 1.0);
  for (std::size_t i = 0; i < mi; ++i)
    if (b[i] < 0.0) {
      flip[i] = -1.0;
      b[i] = -b[i];
      for (double& a : A[i]) a = -a;
      if (rel[i] == Relation::LessEq) rel[i] = Relation::GreaterEq;
      else if (rel[i] == Relation::GreaterEq) rel[i] = Relation::LessEq;
    }

  // Tableau columns: real | slack/surplus | artificial | rhs.
  std::size_t nslack = 0;
  for (Relation rl : rel)
    if (rl != Relation::Equal) ++nslack;
  const std::size_t ntot = ncols + nslack + mi;
  const std::size_t rhs_col = ntot;

  Mat T(mi, Vec(ntot + 1, 0.0));
  std::vector<bool> artificial(ntot, false);
  std::vector<std::size_t> basis(mi);
  {
    std::size_t s = ncols;
    for (std::size_t i = 0; i < mi; ++i) {
      for (std::size_t j = 0; j < ncols; ++j) T[i][j] = A[i][j];
      if (rel[i] == Relation::LessEq) T[i][s++] = 1.0;
      else if (rel[i] == Relation::GreaterEq) T[i][s++] = -1.0;
      const std::size_t art = ncols + nslack + i;
      T[i][art] = 1.0;
      artificial[art] = true;
      basis[i] = art;
      T[i][rhs_col] = b[i];
    }
  }

  // Both cost rows are carried through every pivot; entry [rhs] is -objective.
  Vec cost1(ntot + 1, 0.0), cost2(ntot + 1, 0.0);
  for (std::size_t j = ncols + nslack; j < ntot; ++j) cost1[j] = 1.0;
  for (std::size_t i = 0; i < mi; ++i)
    for (std::size_t j = 0; j <= ntot; ++j) cost1[j] -= T[i][j];
  for (std::size_t j = 0; j < n; ++j) {
    const auto& vm = vmap[j];
    const double c = p.objective[j];
    cost2[vm.col_pos] += c * vm.sign;
    if (vm.col_neg != detail::lp_npos) cost2[vm.col_neg] -= c;
  }

  auto pivot = [&](std::size_t pr, std::size_t pc) {
    Vec& row = T[pr];
    const double d = row[pc];
    for (double& x : row) x /= d;
    row[pc] = 1.0;
    auto elim = [&](Vec& r) {
      const double f = r[pc];
      if (f == 0.0) return;
      for (std::size_t j = 0; j <= ntot; ++j) r[j] -= f * row[j];
      r[pc] = 0.0;
    };
    for (std::size_t i = 0; i < mi; ++i)
      if (i != pr) elim(T[i]);
    elim(cost1);
    elim(cost2);
    basis[pr] = pc;
  };

  long iter = 0;
  const long size_scale = static_cast<long>(mi + ntot);
  const long bland_after = 200 + 10 * size_scale;
  const long cap = opts.max_pivots > 0 ? opts.max_pivots : 5000 + 200 * size_scale;

  // Dantzig with lowest-index ties; Bland once progress looks doubtful.
  auto entering = [&](const Vec& cost, bool phase2) -> std::size_t {
    std::size_t best = detail::lp_npos;
    double best_rc = -tol;
    for (std::size_t j = 0; j < ntot; ++j) {
      if (phase2 && artificial[j]) continue;
      const double rc = cost[j];
      if (iter > bland_after) {
        if (rc < -tol) return j;
      } else if (rc < best_rc) {
        best_rc = rc;
        best = j;
      }
    }
    return best;
  };

  // Ratio-test ties prefer to evict artificials, then the lowest row.
  auto leaving = [&](std::size_t pc) -> std::size_t {
    std::size_t best = detail::lp_npos;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < mi; ++i) {
      const double t = T[i][pc];
      if (t <= 1e-9) continue;
      const double ratio = T[i][rhs_col] / t;
      if (best == detail::lp_npos) {
        best = i;
        best_ratio = ratio;
        continue;
      }
      const double eps = 1e-9 * (1.0 + std::abs(best_ratio));
      if (ratio < best_ratio - eps) {
        best = i;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + eps && artificial[basis[i]] &&
                 !artificial[basis[best]]) {
        best = i;
        best_ratio = std::min(best_ratio, ratio);
      }
    }
    return best;
  };

  // Returns the entering column when no row blocks it, lp_npos at optimality.
  auto run = [&](Vec& cost, bool phase2) -> std::size_t {
    for (;;) {
      const std::size_t pc = entering(cost, phase2);
      if (pc == detail::lp_npos) return detail::lp_npos;
      const std::size_t pr = leaving(pc);
      if (pr == detail::lp_npos) return pc;
      if (++iter > cap) throw NumericalError("solve: simplex stalled");
      pivot(pr, pc);
    }
  };

  LpOutcome out;

  if (run(cost1, false) != detail::lp_npos)
    throw NumericalError("solve: phase-1 objective cannot be unbounded");
  const double bscale = std::max(1.0, inf_norm(b));
  const double z1 = -cost1[rhs_col];
  if (z1 > tol * bscale) {
    out.status = LpStatus::Infeasible;
    out.dual.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t art = ncols + nslack + i;
      const double y_int = 1.0 - cost1[art];  // phase-1 price of row i
      out.dual[i] = -flip[i] * y_int;
    }
    out.iterations = iter;
    return out;
  }

  // Drive leftover zero-valued artificials out of the basis. A row with no
  // usable real column is redundant; its artificial stays basic at zero.
  for (std::size_t i = 0; i < mi; ++i) {
    if (!artificial[basis[i]]) continue;
    std::size_t pc = detail::lp_npos;
    for (std::size_t j = 0; j < ncols + nslack; ++j)
      if (std::abs(T[i][j]) > 1e-7) {
        pc = j;
        break;
      }
    if (pc == detail::lp_npos) continue;
    pivot(i, pc);
    if (std::abs(T[i][rhs_col]) < 1e-11) T[i][rhs_col] = 0.0;
  }

  const std::size_t unb = run(cost2, true);
  out.iterations = iter;
  if (unb != detail::lp_npos) {
    out.status = LpStatus::Unbounded;
    out.objective = -kInf;
    Vec rint(ncols, 0.0);
    if (unb < ncols) rint[unb] = 1.0;
    for (std::size_t i = 0; i < mi; ++i)
      if (basis[i] < ncols) rint[basis[i]] = -T[i][unb];
    out.ray.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const auto& vm = vmap[j];
      double v = vm.sign * rint[vm.col_pos];
      if (vm.col_neg != detail::lp_npos) v -= rint[vm.col_neg];
      out.ray[j] = v;
    }
    return out;
  }

  Vec xint(ncols, 0.0);
  for (std::size_t i = 0; i < mi; ++i)
    if (basis[i] < ncols) xint[basis[i]] = T[i][rhs_col];
  out.status = LpStatus::Optimal;
  out.solution.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& vm = vmap[j];
    double v = vm.shift + vm.sign * xint[vm.col_pos];
    if (vm.col_neg != detail::lp_npos) v -= xint[vm.col_neg];
    out.solution[j] = v;
  }
  out.objective = dot(p.objective, out.solution);
  out.dual.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t art = ncols + nslack + i;
    out.dual[i] = -flip[i] * cost2[art];  // phase-2 price of row i
  }
  return out;
}

// Feasibility check: same machinery with a zero objective.
inline LpOutcome feasibility(const LpProblem& p, const LpOptions& opts = {}) {
  LpProblem q = p;
  std::fill(q.objective.begin(), q.objective.end(), 0.0);
  return solve(q, opts);
}

}  // namespace cheb
