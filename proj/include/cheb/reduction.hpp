// Necessary conditions for the signed extremal configuration of a best
// uniform fit, checked by degree reduction.  Two families: coordinate shifts
// at the extremes (each shift drops the degree by one and removes the points
// sitting at the extreme), and hyperplane cuts (points on the plane drop out,
// points on the negative side swap sign).  Both recurse down to degree one,
// where the condition is plain intersection of the convex hulls of the two
// signed sets.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cheb/core.hpp"
#include "cheb/lp.hpp"
#include "cheb/optimality.hpp"

namespace cheb {

enum class ReductionKind { Min, Max };

inline const char* to_string(ReductionKind k) {
  return k == ReductionKind::Min ? "min" : "max";
}

enum class ConditionVerdict { Holds, Violated, Inconclusive };

inline const char* to_string(ConditionVerdict v) {
  switch (v) {
    case ConditionVerdict::Holds: return "holds";
    case ConditionVerdict::Violated: return "violated";
    default: return "inconclusive";
  }
}

// Points carrying deviation signs (+1 or -1) plus the polynomial degree the
// signed configuration is tested against.
struct SignedPointSet {
  std::size_t dimension = 0;
  Mat points;
  std::vector<int> signs;
  std::size_t degree = 0;
};

inline SignedPointSet make_signed_set(const Dataset& data, const ExtremalSets& extremal,
                                      std::size_t degree) {
  SignedPointSet s;
  s.dimension = data.dimension;
  s.degree = degree;
  for (auto i : extremal.positive) {
    s.points.push_back(data.points[i]);
    s.signs.push_back(+1);
  }
  for (auto i : extremal.negative) {
    s.points.push_back(data.points[i]);
    s.signs.push_back(-1);
  }
  return s;
}

namespace detail {

inline void validate_signed_set(const SignedPointSet& s, const char* who) {
  if (s.dimension == 0) throw PreconditionError(std::string(who) + ": dimension must be positive");
  if (s.degree == 0) throw PreconditionError(std::string(who) + ": degree must be positive");
  if (s.points.size() != s.signs.size())
    throw DimensionError(std::string(who) + ": points and signs differ in length");
  for (const auto& p : s.points)
    if (p.size() != s.dimension)
      throw DimensionError(std::string(who) + ": point dimension mismatch");
  for (int sg : s.signs)
    if (sg != 1 && sg != -1)
      throw PreconditionError(std::string(who) + ": signs must be +1 or -1");
}

inline void split_signs(const SignedPointSet& s, Mat& plus, Mat& minus) {
  for (std::size_t i = 0; i < s.points.size(); ++i)
    (s.signs[i] > 0 ? plus : minus).push_back(s.points[i]);
}

// degree-one condition: the raw hulls of the two sides share a point
inline bool raw_hulls_intersect(const Mat& plus, const Mat& minus, std::size_t dimension,
                                const LpOptions& lp) {
  auto affine = [dimension](const Mat& pts) {
    Mat lifts;
    lifts.reserve(pts.size());
    for (const auto& p : pts) {
      Vec l(dimension + 1);
      l[0] = 1.0;
      for (std::size_t c = 0; c < dimension; ++c) l[c + 1] = p[c];
      lifts.push_back(std::move(l));
    }
    return lifts;
  };
  auto out = feasibility(hull_intersection_lp(affine(plus), affine(minus), dimension + 1), lp);
  return out.status == LpStatus::Optimal;
}

}  // namespace detail

// One shift applied to one coordinate: delta, the indices dropped for landing
// on the extreme, and the reduced set.
struct ReductionBranch {
  std::size_t coordinate = 0;
  ReductionKind kind = ReductionKind::Min;
  double delta = 0.0;
  std::vector<std::size_t> removed;
  SignedPointSet result;
};

// Shift coordinate j so its extreme value moves to zero (Min subtracts the
// minimum; Max replaces x_j by max - x_j, keeping coordinates nonnegative),
// drop the points landing at zero, and lower the degree by one.
inline ReductionBranch reduce_step(const SignedPointSet& set, std::size_t coordinate,
                                   ReductionKind kind) {
  detail::validate_signed_set(set, "reduce_step");
  if (set.degree <= 1) throw PreconditionError("reduce_step: degree must exceed 1");
  if (coordinate >= set.dimension) throw DimensionError("reduce_step: coordinate out of range");
  if (set.points.empty()) throw PreconditionError("reduce_step: point set is empty");

  double delta = set.points[0][coordinate];
  for (const auto& p : set.points)
    delta = (kind == ReductionKind::Min) ? std::min(delta, p[coordinate])
                                         : std::max(delta, p[coordinate]);

  ReductionBranch br;
  br.coordinate = coordinate;
  br.kind = kind;
  br.delta = delta;
  br.result.dimension = set.dimension;
  br.result.degree = set.degree - 1;
  for (std::size_t i = 0; i < set.points.size(); ++i) {
    Vec p = set.points[i];
    p[coordinate] = (kind == ReductionKind::Min) ? p[coordinate] - delta : delta - p[coordinate];
    if (p[coordinate] <= 1e-9) {
      br.removed.push_back(i);
    } else {
      br.result.points.push_back(std::move(p));
      br.result.signs.push_back(set.signs[i]);
    }
  }
  return br;
}

struct ReductionOptions {
  std::size_t node_budget = 10000;
  bool all_branches = true;  // false follows only (coordinate 0, Min) at each level
  LpOptions lp;
};

// Verdict plus, when Violated, the chain of shifts leading to the refuting
// degree-one configuration.
struct ReductionTrace {
  ConditionVerdict verdict = ConditionVerdict::Holds;
  std::vector<ReductionBranch> branches;
  std::size_t nodes_explored = 0;
};

namespace detail {

struct ReduceSearch {
  const ReductionOptions& opts;
  std::size_t nodes = 0;
  bool truncated = false;
  std::vector<ReductionBranch> chain;
  std::vector<ReductionBranch> refutation;

  explicit ReduceSearch(const ReductionOptions& o) : opts(o) {}

  ConditionVerdict run(const SignedPointSet& set) {
    Mat plus, minus;
    split_signs(set, plus, minus);
    if (plus.empty() || minus.empty()) return ConditionVerdict::Holds;  // nothing refutable here
    if (set.degree == 1) {
      if (raw_hulls_intersect(plus, minus, set.dimension, opts.lp)) return ConditionVerdict::Holds;
      refutation = chain;
      return ConditionVerdict::Violated;
    }
    for (std::size_t j = 0; j < set.dimension; ++j) {
      for (ReductionKind kind : {ReductionKind::Min, ReductionKind::Max}) {
        if (nodes >= opts.node_budget) {
          truncated = true;
          return ConditionVerdict::Holds;
        }
        ++nodes;
        auto br = reduce_step(set, j, kind);
        // copy before pushing: recursion grows `chain`, so references into it
        // (including our own `set` argument) must never be held across a call
        const SignedPointSet child = br.result;
        chain.push_back(std::move(br));
        auto v = run(child);
        if (v == ConditionVerdict::Violated) return v;
        chain.pop_back();
        if (!opts.all_branches) return ConditionVerdict::Holds;
      }
    }
    return ConditionVerdict::Holds;
  }
};

}  // namespace detail

// Explores every shift chain (all coordinates, both extremes, every level)
// down to degree one and reports whether some chain refutes the signed
// configuration.  Exceeding the node budget yields Inconclusive unless a
// refutation was already found.
inline ReductionTrace verify_necessary_condition(const SignedPointSet& set,
                                                 const ReductionOptions& opts = {}) {
  detail::validate_signed_set(set, "verify_necessary_condition");
  detail::ReduceSearch search(opts);
  auto v = search.run(set);
  ReductionTrace trace;
  trace.nodes_explored = search.nodes;
  if (v == ConditionVerdict::Violated) {
    trace.verdict = ConditionVerdict::Violated;
    trace.branches = std::move(search.refutation);
  } else {
    trace.verdict = search.truncated ? ConditionVerdict::Inconclusive : ConditionVerdict::Holds;
  }
  return trace;
}

// One hyperplane cut: the plane through a size-d subset of the points, the
// sign assignment after cutting (0 marks a point dropped for lying on the
// plane), and whether the whole subtree below the cut stayed feasible.
struct CutCheck {
  Vec normal;
  double offset = 0.0;
  std::vector<std::size_t> defining;
  std::vector<int> resigned_signs;
  std::size_t degree_after = 0;
  bool feasible = true;
  std::string note;
};

struct CutReport {
  ConditionVerdict verdict = ConditionVerdict::Holds;
  std::vector<CutCheck> checks;
  std::size_t nodes_explored = 0;
};

namespace detail {

// plane u.x = a through the given points, ||u||_inf = 1 with the largest
// component positive; nullopt when the points are affinely dependent
inline std::optional<std::pair<Vec, double>> hyperplane_through(const Mat& points,
                                                                const std::vector<std::size_t>& idx,
                                                                std::size_t dimension) {
  Mat m(idx.size(), Vec(dimension + 1));
  for (std::size_t r = 0; r < idx.size(); ++r) {
    for (std::size_t c = 0; c < dimension; ++c) m[r][c] = points[idx[r]][c];
    m[r][dimension] = -1.0;
  }
  auto info = null_space(m);
  if (info.rank < idx.size() || !info.vector) return std::nullopt;
  Vec u(info.vector->begin(), info.vector->begin() + dimension);
  double a = (*info.vector)[dimension];
  std::size_t lead = 0;
  for (std::size_t c = 1; c < dimension; ++c)
    if (std::abs(u[c]) > std::abs(u[lead])) lead = c;
  if (std::abs(u[lead]) <= 1e-12) return std::nullopt;  // plane parallel to every axis: not a plane
  const double scale = u[lead];
  for (auto& v : u) v /= scale;
  a /= scale;
  return std::make_pair(std::move(u), a);
}

struct CutSearch {
  const ReductionOptions& opts;
  std::size_t nodes = 0;
  bool truncated = false;

  explicit CutSearch(const ReductionOptions& o) : opts(o) {}

  // conjunction over all cuts of `set`; records per-cut results into `checks`
  // at the top level only
  ConditionVerdict run(const SignedPointSet& set, std::vector<CutCheck>* checks) {
    const std::size_t n = set.points.size(), d = set.dimension;
    bool saw_violation = false;
    if (n < d) return ConditionVerdict::Holds;  // no plane is pinned down; nothing to cut
    std::vector<std::size_t> idx(d);
    for (std::size_t i = 0; i < d; ++i) idx[i] = i;
    while (true) {
      if (nodes >= opts.node_budget) {
        truncated = true;
        break;
      }
      ++nodes;
      CutCheck check;
      check.defining = idx;
      check.degree_after = set.degree - 1;
      auto plane = hyperplane_through(set.points, idx, d);
      if (!plane) {
        check.note = "defining points affinely dependent; skipped";
      } else {
        check.normal = plane->first;
        check.offset = plane->second;
        SignedPointSet child;
        child.dimension = d;
        child.degree = set.degree - 1;
        check.resigned_signs.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
          double s = dot(check.normal, set.points[i]) - check.offset;
          if (std::abs(s) <= 1e-9) continue;  // on the plane: removed
          int sign = s > 0 ? set.signs[i] : -set.signs[i];
          check.resigned_signs[i] = sign;
          child.points.push_back(set.points[i]);
          child.signs.push_back(sign);
        }
        Mat plus, minus;
        split_signs(child, plus, minus);
        if (plus.empty() || minus.empty()) {
          check.note = "a side is empty after resigning; vacuously feasible";
        } else if (child.degree == 1) {
          check.feasible = raw_hulls_intersect(plus, minus, d, opts.lp);
        } else {
          auto v = run(child, nullptr);
          if (v == ConditionVerdict::Violated) check.feasible = false;
          else if (truncated) check.note = "node budget exhausted below this cut";
        }
      }
      saw_violation |= !check.feasible;
      if (checks) checks->push_back(std::move(check));
      else if (!check.feasible) return ConditionVerdict::Violated;
      // next size-d index subset
      std::size_t k = d;
      while (k > 0 && idx[k - 1] == n - d + k - 1) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t i = k; i < d; ++i) idx[i] = idx[i - 1] + 1;
    }
    if (saw_violation) return ConditionVerdict::Violated;
    return truncated ? ConditionVerdict::Inconclusive : ConditionVerdict::Holds;
  }
};

}  // namespace detail

// Checks the hyperplane-cut condition: for the plane through every affinely
// independent size-d subset of the points, dropping on-plane points and
// flipping the negative side must leave a configuration that still satisfies
// the degree-(m-1) condition, recursively down to hull intersection at degree
// one.  Requires degree >= 2.
inline CutReport cut_condition_check(const SignedPointSet& set, const ReductionOptions& opts = {}) {
  detail::validate_signed_set(set, "cut_condition_check");
  if (set.degree < 2)
    throw PreconditionError("cut_condition_check: degree must be at least 2");
  detail::CutSearch search(opts);
  CutReport report;
  auto v = search.run(set, &report.checks);
  report.nodes_explored = search.nodes;
  report.verdict = v;
  return report;
}

}  // namespace cheb
