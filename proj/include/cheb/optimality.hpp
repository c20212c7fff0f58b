// Optimality of a minimax fit, decided through convex geometry: the fit is
// optimal exactly when the lifted hulls of the positive and negative
// maximal-deviation points intersect.  A yes comes with a small convex
// combination certifying the common point; a no comes with a separating
// hyperplane and a direction that strictly reduces the uniform error.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "cheb/approx.hpp"
#include "cheb/basis.hpp"
#include "cheb/core.hpp"
#include "cheb/lp.hpp"

namespace cheb {

// Convex weights on dataset points placing one lifted point in both hulls.
struct OptimalityCertificate {
  std::vector<std::pair<std::size_t, double>> positive;  // (point index, alpha)
  std::vector<std::pair<std::size_t, double>> negative;  // (point index, beta)
  double residual = 0.0;  // max coordinate mismatch of the matched lifted point
};

// Hyperplane over the non-constant lifted coordinates separating the two
// extremal sets: <normal, tail(x)> - offset >= +margin on the positive side
// and <= -margin on the other.  positive_side_is_plus records which set sits
// on the positive side.
struct SeparationWitness {
  Vec normal;
  double offset = 0.0;
  double margin = 0.0;
  bool positive_side_is_plus = true;
};

struct OptimalityResult {
  bool optimal = false;
  double psi = 0.0;
  ExtremalSets extremal;
  std::optional<OptimalityCertificate> certificate;  // exactly one of these
  std::optional<SeparationWitness> witness;          // two is present
};

struct IsolabilityResult {
  bool isolable = false;
  std::optional<SeparationWitness> witness;  // present when isolable
};

namespace detail {

// Feasibility system for a common point of the two lifted hulls:
// sum alpha lift+ = sum beta lift-, each side summing to 1, weights >= 0.
inline LpProblem hull_intersection_lp(const Mat& plus_lifts, const Mat& minus_lifts,
                                      std::size_t lifted_size) {
  const std::size_t np = plus_lifts.size(), nm = minus_lifts.size();
  LpProblem p(np + nm);
  for (auto& l : p.lower) l = 0.0;
  for (std::size_t c = 0; c < lifted_size; ++c) {
    Vec row(np + nm, 0.0);
    for (std::size_t i = 0; i < np; ++i) row[i] = plus_lifts[i][c];
    for (std::size_t j = 0; j < nm; ++j) row[np + j] = -minus_lifts[j][c];
    p.add_row(std::move(row), Relation::Equal, 0.0);
  }
  Vec sp(np + nm, 0.0), sm(np + nm, 0.0);
  for (std::size_t i = 0; i < np; ++i) sp[i] = 1.0;
  for (std::size_t j = 0; j < nm; ++j) sm[np + j] = 1.0;
  p.add_row(std::move(sp), Relation::Equal, 1.0);
  p.add_row(std::move(sm), Relation::Equal, 1.0);
  return p;
}

// Best-margin separating hyperplane of the lifted tails, normalized by
// ||normal||_inf <= 1.  margin 0 means the hulls touch or overlap.
inline SeparationWitness margin_witness(const Mat& plus_lifts, const Mat& minus_lifts,
                                        std::size_t lifted_size,
                                        const LpOptions& opts = {}) {
  const std::size_t n = lifted_size - 1;  // tail coordinates
  LpProblem p(n + 2);                     // u_1..u_n, a, t
  for (std::size_t j = 0; j < n; ++j) {
    p.lower[j] = -1.0;
    p.upper[j] = 1.0;
  }
  p.lower[n + 1] = 0.0;
  p.objective[n + 1] = -1.0;  // maximize the margin
  for (const auto& l : plus_lifts) {
    Vec row(n + 2, 0.0);
    for (std::size_t j = 0; j < n; ++j) row[j] = l[j + 1];
    row[n] = -1.0;
    row[n + 1] = -1.0;
    p.add_row(std::move(row), Relation::GreaterEq, 0.0);  // <u,tail> - a - t >= 0
  }
  for (const auto& l : minus_lifts) {
    Vec row(n + 2, 0.0);
    for (std::size_t j = 0; j < n; ++j) row[j] = l[j + 1];
    row[n] = -1.0;
    row[n + 1] = 1.0;
    p.add_row(std::move(row), Relation::LessEq, 0.0);  // <u,tail> - a + t <= 0
  }
  auto out = solve(p, opts);
  if (out.status != LpStatus::Optimal)
    throw NumericalError("margin_witness: separation LP not solved to optimality");
  SeparationWitness w;
  w.normal.assign(out.solution.begin(), out.solution.begin() + n);
  w.offset = out.solution[n];
  w.margin = out.solution[n + 1];
  w.positive_side_is_plus = true;
  return w;
}

inline Mat lift_all(const BasisSpec& basis, const Mat& points) {
  Mat lifts;
  lifts.reserve(points.size());
  for (const auto& p : points) lifts.push_back(basis.lift(p));
  return lifts;
}

inline Mat lift_indices(const BasisSpec& basis, const Dataset& data,
                        const std::vector<std::size_t>& idx) {
  Mat lifts;
  lifts.reserve(idx.size());
  for (auto i : idx) lifts.push_back(basis.lift(data.points[i]));
  return lifts;
}

inline double certificate_residual(const BasisSpec& basis, const Dataset& data,
                                   const OptimalityCertificate& cert) {
  Vec diff(basis.size(), 0.0);
  for (const auto& [i, w] : cert.positive) {
    Vec l = basis.lift(data.points[i]);
    for (std::size_t c = 0; c < diff.size(); ++c) diff[c] += w * l[c];
  }
  for (const auto& [i, w] : cert.negative) {
    Vec l = basis.lift(data.points[i]);
    for (std::size_t c = 0; c < diff.size(); ++c) diff[c] -= w * l[c];
  }
  return inf_norm(diff);
}

}  // namespace detail

// Sparsify a hull-intersection certificate to at most n+2 support points in
// total, by walking along annihilating directions of the signed lifted
// vectors until enough weights vanish.  Unit sums, nonnegativity and the
// equal-combination property survive each step; the matched point itself may
// move inside the intersection (any representation with so few points must
// in general pick a different common point).
inline OptimalityCertificate caratheodory_reduce(const BasisSpec& basis,
                                                 const Dataset& data,
                                                 const OptimalityCertificate& input) {
  const std::size_t nb = basis.size();

  // validate + merge duplicate indices per side
  auto gather = [&](const std::vector<std::pair<std::size_t, double>>& side,
                    const char* name) {
    std::vector<std::pair<std::size_t, double>> merged;
    double sum = 0.0;
    for (const auto& [i, w] : side) {
      if (i >= data.size())
        throw PreconditionError(std::string("caratheodory_reduce: point index out of range on ") + name);
      if (w < -1e-12)
        throw PreconditionError(std::string("caratheodory_reduce: negative weight on ") + name);
      sum += w;
      bool found = false;
      for (auto& [j, v] : merged)
        if (j == i) {
          v += w;
          found = true;
          break;
        }
      if (!found) merged.emplace_back(i, w);
    }
    if (std::abs(sum - 1.0) > 1e-7)
      throw PreconditionError(std::string("caratheodory_reduce: weights must sum to 1 on ") + name);
    std::erase_if(merged, [](const auto& e) { return e.second <= 1e-14; });
    return merged;
  };
  OptimalityCertificate cert;
  cert.positive = gather(input.positive, "positive side");
  cert.negative = gather(input.negative, "negative side");
  if (cert.positive.empty() || cert.negative.empty())
    throw PreconditionError("caratheodory_reduce: a side has no support");
  if (detail::certificate_residual(basis, data, cert) > 1e-6)
    throw PreconditionError("caratheodory_reduce: combinations do not match");

  // signed-union form: weights lambda_k = w/2 on vectors -lift+ and +lift-;
  // then sum lambda_k u_k = 0 and sum lambda_k = 1.
  struct Entry {
    bool plus;
    std::size_t index;
    double lambda;
    Vec u;
  };
  std::vector<Entry> entries;
  for (const auto& [i, w] : cert.positive) {
    Vec u = basis.lift(data.points[i]);
    for (auto& v : u) v = -v;
    entries.push_back({true, i, w / 2.0, std::move(u)});
  }
  for (const auto& [i, w] : cert.negative)
    entries.push_back({false, i, w / 2.0, basis.lift(data.points[i])});

  while (entries.size() > nb + 1) {
    const std::size_t s = entries.size();
    Mat m(nb + 1, Vec(s, 0.0));
    for (std::size_t k = 0; k < s; ++k) {
      for (std::size_t c = 0; c < nb; ++c) m[c][k] = entries[k].u[c];
      m[nb][k] = 1.0;
    }
    auto info = detail::null_space(m);
    if (!info.vector) throw NumericalError("caratheodory_reduce: no annihilating direction found");
    Vec mu = *info.vector;
    bool has_pos = false;
    for (double v : mu) has_pos |= (v > 1e-14);
    if (!has_pos)
      for (auto& v : mu) v = -v;
    double t = kInf;
    std::size_t kill = 0;
    for (std::size_t k = 0; k < s; ++k)
      if (mu[k] > 1e-14 && entries[k].lambda / mu[k] < t) {
        t = entries[k].lambda / mu[k];
        kill = k;
      }
    if (!std::isfinite(t)) throw NumericalError("caratheodory_reduce: direction has no positive part");
    for (std::size_t k = 0; k < s; ++k) entries[k].lambda -= t * mu[k];
    entries[kill].lambda = 0.0;
    std::erase_if(entries, [](const Entry& e) { return e.lambda <= 1e-13; });
  }

  // the leading-1 coordinate keeps each side's share at 1/2; renormalize away
  // the accumulated round-off
  OptimalityCertificate out;
  double sp = 0.0, sm = 0.0;
  for (const auto& e : entries) (e.plus ? sp : sm) += e.lambda;
  if (sp <= 0.0 || sm <= 0.0)
    throw NumericalError("caratheodory_reduce: a side lost all weight");
  for (const auto& e : entries) {
    if (e.plus) out.positive.emplace_back(e.index, e.lambda / sp);
    else out.negative.emplace_back(e.index, e.lambda / sm);
  }
  out.residual = detail::certificate_residual(basis, data, out);
  return out;
}

// Decides optimality of the given coefficients on the dataset.  Feasibility
// of the hull-intersection system yields a certificate (reduced to <= n+2
// support points); otherwise a maximum-margin separating witness is built.
// A one-sided extremal configuration is never optimal: shifting the constant
// coefficient lowers the error, and the returned witness encodes that shift.
inline OptimalityResult verify_optimality(const BasisSpec& basis, const Vec& coefficients,
                                          const Dataset& data, double tolerance,
                                          const LpOptions& lp = {}) {
  OptimalityResult res;
  res.psi = uniform_error(basis, coefficients, data);
  if (res.psi <= tolerance)
    throw PreconditionError(
        "verify_optimality: approximation error below tolerance; extremal signs undefined");
  res.extremal = extract_extremal_sets(basis, coefficients, data, tolerance);
  const auto& ex = res.extremal;

  if (ex.positive.empty() || ex.negative.empty()) {
    SeparationWitness w;
    w.normal.assign(basis.size() - 1, 0.0);
    w.offset = -1.0;
    w.margin = 1.0;
    w.positive_side_is_plus = !ex.positive.empty();
    res.optimal = false;
    res.witness = w;
    return res;
  }

  Mat plus_lifts = detail::lift_indices(basis, data, ex.positive);
  Mat minus_lifts = detail::lift_indices(basis, data, ex.negative);
  auto hull = feasibility(detail::hull_intersection_lp(plus_lifts, minus_lifts, basis.size()), lp);

  if (hull.status == LpStatus::Optimal) {
    OptimalityCertificate cert;
    const std::size_t np = plus_lifts.size();
    for (std::size_t i = 0; i < np; ++i)
      if (hull.solution[i] > 1e-12) cert.positive.emplace_back(ex.positive[i], hull.solution[i]);
    for (std::size_t j = 0; j < minus_lifts.size(); ++j)
      if (hull.solution[np + j] > 1e-12) cert.negative.emplace_back(ex.negative[j], hull.solution[np + j]);
    // tidy the basic solution: exact unit sums per side
    for (auto* side : {&cert.positive, &cert.negative}) {
      double s = 0.0;
      for (auto& [i, w] : *side) s += w;
      if (s <= 0.0) throw NumericalError("verify_optimality: empty certificate side");
      for (auto& [i, w] : *side) w /= s;
    }
    cert.residual = detail::certificate_residual(basis, data, cert);
    cert = caratheodory_reduce(basis, data, cert);
    if (cert.residual > 1e-7)
      throw NumericalError("verify_optimality: certificate residual exceeds tolerance");
    res.optimal = true;
    res.certificate = std::move(cert);
    return res;
  }

  auto w = detail::margin_witness(plus_lifts, minus_lifts, basis.size(), lp);
  if (w.margin <= 1e-12)
    throw NumericalError(
        "verify_optimality: hulls declared disjoint but no separating margin found");
  res.optimal = false;
  res.witness = std::move(w);
  return res;
}

inline OptimalityResult verify_optimality(const BasisSpec& basis, const Vec& coefficients,
                                          const Dataset& data) {
  const double psi = uniform_error(basis, coefficients, data);
  return verify_optimality(basis, coefficients, data, default_extremal_tolerance(psi));
}

// Direction h with <h, lift(x)> positive on the positive-deviation extremals
// and negative on the others, so a small step shrinks every active deviation.
// The step is validated by halving before the direction is returned.
inline Vec descent_direction(const BasisSpec& basis, const Vec& coefficients,
                             const Dataset& data, const SeparationWitness& witness) {
  const std::size_t nb = basis.size();
  if (witness.normal.size() + 1 != nb)
    throw DimensionError("descent_direction: witness size does not match basis");
  Vec h(nb, 0.0);
  if (witness.positive_side_is_plus) {
    h[0] = -witness.offset;
    for (std::size_t j = 1; j < nb; ++j) h[j] = witness.normal[j - 1];
  } else {
    h[0] = witness.offset;
    for (std::size_t j = 1; j < nb; ++j) h[j] = -witness.normal[j - 1];
  }
  const double psi = uniform_error(basis, coefficients, data);
  const double hn = inf_norm(h);
  if (hn <= 0.0) throw NumericalError("descent_direction: witness inconsistent");
  double t = 1e-3 * psi / hn;
  for (int halvings = 0; halvings <= 20; ++halvings, t /= 2.0) {
    Vec moved = coefficients;
    for (std::size_t j = 0; j < nb; ++j) moved[j] += t * h[j];
    if (uniform_error(basis, moved, data) < psi - 1e-12) return h;
  }
  throw NumericalError("descent_direction: witness inconsistent");
}

// Rice-style separability of two signed point sets under the basis: isolable
// exactly when some basis combination is strictly positive on one set and
// strictly negative on the other.
inline IsolabilityResult check_isolability(const Mat& plus_points, const Mat& minus_points,
                                           const BasisSpec& basis, const LpOptions& lp = {}) {
  if (plus_points.empty() || minus_points.empty())
    throw PreconditionError("check_isolability: both point sets must be non-empty");
  auto w = detail::margin_witness(detail::lift_all(basis, plus_points),
                                  detail::lift_all(basis, minus_points), basis.size(), lp);
  IsolabilityResult r;
  r.isolable = w.margin > 1e-9;
  if (r.isolable) r.witness = std::move(w);
  return r;
}

// Second route to the same verdict: 0 lies in the convex hull of the signed
// lifted points (-lift on positive extremals, +lift on negative ones).
inline bool zero_in_subdifferential(const BasisSpec& basis, const Mat& plus_points,
                                    const Mat& minus_points, const LpOptions& lp = {}) {
  const std::size_t np = plus_points.size(), nm = minus_points.size();
  LpProblem p(np + nm);
  for (auto& l : p.lower) l = 0.0;
  for (std::size_t c = 0; c < basis.size(); ++c) {
    Vec row(np + nm, 0.0);
    for (std::size_t i = 0; i < np; ++i) row[i] = -basis.lift(plus_points[i])[c];
    for (std::size_t j = 0; j < nm; ++j) row[np + j] = basis.lift(minus_points[j])[c];
    p.add_row(std::move(row), Relation::Equal, 0.0);
  }
  p.add_row(Vec(np + nm, 1.0), Relation::Equal, 1.0);
  return feasibility(p, lp).status == LpStatus::Optimal;
}

}  // namespace cheb
