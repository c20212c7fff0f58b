// Discrete data, the linear-in-parameters model, its uniform error, the
// LP minimax fit, and extraction of the maximal-deviation point sets.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cheb/basis.hpp"
#include "cheb/core.hpp"
#include "cheb/lp.hpp"

namespace cheb {

struct Dataset {
  std::size_t dimension = 0;
  Mat points;
  Vec values;

  std::size_t size() const { return points.size(); }
};

inline Dataset make_dataset(std::size_t dimension, Mat points, Vec values) {
  if (dimension < 1) throw PreconditionError("make_dataset: dimension must be >= 1");
  if (points.size() != values.size())
    throw DimensionError("make_dataset: point and value counts differ");
  for (std::size_t i = 0; i < points.size(); ++i)
    if (points[i].size() != dimension)
      throw DimensionError("make_dataset: point " + std::to_string(i) +
                           " has wrong dimension");
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (points[i] == points[j])
        throw PreconditionError("make_dataset: duplicate point at indices " +
                                std::to_string(i) + " and " + std::to_string(j));
  return Dataset{dimension, std::move(points), std::move(values)};
}

struct FitResult {
  Vec coefficients;  // index 0 multiplies the constant
  double error = 0.0;
  Vec deviations;  // f(x_k) - L(A, x_k), dataset order
};

// Indices of points whose deviation magnitude comes within `tolerance`
// (absolute) of the uniform error, split by deviation sign.
struct ExtremalSets {
  std::vector<std::size_t> positive;
  std::vector<std::size_t> negative;
  double tolerance = 0.0;
};

inline double evaluate_model(const BasisSpec& basis, const Vec& coefficients,
                             const Vec& point) {
  if (coefficients.size() != basis.size())
    throw DimensionError("evaluate_model: coefficient count != basis size");
  return dot(coefficients, basis.lift(point));
}

inline Vec deviations(const BasisSpec& basis, const Vec& coefficients,
                      const Dataset& data) {
  Vec dev(data.size());
  for (std::size_t k = 0; k < data.size(); ++k)
    dev[k] = data.values[k] - evaluate_model(basis, coefficients, data.points[k]);
  return dev;
}

inline double uniform_error(const BasisSpec& basis, const Vec& coefficients,
                            const Dataset& data) {
  if (data.size() == 0) throw PreconditionError("uniform_error: empty dataset");
  return inf_norm(deviations(basis, coefficients, data));
}

// minimize z subject to -z <= f(x_k) - L(A, x_k) <= z over free A, z >= 0.
inline FitResult fit_minimax(const BasisSpec& basis, const Dataset& data,
                             const LpOptions& opts = {}) {
  if (data.size() == 0) throw PreconditionError("fit_minimax: empty dataset");
  if (data.dimension != basis.dimension())
    throw DimensionError("fit_minimax: dataset and basis dimensions differ");
  const std::size_t nb = basis.size();
  LpProblem p(nb + 1);
  p.objective[nb] = 1.0;
  p.lower[nb] = 0.0;
  for (std::size_t k = 0; k < data.size(); ++k) {
    Vec lifted = basis.lift(data.points[k]);
    Vec up(nb + 1), dn(nb + 1);
    for (std::size_t j = 0; j < nb; ++j) up[j] = dn[j] = lifted[j];
    up[nb] = 1.0;   // L + z >= f
    dn[nb] = -1.0;  // L - z <= f
    p.add_row(std::move(up), Relation::GreaterEq, data.values[k]);
    p.add_row(std::move(dn), Relation::LessEq, data.values[k]);
  }
  auto out = solve(p, opts);
  if (out.status != LpStatus::Optimal)
    throw NumericalError("fit_minimax: fitting LP not solved to optimality");
  FitResult r;
  r.coefficients.assign(out.solution.begin(), out.solution.begin() + nb);
  r.error = out.objective;
  r.deviations = deviations(basis, r.coefficients, data);
  return r;
}

inline double default_extremal_tolerance(double psi) {
  return 1e-7 * std::max(1.0, psi);
}

inline ExtremalSets extract_extremal_sets(const BasisSpec& basis,
                                          const Vec& coefficients,
                                          const Dataset& data, double tolerance) {
  if (tolerance <= 0.0)
    throw PreconditionError("extract_extremal_sets: tolerance must be positive");
  Vec dev = deviations(basis, coefficients, data);
  const double psi = inf_norm(dev);
  if (psi <= tolerance)
    throw PreconditionError(
        "extract_extremal_sets: approximation error below tolerance; extremal signs undefined");
  ExtremalSets es;
  es.tolerance = tolerance;
  for (std::size_t k = 0; k < dev.size(); ++k) {
    if (std::abs(dev[k]) < psi - tolerance) continue;
    (dev[k] > 0.0 ? es.positive : es.negative).push_back(k);
  }
  return es;
}

inline ExtremalSets extract_extremal_sets(const BasisSpec& basis,
                                          const Vec& coefficients,
                                          const Dataset& data) {
  const double psi = uniform_error(basis, coefficients, data);
  return extract_extremal_sets(basis, coefficients, data,
                               default_extremal_tolerance(psi));
}

}  // namespace cheb
