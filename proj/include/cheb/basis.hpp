// Monomial bases and lifted feature maps.
//
// A basis is either the full monomial family of total degree <= m in d
// variables (graded-lex ordered, constant first) or a caller-supplied list of
// named functions. lift(x) = (1, g_1(x), ..., g_n(x)) is the column every
// hull-intersection and fitting routine works with.
#pragma once

#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "cheb/core.hpp"

namespace cheb {

struct ExponentVector {
  std::vector<int> exponents;  // entry k is the power of x_{k+1}

  int degree() const { return std::accumulate(exponents.begin(), exponents.end(), 0); }

  double eval(const Vec& point) const {
    if (point.size() != exponents.size())
      throw DimensionError("ExponentVector::eval: point dimension mismatch");
    double v = 1.0;
    for (std::size_t k = 0; k < exponents.size(); ++k)
      for (int t = 0; t < exponents[k]; ++t) v *= point[k];
    return v;
  }

  std::string name() const {
    std::string s;
    for (std::size_t k = 0; k < exponents.size(); ++k) {
      if (exponents[k] == 0) continue;
      if (!s.empty()) s += "*";
      s += "x" + std::to_string(k + 1);
      if (exponents[k] > 1) s += "^" + std::to_string(exponents[k]);
    }
    return s.empty() ? "1" : s;
  }

  bool operator==(const ExponentVector& o) const { return exponents == o.exponents; }
};

struct MonomialBasis {
  std::size_t dimension = 0;
  int degree_cap = 0;
  std::vector<ExponentVector> monomials;  // graded-lex: degree, then lex on exponents

  std::size_t size() const { return monomials.size(); }
};

namespace detail {

inline void emit_fixed_degree(std::size_t dim_left, int total,
                              std::vector<int>& prefix,
                              std::vector<ExponentVector>& out) {
  if (dim_left == 1) {
    prefix.push_back(total);
    out.push_back(ExponentVector{prefix});
    prefix.pop_back();
    return;
  }
  for (int e = 0; e <= total; ++e) {
    prefix.push_back(e);
    emit_fixed_degree(dim_left - 1, total - e, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace detail

inline MonomialBasis enumerate_monomials(std::size_t dimension, int degree) {
  if (dimension < 1) throw PreconditionError("enumerate_monomials: dimension must be >= 1");
  if (degree < 0) throw PreconditionError("enumerate_monomials: degree must be >= 0");
  MonomialBasis b;
  b.dimension = dimension;
  b.degree_cap = degree;
  std::vector<int> prefix;
  for (int t = 0; t <= degree; ++t)
    detail::emit_fixed_degree(dimension, t, prefix, b.monomials);
  return b;
}

struct CustomFunction {
  std::string name;
  std::function<double(const Vec&)> eval;
};

// Either a full monomial family or named custom functions; in both cases the
// lifted vector leads with the constant 1.
class BasisSpec {
 public:
  static BasisSpec monomial(std::size_t dimension, int degree) {
    if (degree < 1)
      throw PreconditionError("BasisSpec::monomial: need at least one non-constant function (degree >= 1)");
    BasisSpec b;
    b.dim_ = dimension;
    b.mono_ = enumerate_monomials(dimension, degree);
    return b;
  }

  static BasisSpec custom(std::size_t dimension, std::vector<CustomFunction> funcs) {
    if (dimension < 1) throw PreconditionError("BasisSpec::custom: dimension must be >= 1");
    if (funcs.empty())
      throw PreconditionError("BasisSpec::custom: need at least one basis function");
    BasisSpec b;
    b.dim_ = dimension;
    b.funcs_ = std::move(funcs);
    return b;
  }

  std::size_t dimension() const { return dim_; }
  bool is_monomial() const { return funcs_.empty(); }

  // n+1: leading constant plus the non-constant functions.
  std::size_t size() const {
    return is_monomial() ? mono_.size() : funcs_.size() + 1;
  }

  int degree() const {
    if (!is_monomial()) throw PreconditionError("BasisSpec::degree: custom basis has no degree");
    return mono_.degree_cap;
  }

  const MonomialBasis& monomials() const {
    if (!is_monomial()) throw PreconditionError("BasisSpec::monomials: custom basis");
    return mono_;
  }

  Vec lift(const Vec& point) const {
    if (point.size() != dim_)
      throw DimensionError("BasisSpec::lift: point dimension mismatch");
    Vec v;
    v.reserve(size());
    if (is_monomial()) {
      for (const auto& e : mono_.monomials) v.push_back(e.eval(point));
    } else {
      v.push_back(1.0);
      for (const auto& f : funcs_) v.push_back(f.eval(point));
    }
    return v;
  }

  std::string label(std::size_t i) const {
    if (i >= size()) throw DimensionError("BasisSpec::label: index out of range");
    if (is_monomial()) return mono_.monomials[i].name();
    return i == 0 ? "1" : funcs_[i - 1].name;
  }

 private:
  BasisSpec() = default;
  std::size_t dim_ = 0;
  MonomialBasis mono_;
  std::vector<CustomFunction> funcs_;
};

inline Vec lift(const BasisSpec& basis, const Vec& point) { return basis.lift(point); }

// x_j <- x_j - delta on every point; all other coordinates untouched.
inline Mat shift_coordinates(const Mat& points, std::size_t j, double delta) {
  Mat out = points;
  for (auto& p : out) {
    if (j >= p.size()) throw DimensionError("shift_coordinates: coordinate index out of range");
    p[j] -= delta;
  }
  return out;
}

// Checks the shift identity: when the weighted products and the weighted
// coefficients agree on both sides, they keep agreeing after every entry of
// x and y is shifted by the same delta.  Premises on the weights (nonnegative,
// unit sum) are required; the returned flag reports whether the shifted
// equality itself holds, so a broken premise shows up as false for generic
// delta.
inline bool verify_shift_lemma(const Vec& alpha, const Vec& a, const Vec& x,
                               const Vec& beta, const Vec& b, const Vec& y,
                               double delta) {
  if (alpha.size() != a.size() || a.size() != x.size())
    throw DimensionError("verify_shift_lemma: first-side lengths differ");
  if (beta.size() != b.size() || b.size() != y.size())
    throw DimensionError("verify_shift_lemma: second-side lengths differ");
  auto check_weights = [](const Vec& w, const char* side) {
    double s = 0.0;
    for (double v : w) {
      if (v < -1e-12) throw PreconditionError(std::string("verify_shift_lemma: negative weight on ") + side);
      s += v;
    }
    if (std::abs(s - 1.0) > 1e-9)
      throw PreconditionError(std::string("verify_shift_lemma: weights must sum to 1 on ") + side);
  };
  check_weights(alpha, "first side");
  check_weights(beta, "second side");
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) lhs += alpha[i] * a[i] * (x[i] - delta);
  for (std::size_t i = 0; i < beta.size(); ++i) rhs += beta[i] * b[i] * (y[i] - delta);
  return std::abs(lhs - rhs) <= 1e-9 * (1.0 + std::abs(lhs));
}

}  // namespace cheb
