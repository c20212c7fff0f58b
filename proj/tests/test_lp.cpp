#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "cheb/lp.hpp"

using namespace cheb;

namespace {

void check_primal(const LpProblem& p, const Vec& x, double tol = 1e-7) {
  REQUIRE(x.size() == p.num_vars());
  for (std::size_t j = 0; j < p.num_vars(); ++j) {
    REQUIRE(x[j] >= p.lower[j] - tol);
    REQUIRE(x[j] <= p.upper[j] + tol);
  }
  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    const double ax = dot(p.rows[i], x);
    switch (p.relations[i]) {
      case Relation::LessEq: REQUIRE(ax <= p.rhs[i] + tol); break;
      case Relation::GreaterEq: REQUIRE(ax >= p.rhs[i] - tol); break;
      case Relation::Equal: REQUIRE(std::abs(ax - p.rhs[i]) <= tol); break;
    }
  }
}

// Lagrangian dual value for row prices y:  y.b + sum_j min(r_j l_j, r_j u_j),
// r = c - A^T y.  NaN when a genuinely nonzero multiplier needs a missing bound.
double dual_value(const LpProblem& p, const Vec& y) {
  double v = dot(y, p.rhs);
  Vec r = p.objective;
  for (std::size_t i = 0; i < p.num_rows(); ++i)
    for (std::size_t j = 0; j < p.num_vars(); ++j) r[j] -= y[i] * p.rows[i][j];
  for (std::size_t j = 0; j < p.num_vars(); ++j) {
    const double rj = r[j];
    const double bound = rj > 0.0 ? p.lower[j] : p.upper[j];
    if (std::isfinite(bound)) {
      v += rj * bound;
    } else if (std::abs(rj) > 1e-7) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  }
  return v;
}

void check_dual_signs(const LpProblem& p, const Vec& y) {
  const double s = 1e-7 * std::max(1.0, inf_norm(y));
  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    if (p.relations[i] == Relation::LessEq) REQUIRE(y[i] <= s);
    if (p.relations[i] == Relation::GreaterEq) REQUIRE(y[i] >= -s);
  }
}

// Farkas certificate: sign pattern makes the rows imply (A^T y).x <= y.b,
// while the minimum of (A^T y).x over the box exceeds y.b.
void check_farkas(const LpProblem& p, const Vec& y) {
  REQUIRE(y.size() == p.num_rows());
  const double s = std::max(1.0, inf_norm(y));
  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    if (p.relations[i] == Relation::LessEq) REQUIRE(y[i] >= -1e-7 * s);
    if (p.relations[i] == Relation::GreaterEq) REQUIRE(y[i] <= 1e-7 * s);
  }
  Vec g(p.num_vars(), 0.0);
  for (std::size_t i = 0; i < p.num_rows(); ++i)
    for (std::size_t j = 0; j < p.num_vars(); ++j) g[j] += y[i] * p.rows[i][j];
  double minbox = 0.0;
  for (std::size_t j = 0; j < p.num_vars(); ++j) {
    if (g[j] > 1e-7 * s) {
      REQUIRE(std::isfinite(p.lower[j]));
      minbox += g[j] * p.lower[j];
    } else if (g[j] < -1e-7 * s) {
      REQUIRE(std::isfinite(p.upper[j]));
      minbox += g[j] * p.upper[j];
    }
  }
  REQUIRE(minbox - dot(y, p.rhs) > 1e-9 * s);
}

void check_ray(const LpProblem& p, const Vec& ray) {
  REQUIRE(ray.size() == p.num_vars());
  const double s = 1e-7 * std::max(1.0, inf_norm(ray));
  REQUIRE(inf_norm(ray) > 1e-9);
  REQUIRE(dot(p.objective, ray) < -1e-9);
  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    const double ar = dot(p.rows[i], ray);
    switch (p.relations[i]) {
      case Relation::LessEq: REQUIRE(ar <= s); break;
      case Relation::GreaterEq: REQUIRE(ar >= -s); break;
      case Relation::Equal: REQUIRE(std::abs(ar) <= s); break;
    }
  }
  for (std::size_t j = 0; j < p.num_vars(); ++j) {
    if (ray[j] < -s) REQUIRE(!std::isfinite(p.lower[j]));
    if (ray[j] > s) REQUIRE(!std::isfinite(p.upper[j]));
  }
}

void require_optimal_with_duality(const LpProblem& p, const LpOutcome& out,
                                  double tol = 1e-6) {
  REQUIRE(out.status == LpStatus::Optimal);
  check_primal(p, out.solution);
  check_dual_signs(p, out.dual);
  const double dv = dual_value(p, out.dual);
  REQUIRE(std::isfinite(dv));
  REQUIRE(std::abs(dv - out.objective) <= tol * std::max(1.0, std::abs(out.objective)));
}

LpProblem random_boxed(std::mt19937& rng) {
  std::uniform_int_distribution<int> nd(1, 6), md(0, 8), reld(0, 2);
  std::uniform_real_distribution<double> u01(0.0, 1.0), coef(-1.0, 1.0), pos(0.5, 3.0);
  const int n = nd(rng), m = md(rng);
  LpProblem p(static_cast<std::size_t>(n));
  Vec x0(n);
  for (int j = 0; j < n; ++j) {
    x0[j] = 4.0 * u01(rng) - 2.0;
    if (u01(rng) < 0.8) p.lower[j] = x0[j] - pos(rng);
    if (u01(rng) < 0.8) p.upper[j] = x0[j] + pos(rng);
    p.objective[j] = coef(rng);
  }
  for (int i = 0; i < m; ++i) {
    Vec a(n);
    for (int j = 0; j < n; ++j) a[j] = coef(rng);
    const double ax = dot(a, x0);
    const int r = reld(rng);
    if (r == 0) p.add_row(a, Relation::LessEq, ax + 2.0 * u01(rng));
    else if (r == 1) p.add_row(a, Relation::GreaterEq, ax - 2.0 * u01(rng));
    else p.add_row(a, Relation::Equal, ax);
  }
  return p;
}

}  // namespace

TEST_CASE("single variable against a bound", "[lp]") {
  LpProblem p(1);
  p.objective = {1.0};
  p.lower = {3.0};
  auto out = solve(p);
  REQUIRE(out.status == LpStatus::Optimal);
  REQUIRE(out.solution[0] == Catch::Approx(3.0));
  REQUIRE(out.objective == Catch::Approx(3.0));
}

TEST_CASE("single variable against a row", "[lp]") {
  LpProblem p(1);
  p.objective = {1.0};
  p.add_row({1.0}, Relation::GreaterEq, 3.0);
  auto out = solve(p);
  require_optimal_with_duality(p, out);
  REQUIRE(out.solution[0] == Catch::Approx(3.0));
  REQUIRE(out.dual[0] == Catch::Approx(1.0));
}

TEST_CASE("single variable between two rows", "[lp]") {
  LpProblem p(1);
  p.objective = {1.0};
  p.add_row({1.0}, Relation::GreaterEq, 3.0);
  p.add_row({1.0}, Relation::LessEq, 10.0);
  auto out = solve(p);
  require_optimal_with_duality(p, out);
  REQUIRE(out.solution[0] == Catch::Approx(3.0));
}

TEST_CASE("contradictory rows on one variable", "[lp]") {
  LpProblem p(1);
  p.add_row({1.0}, Relation::GreaterEq, 1.0);
  p.add_row({1.0}, Relation::LessEq, 0.0);
  auto out = solve(p);
  REQUIRE(out.status == LpStatus::Infeasible);
  check_farkas(p, out.dual);
  REQUIRE(dot(out.dual, p.rhs) < 0.0);
}

TEST_CASE("upper-bounded maximization and the open direction", "[lp]") {
  {
    LpProblem p(1);
    p.objective = {-1.0};
    p.upper = {5.0};
    p.lower = {-kInf};
    auto out = solve(p);
    REQUIRE(out.status == LpStatus::Optimal);
    REQUIRE(out.solution[0] == Catch::Approx(5.0));
    REQUIRE(out.objective == Catch::Approx(-5.0));
  }
  {
    LpProblem p(1);
    p.objective = {1.0};
    p.upper = {5.0};
    auto out = solve(p);
    REQUIRE(out.status == LpStatus::Unbounded);
    check_ray(p, out.ray);
    REQUIRE(out.ray[0] < 0.0);
  }
  {
    LpProblem p(2);
    p.objective = {1.0, -1.0};
    auto out = solve(p);
    REQUIRE(out.status == LpStatus::Unbounded);
    check_ray(p, out.ray);
  }
}

TEST_CASE("fixed variable via equal bounds", "[lp]") {
  LpProblem p(1);
  p.objective = {1.0};
  p.lower = {2.0};
  p.upper = {2.0};
  auto out = solve(p);
  REQUIRE(out.status == LpStatus::Optimal);
  REQUIRE(out.solution[0] == Catch::Approx(2.0));
}

TEST_CASE("box corner selected by a coupling row", "[lp]") {
  LpProblem p(2);
  p.objective = {-1.0, -2.0};
  p.lower = {0.0, 0.0};
  p.upper = {2.0, 2.0};
  p.add_row({1.0, 1.0}, Relation::LessEq, 3.0);
  auto out = solve(p);
  require_optimal_with_duality(p, out);
  REQUIRE(out.objective == Catch::Approx(-5.0));
  REQUIRE(out.solution[0] == Catch::Approx(1.0));
  REQUIRE(out.solution[1] == Catch::Approx(2.0));
  REQUIRE(out.dual[0] == Catch::Approx(-1.0));
}

TEST_CASE("unit simplex is feasible", "[lp]") {
  LpProblem p(2);
  p.lower = {0.0, 0.0};
  p.add_row({1.0, 1.0}, Relation::Equal, 1.0);
  auto out = feasibility(p);
  REQUIRE(out.status == LpStatus::Optimal);
  check_primal(p, out.solution);
}

TEST_CASE("inconsistent rows yield a Farkas certificate", "[lp]") {
  LpProblem p(2);
  p.add_row({1.0, 1.0}, Relation::Equal, 1.0);
  p.add_row({1.0, 0.0}, Relation::GreaterEq, 2.0);
  p.add_row({0.0, 1.0}, Relation::GreaterEq, 2.0);
  auto out = solve(p);
  REQUIRE(out.status == LpStatus::Infeasible);
  check_farkas(p, out.dual);

  // same rows with nonnegative variables
  LpProblem q = p;
  q.lower = {0.0, 0.0};
  auto out2 = solve(q);
  REQUIRE(out2.status == LpStatus::Infeasible);
  check_farkas(q, out2.dual);
}

TEST_CASE("redundant equalities keep duality intact", "[lp]") {
  LpProblem p(2);
  p.objective = {1.0, 0.0};
  p.lower = {0.0, 0.0};
  p.add_row({1.0, 1.0}, Relation::Equal, 1.0);
  p.add_row({2.0, 2.0}, Relation::Equal, 2.0);
  p.add_row({0.0, 0.0}, Relation::Equal, 0.0);
  auto out = solve(p);
  require_optimal_with_duality(p, out);
  REQUIRE(out.objective == Catch::Approx(0.0).margin(1e-9));
}

namespace {

// Quadratic monomial coordinates (1, y, x, y^2, xy, x^2) of a plane point.
Vec quad_lift(double x, double y) { return {1.0, y, x, y * y, x * y, x * x}; }

// Rows of the shared-moment system: two point triples must admit convex
// weights with equal monomial averages through the given lift.
LpProblem moment_system(const std::vector<std::pair<double, double>>& plus,
                        const std::vector<std::pair<double, double>>& minus,
                        bool quadratic) {
  const std::size_t np = plus.size(), nm = minus.size();
  LpProblem p(np + nm);
  for (auto& l : p.lower) l = 0.0;
  const std::size_t ncoord = quadratic ? 6 : 3;
  for (std::size_t c = 0; c < ncoord; ++c) {
    Vec row(np + nm, 0.0);
    for (std::size_t k = 0; k < np; ++k)
      row[k] = quad_lift(plus[k].first, plus[k].second)[c];
    for (std::size_t k = 0; k < nm; ++k)
      row[np + k] = -quad_lift(minus[k].first, minus[k].second)[c];
    p.add_row(row, Relation::Equal, 0.0);
  }
  Vec sump(np + nm, 0.0), summ(np + nm, 0.0);
  for (std::size_t k = 0; k < np; ++k) sump[k] = 1.0;
  for (std::size_t k = 0; k < nm; ++k) summ[np + k] = 1.0;
  p.add_row(sump, Relation::Equal, 1.0);
  p.add_row(summ, Relation::Equal, 1.0);
  return p;
}

}  // namespace

TEST_CASE("two triangles with distinct quadratic moments", "[lp]") {
  const std::vector<std::pair<double, double>> plus = {{0, 0}, {1, 4}, {2, 0}};
  const std::vector<std::pair<double, double>> minus = {{0, 2}, {1, -1}, {2, 2}};

  auto deg2 = moment_system(plus, minus, true);
  auto out2 = feasibility(deg2);
  REQUIRE(out2.status == LpStatus::Infeasible);
  check_farkas(deg2, out2.dual);

  // the raw hulls still overlap: degree-1 moments can be matched
  auto deg1 = moment_system(plus, minus, false);
  auto out1 = feasibility(deg1);
  REQUIRE(out1.status == LpStatus::Optimal);
  check_primal(deg1, out1.solution);
}

TEST_CASE("concentric equilateral triangles share quadratic moments", "[lp]") {
  const double r3 = std::sqrt(3.0);
  const std::vector<std::pair<double, double>> plus = {
      {0.0, 0.0}, {0.5, r3 / 2.0}, {1.0, 0.0}};
  const std::vector<std::pair<double, double>> minus = {
      {0.0, r3 / 3.0}, {0.5, -r3 / 6.0}, {1.0, r3 / 3.0}};
  auto deg2 = moment_system(plus, minus, true);
  auto out = feasibility(deg2);
  REQUIRE(out.status == LpStatus::Optimal);
  check_primal(deg2, out.solution, 1e-6);
}

TEST_CASE("random boxed problems meet strong duality", "[lp]") {
  std::mt19937 rng(20240811u);
  for (int t = 0; t < 60; ++t) {
    auto p = random_boxed(rng);
    LpOutcome out;
    REQUIRE_NOTHROW(out = solve(p));
    if (out.status == LpStatus::Optimal) {
      require_optimal_with_duality(p, out);
    } else {
      REQUIRE(out.status == LpStatus::Unbounded);
      check_ray(p, out.ray);
    }
  }
}

TEST_CASE("random padded systems are certified infeasible", "[lp]") {
  std::mt19937 rng(77001u);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int t = 0; t < 60; ++t) {
    auto p = random_boxed(rng);
    // close every box side so the cutting row below is guaranteed to separate
    for (std::size_t j = 0; j < p.num_vars(); ++j) {
      if (!std::isfinite(p.lower[j])) p.lower[j] = -4.0;
      if (!std::isfinite(p.upper[j])) p.upper[j] = 4.0;
    }
    Vec g(p.num_vars());
    for (auto& v : g) v = coef(rng);
    double minbox = 0.0;
    for (std::size_t j = 0; j < p.num_vars(); ++j)
      minbox += g[j] * (g[j] > 0 ? p.lower[j] : p.upper[j]);
    p.add_row(g, Relation::LessEq, minbox - 1.0);
    auto out = solve(p);
    REQUIRE(out.status == LpStatus::Infeasible);
    check_farkas(p, out.dual);
  }
}

TEST_CASE("identical inputs give identical runs", "[lp]") {
  std::mt19937 rng(5150u);
  for (int t = 0; t < 10; ++t) {
    auto p = random_boxed(rng);
    auto a = solve(p);
    auto b = solve(p);
    REQUIRE(a.status == b.status);
    REQUIRE(a.iterations == b.iterations);
    REQUIRE(a.solution == b.solution);
    REQUIRE(a.dual == b.dual);
    REQUIRE(a.ray == b.ray);
  }
}

TEST_CASE("shape errors are reported", "[lp]") {
  LpProblem p(2);
  REQUIRE_THROWS_AS(p.add_row({1.0}, Relation::Equal, 0.0), DimensionError);
  LpProblem q(1);
  q.lower = {1.0};
  q.upper = {0.0};
  REQUIRE_THROWS_AS(solve(q), PreconditionError);
  LpProblem r(2);
  r.lower = {0.0};
  REQUIRE_THROWS_AS(solve(r), DimensionError);
}
