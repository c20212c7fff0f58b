#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "cheb/approx.hpp"
#include "oracles.hpp"

using namespace cheb;

namespace {

// four isolated points whose best plane sits one unit below the spike
Dataset spike_dataset() {
  return make_dataset(2, {{1, 1}, {-1, 1}, {0, -1}, {0, 0}}, {0, 0, 0, 2});
}

Vec random_distinct_grid(std::mt19937& rng, int count, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec xs;
  while (static_cast<int>(xs.size()) < count) {
    double x = u(rng);
    bool ok = true;
    for (double v : xs) ok &= std::abs(v - x) > 1e-3;
    if (ok) xs.push_back(x);
  }
  return xs;
}

}  // namespace

TEST_CASE("model evaluation follows the lifted order", "[approx]") {
  auto lin = BasisSpec::monomial(2, 1);
  REQUIRE(evaluate_model(lin, {1, 0, 0}, {3.7, -2.1}) == Catch::Approx(1.0));
  REQUIRE(evaluate_model(lin, {0, 0, 0}, {3.7, -2.1}) == 0.0);
  auto quad = BasisSpec::monomial(2, 2);
  REQUIRE(evaluate_model(quad, {0, 0, 0, 0, 0, 1}, {3, 7}) == Catch::Approx(9.0));
  REQUIRE_THROWS_AS(evaluate_model(lin, {1, 0}, {0, 0}), DimensionError);
}

TEST_CASE("uniform error is the max absolute deviation", "[approx]") {
  auto lin = BasisSpec::monomial(2, 1);
  auto data = spike_dataset();
  REQUIRE(uniform_error(lin, {1, 0, 0}, data) == Catch::Approx(1.0));
  REQUIRE(uniform_error(lin, {0, 0, 0}, data) == Catch::Approx(2.0));

  auto exact = make_dataset(1, {{0.0}, {1.0}, {2.0}}, {1.0, 3.0, 5.0});
  auto ulin = BasisSpec::monomial(1, 1);
  REQUIRE(uniform_error(ulin, {1.0, 2.0}, exact) == Catch::Approx(0.0).margin(1e-12));

  Dataset empty;
  empty.dimension = 2;
  REQUIRE_THROWS_AS(uniform_error(lin, {1, 0, 0}, empty), PreconditionError);
}

TEST_CASE("minimax fit of the spike dataset", "[approx]") {
  auto lin = BasisSpec::monomial(2, 1);
  auto fit = fit_minimax(lin, spike_dataset());
  REQUIRE(fit.error == Catch::Approx(1.0).margin(1e-9));
  REQUIRE(fit.coefficients[0] == Catch::Approx(1.0).margin(1e-8));
  REQUIRE(fit.coefficients[1] == Catch::Approx(0.0).margin(1e-8));
  REQUIRE(fit.coefficients[2] == Catch::Approx(0.0).margin(1e-8));
  REQUIRE(inf_norm(fit.deviations) == Catch::Approx(fit.error).margin(1e-9));
}

TEST_CASE("data inside the span fits exactly", "[approx]") {
  std::mt19937 rng(31337u);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  auto lin = BasisSpec::monomial(2, 1);
  Mat pts;
  Vec vals;
  for (int i = 0; i < 6; ++i) {
    Vec p = {u(rng), u(rng)};
    vals.push_back(3.0 + 2.0 * p[0]);
    pts.push_back(p);
  }
  auto fit = fit_minimax(lin, make_dataset(2, pts, vals));
  REQUIRE(fit.error <= 1e-9);
  REQUIRE(fit.coefficients[0] == Catch::Approx(3.0).margin(1e-7));
  REQUIRE(fit.coefficients[1] == Catch::Approx(0.0).margin(1e-7));
  REQUIRE(fit.coefficients[2] == Catch::Approx(2.0).margin(1e-7));
}

TEST_CASE("univariate fits match the levelled-reference oracle", "[approx]") {
  std::mt19937 rng(90210u);
  std::uniform_real_distribution<double> fv(-2.0, 2.0);
  auto b = BasisSpec::monomial(1, 1);
  for (int t = 0; t < 30; ++t) {
    Vec xs = random_distinct_grid(rng, 6, -2.0, 2.0);
    Vec fs(xs.size());
    for (auto& v : fs) v = fv(rng);
    Mat pts;
    for (double x : xs) pts.push_back({x});
    auto fit = fit_minimax(b, make_dataset(1, pts, fs));
    REQUIRE(fit.error == Catch::Approx(oracles::univariate_minimax(xs, fs, 1)).margin(1e-6));
  }
}

TEST_CASE("extremal sets split by deviation sign", "[approx]") {
  auto lin = BasisSpec::monomial(2, 1);
  auto data = spike_dataset();

  auto es = extract_extremal_sets(lin, {1, 0, 0}, data, 1e-9);
  REQUIRE(es.positive == std::vector<std::size_t>{3});
  REQUIRE(es.negative == std::vector<std::size_t>{0, 1, 2});

  auto one_sided = extract_extremal_sets(lin, {0.9, 0, 0}, data, 1e-9);
  REQUIRE(one_sided.positive == std::vector<std::size_t>{3});
  REQUIRE(one_sided.negative.empty());

  auto exact = make_dataset(1, {{0.0}, {1.0}}, {1.0, 2.0});
  auto ulin = BasisSpec::monomial(1, 1);
  REQUIRE_THROWS_AS(extract_extremal_sets(ulin, {1.0, 1.0}, exact, 1e-9),
                    PreconditionError);
  REQUIRE_THROWS_AS(extract_extremal_sets(lin, {1, 0, 0}, data, 0.0),
                    PreconditionError);
}

TEST_CASE("extremal partition covers every point once", "[approx]") {
  std::mt19937 rng(2468u);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  auto b = BasisSpec::monomial(2, 1);
  for (int t = 0; t < 20; ++t) {
    Mat pts;
    Vec vals;
    for (int i = 0; i < 8; ++i) {
      pts.push_back({u(rng), u(rng)});
      vals.push_back(u(rng));
    }
    Dataset data;
    try {
      data = make_dataset(2, pts, vals);
    } catch (const PreconditionError&) {
      continue;  // duplicate draw
    }
    Vec coef = {u(rng), u(rng), u(rng)};
    const double psi = uniform_error(b, coef, data);
    if (psi <= 1e-6) continue;
    auto es = extract_extremal_sets(b, coef, data, default_extremal_tolerance(psi));
    Vec dev = deviations(b, coef, data);
    std::vector<bool> seen(data.size(), false);
    for (auto i : es.positive) {
      REQUIRE_FALSE(seen[i]);
      seen[i] = true;
      REQUIRE(std::abs(std::abs(dev[i]) - psi) <= es.tolerance);
      REQUIRE(dev[i] > 0.0);
    }
    for (auto i : es.negative) {
      REQUIRE_FALSE(seen[i]);
      seen[i] = true;
      REQUIRE(std::abs(std::abs(dev[i]) - psi) <= es.tolerance);
      REQUIRE(dev[i] < 0.0);
    }
    for (std::size_t i = 0; i < data.size(); ++i)
      if (!seen[i]) REQUIRE(std::abs(dev[i]) < psi - es.tolerance);
  }
}

TEST_CASE("fitted error lower-bounds random perturbations", "[approx]") {
  std::mt19937 rng(1357u);
  std::uniform_real_distribution<double> u(-2.0, 2.0), d(-0.5, 0.5);
  auto b = BasisSpec::monomial(2, 1);
  Mat pts;
  Vec vals;
  for (int i = 0; i < 7; ++i) {
    pts.push_back({u(rng), u(rng)});
    vals.push_back(u(rng));
  }
  auto data = make_dataset(2, pts, vals);
  auto fit = fit_minimax(b, data);
  for (int t = 0; t < 1000; ++t) {
    Vec a = fit.coefficients;
    for (auto& v : a) v += d(rng);
    REQUIRE(uniform_error(b, a, data) >= fit.error - 1e-9);
  }
}

TEST_CASE("uniform error is convex in the coefficients", "[approx]") {
  std::mt19937 rng(9753u);
  std::uniform_real_distribution<double> u(-2.0, 2.0), l01(0.0, 1.0);
  auto b = BasisSpec::monomial(2, 2);
  Mat pts;
  Vec vals;
  for (int i = 0; i < 9; ++i) {
    pts.push_back({u(rng), u(rng)});
    vals.push_back(u(rng));
  }
  auto data = make_dataset(2, pts, vals);
  for (int t = 0; t < 100; ++t) {
    Vec a(b.size()), c(b.size());
    for (auto& v : a) v = u(rng);
    for (auto& v : c) v = u(rng);
    const double lam = l01(rng);
    Vec mix(b.size());
    for (std::size_t j = 0; j < b.size(); ++j)
      mix[j] = lam * a[j] + (1.0 - lam) * c[j];
    REQUIRE(uniform_error(b, mix, data) <=
            lam * uniform_error(b, a, data) +
                (1.0 - lam) * uniform_error(b, c, data) + 1e-9);
  }
}

TEST_CASE("dataset validation rejects malformed input", "[approx]") {
  REQUIRE_THROWS_AS(make_dataset(2, {{1, 2}, {1, 2}}, {0, 1}), PreconditionError);
  REQUIRE_THROWS_AS(make_dataset(2, {{1, 2}}, {0, 1}), DimensionError);
  REQUIRE_THROWS_AS(make_dataset(2, {{1, 2, 3}}, {0}), DimensionError);
  REQUIRE_THROWS_AS(make_dataset(0, {}, {}), PreconditionError);
}
