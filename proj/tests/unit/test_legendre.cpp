#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "matron/error.hpp"
#include "matron/legendre.hpp"

using namespace matron;

namespace {

GridFunction one_d(double lo, double hi, std::size_t count, double (*f)(double), bool convex = true) {
  return GridFunction::sample({linspace(lo, hi, count)},
                              [f](std::span<const double> q) { return f(q[0]); }, convex);
}

// Direct sup over finite nodes, written without any library helper.
double naive_conjugate(const GridFunction& f, const std::vector<double>& p) {
  double best = -kInf;
  for (std::size_t node = 0; node < f.size(); ++node) {
    if (!f.finite_at(node)) continue;
    const auto s = f.point(node);
    double ip = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) ip += p[i] * s[i];
    best = std::max(best, ip - f.value(node));
  }
  return best;
}

}  // namespace

TEST_CASE("quadratic is self-conjugate") {
  const auto f = one_d(-3, 3, 601, [](double q) { return 0.5 * q * q; });
  const auto res = legendre_transform(f, {linspace(-2, 2, 81)});
  double err = 0.0;
  for (std::size_t k = 0; k < res.conjugate.size(); ++k) {
    const double p = res.conjugate.point(k)[0];
    err = std::max(err, std::abs(res.conjugate.value(k) - 0.5 * p * p));
  }
  CHECK(err <= 1e-3);
  CHECK(res.grid_error > 0.0);
  CHECK(err <= res.grid_error + 1e-12);
  CHECK_FALSE(res.boundary_saturation);
}

TEST_CASE("interval indicator gives the support function") {
  const auto f = GridFunction::indicator({linspace(-1, 2, 13)},
                                         [](std::span<const double> q) { return q[0] >= -1e-12 && q[0] <= 1 + 1e-12; });
  const auto res = legendre_transform(f, {linspace(-3, 3, 25)});
  for (std::size_t k = 0; k < res.conjugate.size(); ++k) {
    const double p = res.conjugate.point(k)[0];
    CHECK(res.conjugate.value(k) == std::max(p, 0.0));
  }
}

TEST_CASE("absolute value") {
  const auto f = one_d(-2, 2, 41, [](double q) { return std::abs(q); });
  const auto res = legendre_transform(f, {linspace(-3, 3, 31)});
  for (std::size_t k = 0; k < res.conjugate.size(); ++k) {
    const double p = res.conjugate.point(k)[0];
    const double want = std::abs(p) <= 1 ? 0.0 : 2.0 * (std::abs(p) - 1.0);
    CHECK(res.conjugate.value(k) == doctest::Approx(want).epsilon(1e-12));
  }
  CHECK(res.boundary_saturation);
}

TEST_CASE("conjugate matches the naive supremum in 2-D") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> vals;
  const GridFunction::Axes axes{linspace(-1, 1, 7), linspace(0, 2, 5)};
  for (std::size_t i = 0; i < 35; ++i) vals.push_back(u(rng) > 0.8 ? kInf : u(rng));
  vals[0] = 0.0;
  const GridFunction f(axes, vals);
  const GridFunction::Axes dual{linspace(-2, 2, 9), linspace(-1, 3, 6)};
  const auto res = legendre_transform(f, dual);
  for (std::size_t k = 0; k < res.conjugate.size(); ++k) {
    CHECK(res.conjugate.value(k) == naive_conjugate(f, res.conjugate.point(k)));
  }
}

TEST_CASE("biconjugate is a minorant and exact on convex samples") {
  SUBCASE("nonconvex samples") {
    const auto f = one_d(-2, 2, 21, [](double q) { return std::cos(3 * q) + q * q; }, false);
    const auto dual = legendre_transform(f, {linspace(-12, 12, 481)});
    const auto bi = legendre_transform(dual.conjugate, f.axes());
    for (std::size_t k = 0; k < f.size(); ++k) CHECK(bi.conjugate.value(k) <= f.value(k) + 1e-12);
  }
  SUBCASE("convex samples") {
    const auto f = one_d(-2, 2, 21, [](double q) { return q * q + 0.3 * q; });
    // Dual axis encloses every slope of f and contains every chord slope.
    const auto dual = legendre_transform(f, {linspace(-5, 5, 501)});
    const auto bi = legendre_transform(dual.conjugate, f.axes());
    for (std::size_t k = 0; k < f.size(); ++k) {
      CHECK(bi.conjugate.value(k) == doctest::Approx(f.value(k)).epsilon(1e-9));
    }
  }
}

TEST_CASE("subdifferential") {
  SUBCASE("smooth quadratic") {
    const auto f = one_d(-3, 3, 61, [](double q) { return 0.5 * q * q; });
    const std::vector<double> s{1.0};
    const auto sub = subdifferential(f, s, {linspace(-2, 2, 41)});
    REQUIRE(sub.size() >= 1);
    for (const auto& p : sub.points()) CHECK(p[0] == doctest::Approx(1.0).epsilon(0.06));
  }
  SUBCASE("kink of the absolute value") {
    const auto f = one_d(-2, 2, 41, [](double q) { return std::abs(q); });
    const std::vector<double> s{0.0};
    const auto dual = linspace(-2, 2, 41);
    const auto sub = subdifferential(f, s, {dual});
    std::size_t want = 0;
    for (double p : dual) want += std::abs(p) <= 1 + 1e-12;
    CHECK(sub.size() == want);
    for (const auto& p : sub.points()) CHECK(std::abs(p[0]) <= 1 + 1e-12);
  }
  SUBCASE("normal cone of an interval end") {
    const auto f = GridFunction::indicator({linspace(0, 1, 5)}, [](std::span<const double>) { return true; });
    const std::vector<double> s{1.0};
    const auto dual = linspace(-2, 2, 17);
    const auto sub = subdifferential(f, s, {dual});
    std::size_t want = 0;
    for (double p : dual) want += p >= -1e-12;
    CHECK(sub.size() == want);
  }
  SUBCASE("outside the domain") {
    const auto f = GridFunction::indicator({linspace(-1, 1, 5)},
                                           [](std::span<const double> q) { return q[0] <= 0; });
    const std::vector<double> s{1.0};
    CHECK_THROWS_AS(subdifferential(f, s, {linspace(-1, 1, 3)}), DomainError);
  }
}

TEST_CASE("grid construction errors") {
  CHECK_THROWS_AS(GridFunction({{0.0}}, {1.0}), DomainError);
  CHECK_THROWS_AS(GridFunction({{0.0, 1.0}}, {kInf, kInf}), DomainError);
  CHECK_THROWS_AS(GridFunction({{0.0, 1.0}}, {1.0}), ShapeError);
  CHECK_THROWS_AS(GridFunction({{0.0, 1.0, 2.0}}, {0.0, 1.0, 0.0}, true), DomainError);
}
