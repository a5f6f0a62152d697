#include <doctest.h>

#include <cmath>
#include <random>

#include "matron/error.hpp"
#include "matron/grid_welfare.hpp"
#include "matron/lcp.hpp"
#include "matron/logit_welfare.hpp"
#include "matron/orders.hpp"
#include "matron/quadratic_welfare.hpp"
#include "oracles/oracles.hpp"

using namespace matron;

namespace {

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Matrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

// Grid conjugate of the 1x1 logit welfare with n = 1.
GridWelfare logit_grid_1x1(std::size_t count) {
  auto conj = GridFunction::sample({linspace(0, 1, count)}, [](std::span<const double> m) {
    return logit_conjugate(Matrix::Constant(1, 1, m[0]), Vector::Ones(1));
  }, true);
  return GridWelfare(conj, Matrix::Ones(1, 1));
}

}  // namespace

TEST_CASE("logit value") {
  CHECK(logit_value(Matrix::Zero(1, 1), Vector::Ones(1)) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(logit_value(Matrix::Constant(2, 3, -kInf), vec({1, 2})) == 0.0);
  // 3 log(1 + e + e^2)
  CHECK(logit_value(mat({{1, 2}}), vec({3})) == doctest::Approx(7.2228179).epsilon(1e-8));
  const double direct = 3 * std::log(1 + std::exp(1.0) + std::exp(2.0));
  CHECK(std::abs(logit_value(mat({{1, 2}}), vec({3})) - direct) <= 1e-10);
  // log-sum-exp guard
  CHECK(std::isfinite(logit_value(mat({{800, 801}}), vec({1}))));
  CHECK(logit_value(mat({{800, 801}}), vec({1})) == doctest::Approx(801 + std::log1p(std::exp(-1.0))));
}

TEST_CASE("logit constrained demand") {
  const auto slack = logit_constrained_demand(Matrix::Zero(1, 1), Matrix::Constant(1, 1, 10), Vector::Ones(1));
  CHECK(slack.mu_x0(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(slack.mu(0, 0) == doctest::Approx(0.5).epsilon(1e-12));

  const auto bind = logit_constrained_demand(Matrix::Zero(1, 1), Matrix::Constant(1, 1, 0.25), Vector::Ones(1));
  CHECK(bind.mu_x0(0) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(bind.mu(0, 0) == 0.25);

  // Zero cap on the first column: the second column solves t + t e^{0.3} = 2.
  const auto zero = logit_constrained_demand(mat({{1.0, 0.3}}), mat({{0.0, 5.0}}), vec({2}));
  CHECK(zero.mu(0, 0) == 0.0);
  const double t = oracle::logit_row_root({1.0, 0.3}, {0.0, 5.0}, 2.0);
  CHECK(zero.mu_x0(0) == doctest::Approx(t).epsilon(1e-12));
  CHECK(zero.mu(0, 1) == doctest::Approx(t * std::exp(0.3)).epsilon(1e-12));

  const auto empty = logit_constrained_demand(mat({{1.0, 0.3}}), mat({{1.0, 1.0}}), vec({0}));
  CHECK(empty.mu.isZero(0.0));
}

TEST_CASE("logit demand matches the row bisection oracle") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 40; ++trial) {
    const Matrix alpha = random_matrix(rng, 3, 4, -2, 2);
    Matrix cap = random_matrix(rng, 3, 4, 0, 1);
    if (trial % 5 == 0) cap(1, 2) = 0.0;
    const Vector n = random_matrix(rng, 3, 1, 0.5, 2);
    const auto got = logit_constrained_demand(alpha, cap, n);
    for (Eigen::Index x = 0; x < 3; ++x) {
      std::vector<double> a(4), c(4);
      for (Eigen::Index y = 0; y < 4; ++y) {
        a[y] = alpha(x, y);
        c[y] = cap(x, y);
      }
      const double root = oracle::logit_row_root(a, c, n(x));
      CHECK(got.mu_x0(x) == doctest::Approx(root).epsilon(1e-11));
      const double row = got.mu_x0(x) + got.mu.row(x).sum();
      CHECK(std::abs(row - n(x)) <= 1e-12 * std::max(1.0, n(x)));
    }
  }
}

TEST_CASE("logit demand with a lower bound") {
  // Lower bound above the unconstrained demand on one entry.
  const Matrix alpha = mat({{0.0, 0.0}});
  const Matrix hi = mat({{1.0, 1.0}});
  const Matrix lo = mat({{0.6, 0.0}});
  const auto d = logit_constrained_demand(alpha, hi, vec({1}), lo);
  CHECK(d.mu(0, 0) == doctest::Approx(0.6));
  CHECK(d.mu(0, 1) == doctest::Approx(0.2));
  CHECK(d.mu_x0(0) == doctest::Approx(0.2));
}

TEST_CASE("logit demand is homogeneous in masses and caps") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix alpha = random_matrix(rng, 2, 3, -1, 1);
    const Matrix cap = random_matrix(rng, 2, 3, 0, 0.6);
    const Vector n = random_matrix(rng, 2, 1, 0.5, 2);
    const auto base = logit_constrained_demand(alpha, cap, n);
    for (double s : {0.1, 4.0}) {
      const auto scaled = logit_constrained_demand(alpha, s * cap, s * n);
      CHECK((scaled.mu - s * base.mu).cwiseAbs().maxCoeff() <= 1e-12 * s);
    }
  }
}

TEST_CASE("logit multipliers") {
  CHECK(logit_multipliers(Matrix::Zero(1, 1), Matrix::Constant(1, 1, 10), Vector::Ones(1))(0, 0) == 0.0);
  CHECK(logit_multipliers(Matrix::Zero(1, 1), Matrix::Constant(1, 1, 0.25), Vector::Ones(1))(0, 0) ==
        doctest::Approx(std::log(3.0)).epsilon(1e-12));
  const auto closed = logit_multipliers(mat({{0.0, 0.5}}), mat({{0.0, 1.0}}), vec({1}));
  CHECK(closed(0, 0) == kInf);
  CHECK(logit_multipliers(mat({{0.0}}), mat({{0.0}}), vec({0}))(0, 0) == 0.0);
}

TEST_CASE("KKT conditions of the logit multipliers") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 25; ++trial) {
    const Matrix alpha = random_matrix(rng, 3, 2, -1, 1);
    Matrix cap = random_matrix(rng, 3, 2, 0, 0.8);
    if (trial % 4 == 0) cap(0, 1) = 0.0;
    const Vector n = random_matrix(rng, 3, 1, 0.5, 2);
    const LogitWelfare G(n, 2, Side::rows);
    const Matrix mu = G.constrained_demand(alpha, cap);
    const ExtendedMatrix tau = G.multipliers(alpha, cap);
    CHECK(tau.minCoeff() >= 0.0);
    for (Eigen::Index i = 0; i < tau.size(); ++i) {
      CHECK(std::abs(ext::mul(tau.data()[i], cap.data()[i] - mu.data()[i])) <= 1e-8);
    }
    CHECK(welfare_fenchel_residual(G, ext::sub(alpha, tau), mu) <= 1e-9);
  }
}

TEST_CASE("primal and dual values of the capped problem agree") {
  // Left side: lattice max of mu alpha - G*(mu) over mu <= mu_bar.
  // Right side: mu_bar tau + G(alpha - tau) with tau from the closed form.
  const auto grid = logit_grid_1x1(2001);
  const Vector n = Vector::Ones(1);
  for (double a : {-1.0, 0.0, 0.7}) {
    for (double cap : {0.05, 0.3, 0.9}) {
      const Matrix alpha = Matrix::Constant(1, 1, a);
      const Matrix bar = Matrix::Constant(1, 1, cap);
      const Matrix mu = grid.constrained_demand(alpha, bar);
      const double primal = mu(0, 0) * a - grid.conjugate(mu);
      const ExtendedMatrix tau = logit_multipliers(alpha, bar, n);
      const double dual = cap * tau(0, 0) + logit_value(ext::sub(alpha, tau), n);
      CHECK(std::abs(primal - dual) <= 1e-4);
    }
  }
}

TEST_CASE("logit welfare is submodular") {
  const auto ax = linspace(-1, 1, 5);
  const auto f = GridFunction::sample({ax, ax, ax, ax}, [](std::span<const double> a) {
    return logit_value(mat({{a[0], a[1]}, {a[2], a[3]}}), vec({1.0, 2.0}));
  });
  CHECK(check_submodular(f).pass);
}

TEST_CASE("logit welfare on the column side") {
  const Vector m = vec({1.0, 2.0});
  const LogitWelfare H(m, 3, Side::cols);
  CHECK(H.rows() == 3);
  CHECK(H.cols() == 2);
  const Matrix gamma = Matrix::Zero(3, 2);
  const Matrix mu = H.constrained_demand(gamma, Matrix::Constant(3, 2, 10.0));
  // Each column splits its mass into four equal parts.
  CHECK(mu(0, 0) == doctest::Approx(0.25));
  CHECK(mu(2, 1) == doctest::Approx(0.5));
  CHECK(H.unmatched(mu)(1) == doctest::Approx(0.5));
  CHECK(H.demand_cap()(2, 1) == 2.0);
}

TEST_CASE("fenchel residual") {
  const LogitWelfare G(Vector::Ones(1), 1, Side::rows);
  CHECK(welfare_fenchel_residual(G, Matrix::Zero(1, 1), Matrix::Constant(1, 1, 0.5)) <= 1e-9);
  CHECK(welfare_fenchel_residual(G, Matrix::Zero(1, 1), Matrix::Constant(1, 1, 1.5)) == kInf);
  CHECK(welfare_fenchel_residual(G, Matrix::Zero(1, 1), Matrix::Constant(1, 1, 0.3)) > 1e-3);
  const Matrix alpha = Matrix::Constant(1, 1, 0.4);
  CHECK(welfare_fenchel_residual(G, alpha, G.constrained_demand(alpha, Matrix::Constant(1, 1, 5))) <= 1e-12);
  // Independent check of the entropy expression through the grid oracle.
  const auto grid = logit_grid_1x1(401);
  CHECK(welfare_fenchel_residual(grid, Matrix::Zero(1, 1), Matrix::Constant(1, 1, 0.5)) <= 1e-12);
}

TEST_CASE("lcp examples") {
  const auto feasible = lcp_solve({mat({{2, -1}, {-1, 2}}), vec({0.5, 0})});
  CHECK(feasible.tau.isZero(0.0));
  CHECK(feasible.r == vec({0.5, 0}));

  const auto sol = lcp_solve({Matrix::Identity(2, 2), vec({-1, 2})});
  CHECK((sol.tau - vec({1, 0})).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((sol.r - vec({0, 2})).cwiseAbs().maxCoeff() <= 1e-12);

  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix S = oracle::random_stieltjes(rng, 3);
    Vector rho(3);
    for (auto& v : rho) v = u(rng);
    const auto want = oracle::lcp_by_active_sets(S, rho);
    REQUIRE(want);
    const auto got = lcp_solve({S, rho});
    CHECK((got.tau - want->tau).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(lcp_residual({S, rho}, got.r, got.tau) <= 1e-10);
  }
}

TEST_CASE("lcp without a solution hits the iteration limit") {
  LCPOptions opts;
  opts.max_sweeps = 200;
  CHECK_THROWS_AS(lcp_solve({mat({{1, -3}, {-3, 1}}), vec({-1, -1})}, opts), IterationLimitError);
}

TEST_CASE("quadratic residual") {
  const auto sep = quadratic_residual(vec({1, 2}), vec({2, 1}), Matrix::Identity(2, 2));
  CHECK((sep.r - vec({1, 0})).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((sep.tau - vec({0, 1})).cwiseAbs().maxCoeff() <= 1e-12);

  const auto full = quadratic_residual(vec({3, 2}), vec({1, 0.5}), Matrix::Identity(2, 2));
  CHECK(full.r.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((full.tau - vec({2, 1.5})).cwiseAbs().maxCoeff() <= 1e-12);

  const Matrix A = mat({{2, 1}, {1, 2}});
  const auto got = quadratic_residual(vec({1, 1}), vec({0.1, 10}), A);
  const Matrix S = A.inverse();
  const auto want = oracle::lcp_by_active_sets(S, vec({0.1, 10}) - S * vec({1, 1}));
  REQUIRE(want);
  CHECK((got.r - want->r).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((got.tau - want->tau).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(got.tau(0) == doctest::Approx(0.35));
  CHECK(got.r(1) == doctest::Approx(9.55));
  CHECK(std::abs(got.r.dot(got.tau)) <= 1e-10);

  CHECK_THROWS_AS(quadratic_residual(vec({1, 1}), vec({1, 1}), mat({{1, 1}, {1, 1}})), ConditioningError);
}

TEST_CASE("raising caps raises unused capacity for Stieltjes inverses") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix S = oracle::random_stieltjes(rng, 3);
    const Matrix A = S.inverse();
    Vector p(3), q(3);
    for (Eigen::Index i = 0; i < 3; ++i) {
      p(i) = 2 * u(rng);
      q(i) = u(rng);
    }
    const auto base = quadratic_residual(p, q, A);
    for (int k = 0; k < 5; ++k) {
      Vector raise(3);
      for (auto& v : raise) v = u(rng) < 0.5 ? 0.0 : 0.5 * u(rng);
      const auto up = quadratic_residual(p, q + raise, A);
      CHECK((base.r - up.r).maxCoeff() <= 1e-9);
    }
  }
}

TEST_CASE("quadratic welfare against the box QP oracle") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix S = oracle::random_stieltjes(rng, 4);
    const Matrix cap = random_matrix(rng, 2, 2, 0.5, 1.5);
    const QuadraticWelfare G(S, cap);
    const Matrix alpha = random_matrix(rng, 2, 2, -0.5, 2);
    const Matrix bar = random_matrix(rng, 2, 2, 0, 1.2);
    const Matrix lo = trial % 3 == 0 ? Matrix(0.3 * bar.cwiseMin(cap)) : Matrix(Matrix::Zero(2, 2));
    const Matrix mu = G.constrained_demand(alpha, bar, lo);
    const Matrix hi = bar.cwiseMin(cap);
    const Vector want = oracle::box_qp_by_patterns(S, alpha.reshaped<Eigen::RowMajor>(),
                                                   lo.reshaped<Eigen::RowMajor>(), hi.reshaped<Eigen::RowMajor>());
    CHECK((mu.reshaped<Eigen::RowMajor>() - want).cwiseAbs().maxCoeff() <= 1e-9);
    if (trial % 3 != 0) {
      const ExtendedMatrix tau = G.multipliers(alpha, bar);
      CHECK(tau.minCoeff() >= 0.0);
      CHECK(welfare_fenchel_residual(G, ext::sub(alpha, tau), mu) <= 1e-9);
    }
  }
}

TEST_CASE("grid welfare") {
  SUBCASE("degenerate conjugate") {
    const auto conj = GridFunction::indicator({linspace(0, 1, 3)}, [](std::span<const double> m) { return m[0] == 0.0; });
    const auto G = grid_welfare_from_conjugate(conj, Matrix::Ones(1, 1));
    CHECK(G->value(Matrix::Constant(1, 1, 3.0)) == 0.0);
    CHECK(G->constrained_demand(Matrix::Constant(1, 1, 3.0), Matrix::Ones(1, 1))(0, 0) == 0.0);
  }
  SUBCASE("logit conjugate on a 400-point lattice") {
    const auto G = logit_grid_1x1(400);
    for (double a : {-2.0, -0.5, 0.0, 1.0, 2.5}) {
      const Matrix U = Matrix::Constant(1, 1, a);
      CHECK(std::abs(G.value(U) - logit_value(U, Vector::Ones(1))) <= 2e-3);
    }
  }
  SUBCASE("slack cap gives the unconstrained argmax") {
    const auto G = logit_grid_1x1(101);
    const Matrix alpha = Matrix::Constant(1, 1, 0.3);
    const Matrix mu = G.constrained_demand(alpha, Matrix::Constant(1, 1, 5.0));
    double best = -kInf, arg = 0;
    for (double m : linspace(0, 1, 101)) {
      const double v = 0.3 * m - logit_conjugate(Matrix::Constant(1, 1, m), Vector::Ones(1));
      if (v > best) {
        best = v;
        arg = m;
      }
    }
    CHECK(mu(0, 0) == arg);
    CHECK(G.multipliers(alpha, Matrix::Constant(1, 1, 5.0))(0, 0) == 0.0);
  }
  SUBCASE("binding cap has a positive multiplier") {
    const auto G = logit_grid_1x1(101);
    const Matrix alpha = Matrix::Constant(1, 1, 0.0);
    const Matrix bar = Matrix::Constant(1, 1, 0.25);
    const Matrix mu = G.constrained_demand(alpha, bar);
    CHECK(mu(0, 0) == doctest::Approx(0.25));
    const ExtendedMatrix tau = G.multipliers(alpha, bar);
    CHECK(tau(0, 0) == doctest::Approx(std::log(3.0)).epsilon(0.02));
    CHECK(welfare_fenchel_residual(G, ext::sub(alpha, tau), mu) <= 1e-9);
  }
  SUBCASE("contract violations") {
    const auto off = GridFunction::indicator({linspace(0, 1, 3)}, [](std::span<const double> m) { return m[0] > 0.1; });
    CHECK_THROWS_AS(GridWelfare(off, Matrix::Ones(1, 1)), ContractError);
    const auto wide = GridFunction::sample({linspace(0, 2, 3)}, [](std::span<const double>) { return 0.0; });
    CHECK_THROWS_AS(GridWelfare(wide, Matrix::Ones(1, 1)), ContractError);
    const auto big = GridFunction::sample({linspace(0, 1, 30), linspace(0, 1, 30)}, [](std::span<const double>) { return 0.0; });
    CHECK_THROWS_AS(GridWelfare(big, Matrix::Ones(1, 2), Side::rows, 100), SizeError);
  }
}
