#pragma once

#include "matron/welfare.hpp"

namespace matron {

// Row x of the logit side: G(U) = sum_x n_x log(exp(a_x) + sum_y exp U_xy),
// with reservation utilities a_x (0 by default).

double logit_value(const ExtendedMatrix& alpha, const Vector& n, const Vector& reservation = {});

// sum_x [sum_y mu_xy log(mu_xy / n_x) + mu_x0 log(mu_x0 / n_x) - a_x mu_x0]
// with mu_x0 = n_x - sum_y mu_xy; +inf if mu < 0 or mu_x0 < 0.
double logit_conjugate(const Matrix& mu, const Vector& n, const Vector& reservation = {});

struct LogitDemand {
  Matrix mu;
  Vector mu_x0;  // root of the row equation
};

// mu_xy = clamp(mu_x0 exp(alpha_xy - a_x), mu_lo_xy, mu_bar_xy) with mu_x0
// solving mu_x0 + sum_y mu_xy = n_x. Bisection on [0, n_x], then an exact
// solve once the clamping pattern settles. Empty mu_lo means 0.
LogitDemand logit_constrained_demand(const Matrix& alpha, const Matrix& mu_bar, const Vector& n,
                                     const Matrix& mu_lo = {}, const Vector& reservation = {});

// tau_xy = max(0, alpha_xy - a_x + log(mu_x0 / mu_bar_xy)); log(c / 0) = +inf
// for c > 0. Rows with n_x = 0 give 0.
ExtendedMatrix logit_multipliers(const Matrix& alpha, const Matrix& mu_bar, const Vector& n,
                                 const Vector& reservation = {});

enum class Side { rows, cols };

// Logit welfare of one market side. Side::rows: masses index rows (the X
// side, G); Side::cols: masses index columns (the Y side, H), computed on
// the transpose.
class LogitWelfare final : public WelfareFunction {
 public:
  LogitWelfare(Vector masses, Eigen::Index other, Side side, Vector reservation = {});

  std::string kind() const override { return "logit"; }
  Eigen::Index rows() const override;
  Eigen::Index cols() const override;
  double value(const ExtendedMatrix& U) const override;
  double conjugate(const Matrix& mu) const override;
  Matrix demand_cap() const override;
  Matrix constrained_demand(const Matrix& alpha, const Matrix& mu_bar,
                            const Matrix& mu_lo) const override;
  using WelfareFunction::constrained_demand;
  ExtendedMatrix multipliers(const Matrix& alpha, const Matrix& mu_bar) const override;
  Vector unmatched(const Matrix& mu) const override;

  const Vector& masses() const { return masses_; }
  const Vector& reservation() const { return reservation_; }
  Side side() const { return side_; }

 private:
  Matrix orient(const Matrix& m) const;

  Vector masses_;
  Eigen::Index other_;
  Side side_;
  Vector reservation_;
};

}  // namespace matron
