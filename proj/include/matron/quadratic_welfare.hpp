#pragma once

#include "matron/logit_welfare.hpp"
#include "matron/welfare.hpp"

namespace matron {

// G*(mu) = 1/2 vec(mu)' A vec(mu) on 0 <= mu <= cap, +inf elsewhere; vec is
// row-major over X x Y. G and the constrained demand are box QPs.
class QuadraticWelfare final : public WelfareFunction {
 public:
  QuadraticWelfare(Matrix A, Matrix cap, Side side = Side::rows);

  std::string kind() const override { return "quadratic"; }
  Eigen::Index rows() const override { return cap_.rows(); }
  Eigen::Index cols() const override { return cap_.cols(); }
  double value(const ExtendedMatrix& U) const override;
  double conjugate(const Matrix& mu) const override;
  Matrix demand_cap() const override { return cap_; }
  Matrix constrained_demand(const Matrix& alpha, const Matrix& mu_bar,
                            const Matrix& mu_lo) const override;
  using WelfareFunction::constrained_demand;
  // tau = (alpha - A mu)^+ on entries pinned at mu_bar < cap, 0 elsewhere.
  ExtendedMatrix multipliers(const Matrix& alpha, const Matrix& mu_bar) const override;
  Vector unmatched(const Matrix& mu) const override;

  const Matrix& A() const { return A_; }

 private:
  Vector vec(const Matrix& m) const;
  Matrix unvec(const Vector& v) const;

  Matrix A_;
  Matrix cap_;
  Side side_;
};

}  // namespace matron
