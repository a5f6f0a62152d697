#pragma once

#include <memory>
#include <string>

#include "matron/extended.hpp"

namespace matron {

// Convex welfare G over X x Y utility matrices, with compact conjugate domain
// containing 0. One instance describes one side of the market.
class WelfareFunction {
 public:
  virtual ~WelfareFunction() = default;

  virtual std::string kind() const = 0;
  virtual Eigen::Index rows() const = 0;
  virtual Eigen::Index cols() const = 0;

  // G(U); U entries in R u {-inf}.
  virtual double value(const ExtendedMatrix& U) const = 0;
  // G*(mu), +inf outside the domain.
  virtual double conjugate(const Matrix& mu) const = 0;
  // Entrywise bound n^G on dom G*.
  virtual Matrix demand_cap() const = 0;

  // A maximiser of <mu, alpha> - G*(mu) over mu_lo <= mu <= mu_bar.
  virtual Matrix constrained_demand(const Matrix& alpha, const Matrix& mu_bar,
                                    const Matrix& mu_lo) const = 0;
  Matrix constrained_demand(const Matrix& alpha, const Matrix& mu_bar) const {
    return constrained_demand(alpha, mu_bar, Matrix::Zero(mu_bar.rows(), mu_bar.cols()));
  }

  // Least element of the multiplier set of the mu <= mu_bar constraint.
  virtual ExtendedMatrix multipliers(const Matrix& alpha, const Matrix& mu_bar) const = 0;

  // Mass left unassigned on this side by mu (per row for the proposing side,
  // per column for the disposing side); zero when the instance has no
  // outside option.
  virtual Vector unmatched(const Matrix& mu) const = 0;

 protected:
  void check_shape(const Matrix& m, const char* what) const;
};

using WelfarePtr = std::shared_ptr<const WelfareFunction>;

// G(U) + G*(mu) - <mu, U>; +inf when mu is outside dom G*.
double welfare_fenchel_residual(const WelfareFunction& W, const ExtendedMatrix& U,
                                const Matrix& mu);

}  // namespace matron
