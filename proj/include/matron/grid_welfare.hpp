#pragma once

#include <memory>

#include "matron/grid_function.hpp"
#include "matron/logit_welfare.hpp"
#include "matron/welfare.hpp"

namespace matron {

// Welfare whose conjugate is a GridFunction over vec(mu) (row-major over
// X x Y). Everything is exhaustive lattice search; meant as an oracle.
class GridWelfare final : public WelfareFunction {
 public:
  GridWelfare(GridFunction conjugate, Matrix cap, Side side = Side::rows,
              std::size_t node_budget = 10'000'000);

  std::string kind() const override { return "grid"; }
  Eigen::Index rows() const override { return cap_.rows(); }
  Eigen::Index cols() const override { return cap_.cols(); }
  double value(const ExtendedMatrix& U) const override;
  // Sampled value at a lattice node, +inf off the lattice.
  double conjugate(const Matrix& mu) const override;
  Matrix demand_cap() const override { return cap_; }
  // Lattice argmax within the bounds; ties go to the lowest node index.
  Matrix constrained_demand(const Matrix& alpha, const Matrix& mu_bar,
                            const Matrix& mu_lo) const override;
  using WelfareFunction::constrained_demand;
  // Dual prices of the cap rows in the LP relaxation over lattice nodes,
  // with the caps nudged up by a tiny amount so the smallest price vector
  // is selected.
  ExtendedMatrix multipliers(const Matrix& alpha, const Matrix& mu_bar) const override;
  Vector unmatched(const Matrix& mu) const override;

  const GridFunction& grid() const { return grid_; }

 private:
  GridFunction grid_;
  Matrix cap_;
  Side side_;
  std::vector<double> nodes_;   // coordinates of finite nodes, flattened
  std::vector<double> costs_;   // conjugate values at those nodes
  std::size_t zero_ = 0;        // position of the origin among finite nodes
};

std::shared_ptr<GridWelfare> grid_welfare_from_conjugate(GridFunction conjugate, Matrix cap,
                                                         Side side = Side::rows);

}  // namespace matron
