#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "matron/extended.hpp"

namespace matron {

std::vector<double> linspace(double lo, double hi, std::size_t count);

// A function sampled on a rectangular lattice. Values are finite or +inf
// (outside the effective domain). Node storage is row-major: the last axis
// varies fastest.
class GridFunction {
 public:
  using Axes = std::vector<std::vector<double>>;

  GridFunction(Axes axes, std::vector<double> values, bool convex = false);

  static GridFunction sample(Axes axes, const std::function<double(std::span<const double>)>& f,
                             bool convex = false);

  // 0 on nodes where `inside` holds, +inf elsewhere.
  static GridFunction indicator(Axes axes,
                                const std::function<bool(std::span<const double>)>& inside);

  std::size_t dims() const { return axes_.size(); }
  std::size_t size() const { return values_.size(); }
  const Axes& axes() const { return axes_; }
  const std::vector<double>& axis(std::size_t i) const { return axes_[i]; }
  std::size_t extent(std::size_t i) const { return axes_[i].size(); }
  const std::vector<double>& values() const { return values_; }
  bool convex() const { return convex_; }

  double value(std::size_t node) const { return values_[node]; }
  double value(std::span<const std::size_t> multi) const { return values_[index_of(multi)]; }
  bool finite_at(std::size_t node) const;

  std::size_t stride(std::size_t axis) const { return strides_[axis]; }
  std::size_t index_of(std::span<const std::size_t> multi) const;
  void multi_of(std::size_t node, std::span<std::size_t> out) const;
  std::vector<double> point(std::size_t node) const;

  // Node whose coordinates match `p` within `tol` on every axis, or -1.
  std::ptrdiff_t find_node(std::span<const double> p, double tol = 1e-9) const;

  // Evenly spaced axes (relative tolerance on the spacing).
  bool uniform(double rel_tol = 1e-9) const;
  // Spacing of axis i, assuming uniform axes.
  double step(std::size_t i) const;
  double max_step(std::size_t i) const;

  // Worst violation of the axis-aligned three-point convexity inequality,
  // together with a check that finite values form axis-wise intervals.
  // Returns +inf when the finite region has a hole along some axis.
  double axis_convexity_defect() const;

  bool same_axes(const GridFunction& other, double tol = 1e-12) const;

 private:
  Axes axes_;
  std::vector<double> values_;
  std::vector<std::size_t> strides_;
  bool convex_ = false;
};

}  // namespace matron
