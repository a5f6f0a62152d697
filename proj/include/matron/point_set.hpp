#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace matron {

// Finite set of points in R^d with tolerance-based membership.
class PointSet {
 public:
  using Point = std::vector<double>;

  explicit PointSet(std::vector<Point> points, double tol = 1e-9);

  // Every node of the lattice spanned by `axes` that satisfies `keep`.
  static PointSet lattice(const std::vector<std::vector<double>>& axes,
                          const std::function<bool(std::span<const double>)>& keep = {},
                          double tol = 1e-9);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  std::size_t dim() const { return dim_; }
  double tol() const { return tol_; }
  const std::vector<Point>& points() const { return points_; }
  const Point& operator[](std::size_t i) const { return points_[i]; }

  bool contains(std::span<const double> p) const;

  // Smallest positive gap between distinct coordinate values on each axis;
  // 0 for an axis on which all points agree.
  std::vector<double> coordinate_steps() const;

 private:
  std::vector<Point> points_;  // sorted lexicographically
  std::size_t dim_ = 0;
  double tol_ = 1e-9;
};

}  // namespace matron
