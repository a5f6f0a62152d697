#include "matron/point_set.hpp"

#include <algorithm>
#include <cmath>

#include "matron/error.hpp"

namespace matron {

PointSet::PointSet(std::vector<Point> points, double tol) : points_(std::move(points)), tol_(tol) {
  if (!points_.empty()) dim_ = points_.front().size();
  for (const auto& p : points_) {
    if (p.size() != dim_) throw ShapeError("points of a PointSet must share a dimension");
    for (double c : p) {
      if (!std::isfinite(c)) throw DomainError("point coordinates must be finite");
    }
  }
  std::sort(points_.begin(), points_.end());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = i + 1; j < points_.size(); ++j) {
      if (points_[j][0] - points_[i][0] > tol_) break;
      bool same = true;
      for (std::size_t k = 0; k < dim_ && same; ++k) {
        same = std::abs(points_[j][k] - points_[i][k]) <= tol_;
      }
      if (same) throw DomainError("duplicate point in PointSet");
    }
  }
}

PointSet PointSet::lattice(const std::vector<std::vector<double>>& axes,
                           const std::function<bool(std::span<const double>)>& keep,
                           double tol) {
  std::vector<Point> pts;
  if (axes.empty()) return PointSet(std::move(pts), tol);
  std::vector<std::size_t> multi(axes.size(), 0);
  Point p(axes.size());
  while (true) {
    for (std::size_t i = 0; i < axes.size(); ++i) p[i] = axes[i][multi[i]];
    if (!keep || keep(p)) pts.push_back(p);
    std::size_t i = axes.size();
    while (i-- > 0) {
      if (++multi[i] < axes[i].size()) break;
      multi[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return PointSet(std::move(pts), tol);
}

bool PointSet::contains(std::span<const double> p) const {
  if (p.size() != dim_) throw ShapeError("membership query dimension");
  auto it = std::lower_bound(points_.begin(), points_.end(), p[0] - tol_,
                             [](const Point& a, double v) { return a[0] < v; });
  for (; it != points_.end() && (*it)[0] <= p[0] + tol_; ++it) {
    bool same = true;
    for (std::size_t k = 0; k < dim_ && same; ++k) same = std::abs((*it)[k] - p[k]) <= tol_;
    if (same) return true;
  }
  return false;
}

std::vector<double> PointSet::coordinate_steps() const {
  std::vector<double> steps(dim_, 0.0);
  for (std::size_t k = 0; k < dim_; ++k) {
    std::vector<double> coords;
    coords.reserve(points_.size());
    for (const auto& p : points_) coords.push_back(p[k]);
    std::sort(coords.begin(), coords.end());
    double best = 0.0;
    for (std::size_t i = 1; i < coords.size(); ++i) {
      const double gap = coords[i] - coords[i - 1];
      if (gap > tol_ && (best == 0.0 || gap < best)) best = gap;
    }
    steps[k] = best;
  }
  return steps;
}

}  // namespace matron
