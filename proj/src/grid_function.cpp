#include "matron/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "matron/error.hpp"

namespace matron {

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count < 2) throw DomainError("linspace needs at least 2 samples");
  std::vector<double> out(count);
  const double h = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + h * static_cast<double>(i);
  out.back() = hi;
  return out;
}

GridFunction::GridFunction(Axes axes, std::vector<double> values, bool convex)
    : axes_(std::move(axes)), values_(std::move(values)), convex_(convex) {
  if (axes_.empty()) throw DomainError("grid function needs at least one axis");
  std::size_t total = 1;
  for (const auto& ax : axes_) {
    if (ax.size() < 2) throw DomainError("each axis needs at least 2 samples");
    for (std::size_t i = 1; i < ax.size(); ++i) {
      if (!(ax[i] > ax[i - 1])) throw DomainError("axis samples must be strictly increasing");
    }
    total *= ax.size();
  }
  if (values_.size() != total) {
    throw ShapeError("expected " + std::to_string(total) + " values, got " +
                     std::to_string(values_.size()));
  }
  bool any_finite = false;
  for (double v : values_) {
    if (std::isnan(v) || (std::isinf(v) && v < 0)) {
      throw DomainError("grid values must be finite or +inf");
    }
    any_finite = any_finite || std::isfinite(v);
  }
  if (!any_finite) throw DomainError("grid function is +inf everywhere");

  strides_.assign(axes_.size(), 1);
  for (std::size_t i = axes_.size() - 1; i > 0; --i) strides_[i - 1] = strides_[i] * axes_[i].size();

  if (convex_) {
    const double defect = axis_convexity_defect();
    if (defect > 1e-9) {
      throw DomainError("function flagged convex fails the axis midpoint test (defect " +
                        std::to_string(defect) + ")");
    }
  }
}

GridFunction GridFunction::sample(Axes axes,
                                  const std::function<double(std::span<const double>)>& f,
                                  bool convex) {
  std::size_t total = 1;
  for (const auto& ax : axes) total *= ax.size();
  std::vector<double> values(total);
  std::vector<std::size_t> multi(axes.size(), 0);
  std::vector<double> p(axes.size());
  for (std::size_t node = 0; node < total; ++node) {
    for (std::size_t i = 0; i < axes.size(); ++i) p[i] = axes[i][multi[i]];
    values[node] = f(p);
    for (std::size_t i = axes.size(); i-- > 0;) {
      if (++multi[i] < axes[i].size()) break;
      multi[i] = 0;
    }
  }
  return GridFunction(std::move(axes), std::move(values), convex);
}

GridFunction GridFunction::indicator(Axes axes,
                                     const std::function<bool(std::span<const double>)>& inside) {
  return sample(
      std::move(axes), [&](std::span<const double> p) { return inside(p) ? 0.0 : kInf; }, true);
}

bool GridFunction::finite_at(std::size_t node) const { return std::isfinite(values_[node]); }

std::size_t GridFunction::index_of(std::span<const std::size_t> multi) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < axes_.size(); ++i) idx += multi[i] * strides_[i];
  return idx;
}

void GridFunction::multi_of(std::size_t node, std::span<std::size_t> out) const {
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    out[i] = node / strides_[i];
    node %= strides_[i];
  }
}

std::vector<double> GridFunction::point(std::size_t node) const {
  std::vector<double> p(axes_.size());
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    p[i] = axes_[i][node / strides_[i]];
    node %= strides_[i];
  }
  return p;
}

std::ptrdiff_t GridFunction::find_node(std::span<const double> p, double tol) const {
  if (p.size() != axes_.size()) throw ShapeError("point dimension vs grid");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    const auto& ax = axes_[i];
    auto it = std::lower_bound(ax.begin(), ax.end(), p[i] - tol);
    if (it == ax.end() || std::abs(*it - p[i]) > tol) return -1;
    idx += static_cast<std::size_t>(it - ax.begin()) * strides_[i];
  }
  return static_cast<std::ptrdiff_t>(idx);
}

bool GridFunction::uniform(double rel_tol) const {
  for (const auto& ax : axes_) {
    const double h = (ax.back() - ax.front()) / static_cast<double>(ax.size() - 1);
    for (std::size_t i = 1; i < ax.size(); ++i) {
      if (std::abs((ax[i] - ax[i - 1]) - h) > rel_tol * std::max(1.0, std::abs(h))) return false;
    }
  }
  return true;
}

double GridFunction::step(std::size_t i) const {
  const auto& ax = axes_[i];
  return (ax.back() - ax.front()) / static_cast<double>(ax.size() - 1);
}

double GridFunction::max_step(std::size_t i) const {
  const auto& ax = axes_[i];
  double h = 0.0;
  for (std::size_t k = 1; k < ax.size(); ++k) h = std::max(h, ax[k] - ax[k - 1]);
  return h;
}

double GridFunction::axis_convexity_defect() const {
  double worst = 0.0;
  std::vector<std::size_t> multi(axes_.size());
  for (std::size_t axis = 0; axis < axes_.size(); ++axis) {
    const auto& ax = axes_[axis];
    const std::size_t st = strides_[axis];
    for (std::size_t node = 0; node < values_.size(); ++node) {
      multi_of(node, multi);
      if (multi[axis] != 0) continue;
      // Walk one axis line: finite values must form one contiguous run.
      int state = 0;  // 0: before domain, 1: inside, 2: after
      for (std::size_t k = 0; k < ax.size(); ++k) {
        const bool fin = std::isfinite(values_[node + k * st]);
        if (fin && state == 2) return kInf;
        if (fin) state = 1;
        if (!fin && state == 1) state = 2;
      }
      for (std::size_t k = 1; k + 1 < ax.size(); ++k) {
        const double a = values_[node + (k - 1) * st];
        const double b = values_[node + k * st];
        const double c = values_[node + (k + 1) * st];
        if (!std::isfinite(a) || !std::isfinite(c)) continue;
        const double t = (ax[k] - ax[k - 1]) / (ax[k + 1] - ax[k - 1]);
        const double chord = (1.0 - t) * a + t * c;
        worst = std::max(worst, b - chord);
      }
    }
  }
  return worst;
}

bool GridFunction::same_axes(const GridFunction& other, double tol) const {
  if (axes_.size() != other.axes_.size()) return false;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (axes_[i].size() != other.axes_[i].size()) return false;
    for (std::size_t k = 0; k < axes_[i].size(); ++k) {
      if (std::abs(axes_[i][k] - other.axes_[i][k]) > tol) return false;
    }
  }
  return true;
}

}  // namespace matron
