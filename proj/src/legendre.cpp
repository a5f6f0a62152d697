#include "matron/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "matron/error.hpp"

namespace matron {

namespace {

// Central second difference along `axis` (non-uniform spacing allowed).
double second_difference(const GridFunction& f, std::size_t node, std::size_t axis,
                         std::size_t k) {
  const auto& ax = f.axis(axis);
  const std::size_t st = f.stride(axis);
  const double fm = f.value(node - st);
  const double f0 = f.value(node);
  const double fp = f.value(node + st);
  const double hm = ax[k] - ax[k - 1];
  const double hp = ax[k + 1] - ax[k];
  return 2.0 * ((fp - f0) / hp - (f0 - fm) / hm) / (hp + hm);
}

}  // namespace

double sampling_error_bound(const GridFunction& f) {
  const std::size_t d = f.dims();
  std::vector<std::size_t> multi(d);
  double lip = 0.0;
  for (std::size_t node = 0; node < f.size(); ++node) {
    if (!f.finite_at(node)) continue;
    f.multi_of(node, multi);
    bool interior = true;
    for (std::size_t i = 0; i < d && interior; ++i) {
      interior = multi[i] > 0 && multi[i] + 1 < f.extent(i);
    }
    if (!interior) continue;
    // Full 3^d-style stencil must be finite for the bound to be meaningful.
    bool ok = true;
    for (std::size_t i = 0; i < d && ok; ++i) {
      ok = f.finite_at(node - f.stride(i)) && f.finite_at(node + f.stride(i));
      for (std::size_t j = i + 1; j < d && ok; ++j) {
        const std::size_t si = f.stride(i);
        const std::size_t sj = f.stride(j);
        ok = f.finite_at(node + si + sj) && f.finite_at(node + si - sj) &&
             f.finite_at(node - si + sj) && f.finite_at(node - si - sj);
      }
    }
    if (!ok) continue;
    for (std::size_t i = 0; i < d; ++i) {
      double row = second_difference(f, node, i, multi[i]);
      for (std::size_t j = 0; j < d; ++j) {
        if (j == i) continue;
        const std::size_t si = f.stride(i);
        const std::size_t sj = f.stride(j);
        const auto& ai = f.axis(i);
        const auto& aj = f.axis(j);
        const double wi = ai[multi[i] + 1] - ai[multi[i] - 1];
        const double wj = aj[multi[j] + 1] - aj[multi[j] - 1];
        const double mixed = (f.value(node + si + sj) - f.value(node + si - sj) -
                              f.value(node - si + sj) + f.value(node - si - sj)) /
                             (wi * wj);
        row += std::abs(mixed);
      }
      lip = std::max(lip, row);
    }
  }
  double h2 = 0.0;
  for (std::size_t i = 0; i < d; ++i) h2 += f.max_step(i) * f.max_step(i);
  return lip * h2 / 8.0;
}

LegendreResult legendre_transform(const GridFunction& f, const GridFunction::Axes& dual_axes) {
  if (dual_axes.size() != f.dims()) throw ShapeError("dual axes dimension vs primal grid");
  const std::size_t d = f.dims();

  // Finite primal nodes, flattened as [x_0..x_{d-1}] per node.
  std::vector<double> pts;
  std::vector<double> vals;
  std::vector<char> on_boundary;
  std::vector<std::size_t> multi(d);
  for (std::size_t node = 0; node < f.size(); ++node) {
    if (!f.finite_at(node)) continue;
    f.multi_of(node, multi);
    bool boundary = false;
    for (std::size_t i = 0; i < d; ++i) {
      pts.push_back(f.axis(i)[multi[i]]);
      boundary = boundary || multi[i] == 0 || multi[i] + 1 == f.extent(i);
    }
    vals.push_back(f.value(node));
    on_boundary.push_back(boundary ? 1 : 0);
  }
  if (vals.empty()) throw DomainError("empty effective domain");

  std::size_t saturated = 0;
  auto conj = GridFunction::sample(dual_axes, [&](std::span<const double> p) {
    double best = -kInf;
    std::size_t arg = 0;
    for (std::size_t k = 0; k < vals.size(); ++k) {
      const double* s = &pts[k * d];
      double ip = 0.0;
      for (std::size_t i = 0; i < d; ++i) ip += p[i] * s[i];
      const double v = ip - vals[k];
      if (v > best) {
        best = v;
        arg = k;
      }
    }
    if (on_boundary[arg]) ++saturated;
    return best;
  });

  LegendreResult out{std::move(conj), sampling_error_bound(f), saturated, saturated > 0};
  return out;
}

PointSet subdifferential(const GridFunction& f, std::span<const double> s,
                         const GridFunction::Axes& dual_axes, double tol) {
  const auto node = f.find_node(s);
  if (node < 0) throw DomainError("subdifferential point is not a lattice node");
  const double fs = f.value(static_cast<std::size_t>(node));
  if (!std::isfinite(fs)) throw DomainError("f(s) is +inf");
  const auto res = legendre_transform(f, dual_axes);
  const auto& conj = res.conjugate;
  std::vector<PointSet::Point> out;
  for (std::size_t k = 0; k < conj.size(); ++k) {
    auto p = conj.point(k);
    double ip = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) ip += p[i] * s[i];
    if (std::abs(conj.value(k) + fs - ip) <= tol) out.push_back(std::move(p));
  }
  return PointSet(std::move(out));
}

}  // namespace matron
