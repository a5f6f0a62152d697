#include "matron/set_orders.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "matron/error.hpp"
#include "matron/extended.hpp"
#include "matron/parallel.hpp"

namespace matron {

namespace {

using Point = PointSet::Point;

std::vector<double> delta_steps(const PointSet& X, const PointSet& Y,
                                const SetOrderOptions& opts) {
  const std::size_t d = X.dim();
  if (!opts.delta_step.empty()) {
    if (opts.delta_step.size() != d) throw ShapeError("delta_step dimension");
    return opts.delta_step;
  }
  std::vector<Point> all = X.points();
  for (const auto& y : Y.points()) {
    if (!X.contains(y)) all.push_back(y);
  }
  return PointSet(std::move(all), X.tol()).coordinate_steps();
}

long steps_within(double span, double h) {
  if (h <= 0.0 || span <= 0.0) return 0;
  return static_cast<long>(std::floor(span / h + 1e-9));
}

class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t k) : s_(splitmix64(seed ^ splitmix64(k))) {}
  std::size_t below(std::size_t n) {
    s_ = splitmix64(s_);
    return static_cast<std::size_t>(s_ % n);
  }

 private:
  std::uint64_t s_;
};

}  // namespace

OrderReport check_q_order_sets(const PointSet& X, const PointSet& Y,
                               const SetOrderOptions& opts) {
  if (X.empty() || Y.empty()) throw DomainError("Q-order check on an empty set");
  if (X.dim() != Y.dim()) throw ShapeError("point sets differ in dimension");
  const std::size_t d = X.dim();
  const auto h = delta_steps(X, Y, opts);

  OrderReport rep;
  rep.check = "q_order_sets";
  rep.seed = opts.seed;
  rep.threshold = 0.0;

  std::vector<long> hi1(d), hi2(d), d1(d), d2(d);
  Point a(d), b(d);

  // Returns true when some delta2 repairs (x, y, d1).
  auto repaired = [&](const Point& x, const Point& y) {
    std::fill(d2.begin(), d2.end(), 0);
    while (true) {
      for (std::size_t i = 0; i < d; ++i) {
        const double shift = (static_cast<double>(d1[i]) - static_cast<double>(d2[i])) * h[i];
        a[i] = x[i] - shift;
        b[i] = y[i] + shift;
      }
      if (X.contains(a) && Y.contains(b)) return true;
      std::size_t i = d;
      while (i-- > 0) {
        if (d2[i] < hi2[i]) {
          ++d2[i];
          break;
        }
        d2[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) return false;
    }
  };

  auto bounds = [&](const Point& x, const Point& y) {
    for (std::size_t i = 0; i < d; ++i) {
      hi1[i] = steps_within(x[i] - y[i], h[i]);
      hi2[i] = steps_within(y[i] - x[i], h[i]);
    }
  };

  double failures = 0.0;
  auto record = [&](const Point& x, const Point& y) {
    ++rep.pairs_checked;
    if (repaired(x, y)) return;
    if (failures == 0.0) {
      std::vector<double> delta(d);
      for (std::size_t i = 0; i < d; ++i) delta[i] = static_cast<double>(d1[i]) * h[i];
      rep.witness = {{"x", x}, {"y", y}, {"delta1", delta}};
    }
    failures += 1.0;
  };

  long double total = 0;
  for (const auto& x : X.points()) {
    for (const auto& y : Y.points()) {
      bounds(x, y);
      long double c = 1;
      for (std::size_t i = 0; i < d; ++i) c *= static_cast<long double>(hi1[i] + 1);
      total += c;
    }
  }
  rep.exhaustive = total <= static_cast<long double>(opts.pair_budget);

  if (rep.exhaustive) {
    for (const auto& x : X.points()) {
      for (const auto& y : Y.points()) {
        bounds(x, y);
        std::fill(d1.begin(), d1.end(), 0);
        while (true) {
          record(x, y);
          std::size_t i = d;
          while (i-- > 0) {
            if (d1[i] < hi1[i]) {
              ++d1[i];
              break;
            }
            d1[i] = 0;
          }
          if (i == static_cast<std::size_t>(-1)) break;
        }
      }
    }
  } else {
    for (std::uint64_t s = 0; s < opts.pair_budget; ++s) {
      SampleStream rng(opts.seed, s);
      const auto& x = X[rng.below(X.size())];
      const auto& y = Y[rng.below(Y.size())];
      bounds(x, y);
      for (std::size_t i = 0; i < d; ++i) {
        d1[i] = static_cast<long>(rng.below(static_cast<std::size_t>(hi1[i] + 1)));
      }
      record(x, y);
    }
  }
  rep.worst_violation = failures;
  rep.pass = failures == 0.0;
  return rep;
}

OrderReport check_matron(const PointSet& X, const SetOrderOptions& opts) {
  auto rep = check_q_order_sets(X, X, opts);
  rep.check = "matron";
  return rep;
}

OrderReport check_m_natural(const PointSet& X, double step, double tol) {
  OrderReport rep;
  rep.check = "m_natural";
  rep.threshold = 0.0;
  if (X.empty()) return rep;
  const std::size_t d = X.dim();
  const PointSet Xt(X.points(), tol);

  double span = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    double lo = X[0][k];
    double hi = X[0][k];
    for (const auto& p : X.points()) {
      lo = std::min(lo, p[k]);
      hi = std::max(hi, p[k]);
    }
    span = std::max(span, hi - lo);
  }
  if (step <= 0.0) {
    step = 0.0;
    for (double s : X.coordinate_steps()) {
      if (s > 0.0 && (step == 0.0 || s < step)) step = s;
    }
  }
  const long max_mult = step > 0.0 ? steps_within(span, step) : 0;

  Point a(d), b(d);
  double failures = 0.0;
  for (const auto& x : X.points()) {
    for (const auto& y : X.points()) {
      for (std::size_t i = 0; i < d; ++i) {
        if (x[i] - y[i] <= tol) continue;
        ++rep.pairs_checked;
        bool ok = false;
        for (long k = 1; k <= max_mult && !ok; ++k) {
          const double alpha = static_cast<double>(k) * step;
          // j = d encodes e_0 = 0.
          for (std::size_t j = 0; j <= d && !ok; ++j) {
            if (j < d && !(y[j] - x[j] > tol)) continue;
            a = x;
            b = y;
            a[i] -= alpha;
            b[i] += alpha;
            if (j < d) {
              a[j] += alpha;
              b[j] -= alpha;
            }
            ok = Xt.contains(a) && Xt.contains(b);
          }
        }
        if (!ok) {
          if (failures == 0.0) {
            rep.witness = {{"x", x}, {"y", y}, {"i", {static_cast<double>(i)}}};
          }
          failures += 1.0;
        }
      }
    }
  }
  rep.worst_violation = failures;
  rep.pass = failures == 0.0;
  return rep;
}

OrderReport check_paramodular(const SetFunctionPair& pair, const OrderOptions& opts) {
  if (pair.n > 16) throw SizeError("set functions limited to n <= 16");
  const std::size_t full = std::size_t{1} << pair.n;
  if (pair.g.size() != full || pair.h.size() != full) {
    throw ShapeError("set-function tables must have 2^n entries");
  }
  if (pair.g[0] != 0.0 || pair.h[0] != 0.0) throw ContractError("g(empty) and h(empty) must be 0");
  const auto& g = pair.g;
  const auto& h = pair.h;

  OrderReport rep;
  rep.check = "paramodular";
  rep.threshold = opts.tol;
  rep.seed = opts.seed;
  const long double pairs = static_cast<long double>(full) * static_cast<long double>(full);
  rep.exhaustive = pairs <= static_cast<long double>(opts.pair_budget);

  auto mask_vec = [&](std::size_t m) {
    std::vector<double> v(pair.n);
    for (std::size_t i = 0; i < pair.n; ++i) v[i] = (m >> i) & 1u ? 1.0 : 0.0;
    return v;
  };

  struct Stage {
    const char* name;
    std::function<double(std::size_t, std::size_t)> defect;
  };
  const Stage stages[] = {
      {"h_submodular", [&](std::size_t A, std::size_t B) { return h[A | B] + h[A & B] - h[A] - h[B]; }},
      {"g_supermodular", [&](std::size_t A, std::size_t B) { return g[A] + g[B] - g[A | B] - g[A & B]; }},
      {"compatibility",
       [&](std::size_t A, std::size_t B) { return h[A & ~B] - g[B & ~A] - h[A] + g[B]; }},
  };

  for (const auto& stage : stages) {
    double worst = -kInf;
    std::size_t wa = 0;
    std::size_t wb = 0;
    std::uint64_t count = 0;
    auto visit = [&](std::size_t A, std::size_t B) {
      ++count;
      const double v = stage.defect(A, B);
      if (v > worst) {
        worst = v;
        wa = A;
        wb = B;
      }
    };
    if (rep.exhaustive) {
      for (std::size_t A = 0; A < full; ++A) {
        for (std::size_t B = 0; B < full; ++B) visit(A, B);
      }
    } else {
      for (std::uint64_t s = 0; s < opts.pair_budget; ++s) {
        SampleStream rng(opts.seed, s);
        const std::size_t A = rng.below(full);
        visit(A, rng.below(full));
      }
    }
    rep.pairs_checked += count;
    rep.worst_violation = worst;
    if (worst > opts.tol) {
      rep.pass = false;
      rep.note = stage.name;
      rep.witness = {{"A", mask_vec(wa)}, {"B", mask_vec(wb)}};
      return rep;
    }
  }
  rep.pass = true;
  return rep;
}

double support_function(const PointSet& X, std::span<const double> d) {
  if (X.empty()) throw DomainError("support function of an empty set");
  if (d.size() != X.dim()) throw ShapeError("direction dimension");
  double best = -kInf;
  for (const auto& x : X.points()) {
    double ip = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) ip += x[i] * d[i];
    best = std::max(best, ip);
  }
  return best;
}

}  // namespace matron
