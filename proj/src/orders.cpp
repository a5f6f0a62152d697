#include "matron/orders.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "matron/error.hpp"
#include "matron/legendre.hpp"
#include "matron/parallel.hpp"

namespace matron {

namespace {

constexpr std::size_t kChunks = 256;
constexpr double kStrictSlack = 1e-15;

using Witness = std::map<std::string, std::vector<double>>;

struct ChunkResult {
  double worst = -kInf;
  Witness witness;
  std::uint64_t count = 0;
};

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t sample)
      : state_(splitmix64(seed ^ splitmix64(sample + 0x632BE59BD9B4E019ull))) {}
  std::uint64_t next() {
    state_ = splitmix64(state_);
    return state_;
  }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }

 private:
  std::uint64_t state_;
};

// Shared lattice bookkeeping: multi-indices of every node, extents, strides.
struct Lattice {
  explicit Lattice(const GridFunction& f) : d(f.dims()) {
    ext.resize(d);
    stride.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
      ext[i] = static_cast<long>(f.extent(i));
      stride[i] = static_cast<long>(f.stride(i));
    }
    multi.resize(f.size() * d);
    std::vector<std::size_t> m(d);
    for (std::size_t node = 0; node < f.size(); ++node) {
      f.multi_of(node, m);
      for (std::size_t i = 0; i < d; ++i) multi[node * d + i] = static_cast<long>(m[i]);
    }
  }
  const long* at(std::size_t node) const { return &multi[node * d]; }

  std::size_t d;
  std::vector<long> ext;
  std::vector<long> stride;
  std::vector<long> multi;
};

std::vector<std::size_t> domain_nodes(const GridFunction& f) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f.finite_at(k)) out.push_back(k);
  }
  return out;
}

std::vector<char> membership(const IndexSet& D, std::size_t d) {
  std::vector<char> in(d, 0);
  for (auto i : D) {
    if (i >= d) throw DomainError("index set entry out of range");
    in[i] = 1;
  }
  return in;
}

void require_same_axes(const GridFunction& f, const GridFunction& g) {
  if (!f.same_axes(g)) throw ShapeError("order checks need functions on identical axes");
}

ChunkResult merge_chunks(std::vector<ChunkResult>& chunks) {
  ChunkResult out;
  for (auto& c : chunks) {
    out.count += c.count;
    if (c.worst > out.worst) {
      out.worst = c.worst;
      out.witness = std::move(c.witness);
    }
  }
  return out;
}

OrderReport finish(std::string name, ChunkResult merged, double threshold,
                   const OrderOptions& opts, bool exhaustive) {
  OrderReport rep;
  rep.check = std::move(name);
  rep.worst_violation = merged.count == 0 ? 0.0 : merged.worst;
  rep.threshold = threshold;
  rep.pass = rep.worst_violation <= threshold;
  rep.pairs_checked = merged.count;
  rep.seed = opts.seed;
  rep.exhaustive = exhaustive;
  if (!rep.pass) rep.witness = std::move(merged.witness);
  return rep;
}

// ---------------------------------------------------------------------------
// Exchange (Q-type) search.

class ExchangeSearch {
 public:
  ExchangeSearch(const GridFunction& f, const GridFunction& g, std::vector<char> in_d)
      : f_(f.values().data()), g_(g.values().data()), lat_(f), in_d_(std::move(in_d)) {
    for (std::size_t i = 0; i < lat_.d; ++i) step_.push_back(f.step(i));
  }

  const Lattice& lattice() const { return lat_; }

  long delta1_extent(const long* x, const long* y, std::size_t i) const {
    return in_d_[i] ? std::max(0L, x[i] - y[i]) : 0L;
  }

  // min over admissible delta2 of the exchange defect; returns as soon as the
  // running minimum drops to `bound` or below.
  double min_defect(std::size_t xn, std::size_t yn, const long* d1, double bound,
                    long* best_d2) const {
    const std::size_t d = lat_.d;
    const long* x = lat_.at(xn);
    const long* y = lat_.at(yn);
    long lo[16];
    long hi[16];
    long cur[16];
    long a = 0;
    long b = 0;
    long a0 = 0;
    long b0 = 0;
    for (std::size_t i = 0; i < d; ++i) {
      if (in_d_[i]) {
        lo[i] = 0;
        hi[i] = std::max(0L, y[i] - x[i]);
      } else {
        lo[i] = std::max(-x[i], y[i] - (lat_.ext[i] - 1));
        hi[i] = std::min(lat_.ext[i] - 1 - x[i], y[i]);
      }
      cur[i] = lo[i];
      a += (x[i] - d1[i] + lo[i]) * lat_.stride[i];
      b += (y[i] + d1[i] - lo[i]) * lat_.stride[i];
      a0 += (x[i] - d1[i]) * lat_.stride[i];
      b0 += (y[i] + d1[i]) * lat_.stride[i];
    }
    const double base = f_[xn] + g_[yn];
    double best = f_[a0] + g_[b0] - base;  // delta2 = 0 probe
    for (std::size_t i = 0; i < d; ++i) best_d2[i] = 0;
    if (best <= bound) return best;
    while (true) {
      const double phi = f_[a] + g_[b] - base;
      if (phi < best) {
        best = phi;
        for (std::size_t i = 0; i < d; ++i) best_d2[i] = cur[i];
        if (best <= bound) return best;
      }
      std::size_t i = d;
      while (i-- > 0) {
        if (cur[i] < hi[i]) {
          ++cur[i];
          a += lat_.stride[i];
          b -= lat_.stride[i];
          break;
        }
        const long span = cur[i] - lo[i];
        a -= span * lat_.stride[i];
        b += span * lat_.stride[i];
        cur[i] = lo[i];
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
    return best;
  }

  Witness witness(const GridFunction& f, std::size_t xn, std::size_t yn, const long* d1,
                  const long* d2, double value) const {
    Witness w;
    w["q"] = f.point(xn);
    w["q_prime"] = f.point(yn);
    std::vector<double> v1(lat_.d);
    std::vector<double> v2(lat_.d);
    for (std::size_t i = 0; i < lat_.d; ++i) {
      v1[i] = static_cast<double>(d1[i]) * step_[i];
      v2[i] = static_cast<double>(d2[i]) * step_[i];
    }
    w["delta1"] = std::move(v1);
    w["best_delta2"] = std::move(v2);
    w["defect"] = {value};
    return w;
  }

 private:
  const double* f_;
  const double* g_;
  Lattice lat_;
  std::vector<char> in_d_;
  std::vector<double> step_;
};

OrderReport run_exchange_check(std::string name, const GridFunction& f, const GridFunction& g,
                               std::vector<char> in_d, double threshold,
                               const OrderOptions& opts) {
  require_same_axes(f, g);
  if (!f.uniform()) throw DomainError("exchange checks need uniformly spaced axes");
  if (f.dims() > 16) throw SizeError("at most 16 dimensions");
  const ExchangeSearch search(f, g, std::move(in_d));
  const auto& lat = search.lattice();
  const std::size_t d = lat.d;
  const auto dom_f = domain_nodes(f);
  const auto dom_g = domain_nodes(g);

  // Total number of (q, q', delta1) triples.
  long double total = 0;
  for (auto xn : dom_f) {
    for (auto yn : dom_g) {
      long double c = 1;
      for (std::size_t i = 0; i < d; ++i) {
        c *= static_cast<long double>(search.delta1_extent(lat.at(xn), lat.at(yn), i) + 1);
      }
      total += c;
    }
  }
  const bool exhaustive = total <= static_cast<long double>(opts.pair_budget);
  const unsigned threads = thread_budget(opts.threads);

  std::vector<ChunkResult> chunks(kChunks);
  if (exhaustive) {
    const std::size_t per = (dom_f.size() + kChunks - 1) / kChunks;
    parallel_chunks(kChunks, threads, [&](std::size_t c) {
      ChunkResult& res = chunks[c];
      long d1[16];
      long hi1[16];
      long d2[16];
      const std::size_t begin = c * per;
      const std::size_t end = std::min(dom_f.size(), begin + per);
      for (std::size_t xi = begin; xi < end; ++xi) {
        const std::size_t xn = dom_f[xi];
        for (auto yn : dom_g) {
          for (std::size_t i = 0; i < d; ++i) {
            d1[i] = 0;
            hi1[i] = search.delta1_extent(lat.at(xn), lat.at(yn), i);
          }
          while (true) {
            ++res.count;
            const double v = search.min_defect(xn, yn, d1, res.worst, d2);
            if (v > res.worst) {
              res.worst = v;
              res.witness = search.witness(f, xn, yn, d1, d2, v);
            }
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
    });
  } else {
    const std::uint64_t per = (opts.pair_budget + kChunks - 1) / kChunks;
    parallel_chunks(kChunks, threads, [&](std::size_t c) {
      ChunkResult& res = chunks[c];
      long d1[16];
      long d2[16];
      const std::uint64_t begin = c * per;
      const std::uint64_t end = std::min<std::uint64_t>(opts.pair_budget, begin + per);
      for (std::uint64_t s = begin; s < end; ++s) {
        RandomStream rng(opts.seed, s);
        const std::size_t xn = dom_f[rng.below(dom_f.size())];
        const std::size_t yn = dom_g[rng.below(dom_g.size())];
        for (std::size_t i = 0; i < d; ++i) {
          const long e = search.delta1_extent(lat.at(xn), lat.at(yn), i);
          d1[i] = static_cast<long>(rng.below(static_cast<std::size_t>(e + 1)));
        }
        ++res.count;
        const double v = search.min_defect(xn, yn, d1, res.worst, d2);
        if (v > res.worst) {
          res.worst = v;
          res.witness = search.witness(f, xn, yn, d1, d2, v);
        }
      }
    });
  }
  return finish(std::move(name), merge_chunks(chunks), threshold, opts, exhaustive);
}

// ---------------------------------------------------------------------------
// Lattice (P-type) pair check.

OrderReport run_pair_check(std::string name, const GridFunction& f, const GridFunction& g,
                           std::vector<char> in_d, double threshold, const OrderOptions& opts) {
  require_same_axes(f, g);
  if (f.dims() > 16) throw SizeError("at most 16 dimensions");
  const Lattice lat(f);
  const std::size_t d = lat.d;
  const double* fv = f.values().data();
  const double* gv = g.values().data();
  const auto dom_f = domain_nodes(f);
  const auto dom_g = domain_nodes(g);
  const bool full = std::all_of(in_d.begin(), in_d.end(), [](char c) { return c != 0; });

  std::vector<std::size_t> d_axes;
  long double sub = 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (in_d[i]) {
      d_axes.push_back(i);
      sub *= static_cast<long double>(lat.ext[i]);
    }
  }
  const long double total = full ? static_cast<long double>(dom_f.size()) * dom_g.size()
                                 : static_cast<long double>(dom_f.size()) * sub;
  const bool exhaustive = total <= static_cast<long double>(opts.pair_budget);
  const unsigned threads = thread_budget(opts.threads);

  auto eval = [&](std::size_t an, std::size_t bn, ChunkResult& res) {
    if (!std::isfinite(gv[bn])) return;
    ++res.count;
    const long* a = lat.at(an);
    const long* b = lat.at(bn);
    long meet = 0;
    long join = 0;
    for (std::size_t i = 0; i < d; ++i) {
      meet += std::min(a[i], b[i]) * lat.stride[i];
      join += std::max(a[i], b[i]) * lat.stride[i];
    }
    const double v = fv[meet] + gv[join] - fv[an] - gv[bn];
    if (v > res.worst) {
      res.worst = v;
      res.witness = {{"p", f.point(an)},
                     {"p_prime", f.point(bn)},
                     {"meet", f.point(static_cast<std::size_t>(meet))},
                     {"join", f.point(static_cast<std::size_t>(join))},
                     {"defect", {v}}};
    }
  };

  std::vector<ChunkResult> chunks(kChunks);
  if (exhaustive) {
    const std::size_t per = (dom_f.size() + kChunks - 1) / kChunks;
    parallel_chunks(kChunks, threads, [&](std::size_t c) {
      ChunkResult& res = chunks[c];
      const std::size_t begin = c * per;
      const std::size_t end = std::min(dom_f.size(), begin + per);
      std::vector<long> cur(d_axes.size());
      for (std::size_t ai = begin; ai < end; ++ai) {
        const std::size_t an = dom_f[ai];
        if (full) {
          for (auto bn : dom_g) eval(an, bn, res);
          continue;
        }
        // Nodes agreeing with a off D.
        long base = 0;
        const long* a = lat.at(an);
        for (std::size_t i = 0; i < d; ++i) {
          if (!in_d[i]) base += a[i] * lat.stride[i];
        }
        std::fill(cur.begin(), cur.end(), 0);
        long idx = base;
        while (true) {
          eval(an, static_cast<std::size_t>(idx), res);
          std::size_t k = d_axes.size();
          while (k-- > 0) {
            const std::size_t ax = d_axes[k];
            if (cur[k] + 1 < lat.ext[ax]) {
              ++cur[k];
              idx += lat.stride[ax];
              break;
            }
            idx -= cur[k] * lat.stride[ax];
            cur[k] = 0;
          }
          if (k == static_cast<std::size_t>(-1)) break;
        }
      }
    });
  } else {
    const std::uint64_t per = (opts.pair_budget + kChunks - 1) / kChunks;
    parallel_chunks(kChunks, threads, [&](std::size_t c) {
      ChunkResult& res = chunks[c];
      const std::uint64_t begin = c * per;
      const std::uint64_t end = std::min<std::uint64_t>(opts.pair_budget, begin + per);
      for (std::uint64_t s = begin; s < end; ++s) {
        RandomStream rng(opts.seed, s);
        const std::size_t an = dom_f[rng.below(dom_f.size())];
        std::size_t bn = 0;
        if (full) {
          bn = dom_g[rng.below(dom_g.size())];
        } else {
          const long* a = lat.at(an);
          long idx = 0;
          for (std::size_t i = 0; i < d; ++i) {
            const long coord =
                in_d[i] ? static_cast<long>(rng.below(static_cast<std::size_t>(lat.ext[i]))) : a[i];
            idx += coord * lat.stride[i];
          }
          bn = static_cast<std::size_t>(idx);
        }
        eval(an, bn, res);
      }
    });
  }
  return finish(std::move(name), merge_chunks(chunks), threshold, opts, exhaustive);
}

}  // namespace

OrderReport check_p_order(const GridFunction& f, const GridFunction& g, const OrderOptions& opts) {
  return run_pair_check("p_order", f, g, std::vector<char>(f.dims(), 1), opts.tol, opts);
}

OrderReport check_submodular(const GridFunction& f, const OrderOptions& opts) {
  auto rep = run_pair_check("submodular", f, f, std::vector<char>(f.dims(), 1), opts.tol, opts);
  return rep;
}

OrderReport check_q_order_functions(const GridFunction& f, const GridFunction& g,
                                    const OrderOptions& opts) {
  return run_exchange_check("q_order_functions", f, g, std::vector<char>(f.dims(), 1), opts.tol,
                            opts);
}

OrderReport check_eps_d_q_order(const GridFunction& f, const GridFunction& g, double eps,
                                const IndexSet& D, const OrderOptions& opts) {
  return run_exchange_check("eps_d_q_order", f, g, membership(D, f.dims()), eps - kStrictSlack,
                            opts);
}

OrderReport check_eps_d_p_order(const GridFunction& f, const GridFunction& g, double eps,
                                const IndexSet& D, const OrderOptions& opts) {
  return run_pair_check("eps_d_p_order", f, g, membership(D, f.dims()), eps - kStrictSlack, opts);
}

DualityReport duality_check(const GridFunction& f, const GridFunction& g, double eps,
                            const IndexSet& D, const GridFunction::Axes& dual_axes,
                            const OrderOptions& opts) {
  const auto f_star = legendre_transform(f, dual_axes);
  const auto g_star = legendre_transform(g, dual_axes);
  DualityReport rep;
  rep.q_side = check_eps_d_q_order(f, g, eps, D, opts);
  rep.p_side = check_eps_d_p_order(g_star.conjugate, f_star.conjugate, eps, D, opts);
  rep.band = 2.0 * std::max(f_star.grid_error, g_star.grid_error);
  rep.agree = rep.q_side.pass == rep.p_side.pass;
  const auto near = [&](const OrderReport& r) {
    return std::abs(r.worst_violation - r.threshold) <= rep.band;
  };
  rep.consistent = rep.agree || near(rep.q_side) || near(rep.p_side);
  return rep;
}

}  // namespace matron
