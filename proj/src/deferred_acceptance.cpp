#include "matron/deferred_acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "matron/error.hpp"

namespace matron {

namespace {

double sup_norm(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

KKTRecord certify(const WelfareFunction& W, const Matrix& alpha, const Matrix& mu_bar,
                  const ExtendedMatrix& tau, double limit, const char* side, std::size_t k) {
  const Matrix mu = W.constrained_demand(alpha, mu_bar);
  KKTRecord rec;
  rec.min_tau = tau.size() == 0 ? 0.0 : tau.minCoeff();
  for (Eigen::Index i = 0; i < tau.size(); ++i) {
    const double gap = mu_bar.data()[i] - mu.data()[i];
    rec.complementarity = std::max(rec.complementarity, std::abs(ext::mul(tau.data()[i], gap)));
  }
  rec.fenchel = welfare_fenchel_residual(W, ext::sub(alpha, tau), mu);
  if (!(rec.fenchel <= limit)) {
    throw SolverIntegrityError(std::string(side) + "-side Fenchel residual " +
                               std::to_string(rec.fenchel) + " at iteration " + std::to_string(k));
  }
  return rec;
}

void check_market_shapes(const WelfareFunction& G, const WelfareFunction& H, const Matrix& alpha,
                         const Matrix& gamma) {
  if (G.rows() != H.rows() || G.cols() != H.cols()) throw ShapeError("G and H shapes differ");
  if (alpha.rows() != G.rows() || alpha.cols() != G.cols()) throw ShapeError("alpha vs welfare");
  if (gamma.rows() != G.rows() || gamma.cols() != G.cols()) throw ShapeError("gamma vs welfare");
}

// a <= b in the extended order; returns the amount by which a exceeds b.
double excess(double a, double b) {
  if (a == b) return 0.0;
  if (std::isinf(a) || std::isinf(b)) return a > b ? kInf : 0.0;
  return std::max(0.0, a - b);
}

double matrix_excess(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) worst = std::max(worst, excess(a.data()[i], b.data()[i]));
  return worst;
}

}  // namespace

DATrace run_da(const WelfareFunction& G, const WelfareFunction& H, const Matrix& alpha,
               const Matrix& gamma, const DAOptions& opts) {
  if (!(opts.tol_stop > 0.0)) throw DomainError("tol_stop must be positive");
  check_market_shapes(G, H, alpha, gamma);

  if (opts.update_rule == UpdateRule::alkan_gale) {
    auto trace = run_alkan_gale([&](const Matrix& m) { return G.constrained_demand(alpha, m); },
                                [&](const Matrix& m) { return H.constrained_demand(gamma, m); },
                                G.demand_cap().cwiseMin(H.demand_cap()), opts);
    for (auto& it : trace.iterations) {
      it.tau_P = G.multipliers(alpha, it.mu_A);
      it.tau_T = H.multipliers(gamma, it.mu_P);
      it.kkt_P = certify(G, alpha, it.mu_A, it.tau_P, opts.integrity_limit, "G", it.k);
      it.kkt_T = certify(H, gamma, it.mu_P, it.tau_T, opts.integrity_limit, "H", it.k);
    }
    return trace;
  }

  DATrace trace;
  trace.options = opts;
  Matrix mu_A = G.demand_cap().cwiseMin(H.demand_cap());
  Matrix mu_T_prev = Matrix::Zero(alpha.rows(), alpha.cols());
  for (std::size_t k = 0; k < opts.max_iter; ++k) {
    DAIteration it;
    it.k = k;
    it.mu_A = mu_A;
    it.mu_P = G.constrained_demand(alpha, mu_A, mu_T_prev);
    it.mu_T = H.constrained_demand(gamma, it.mu_P);
    it.tau_P = G.multipliers(alpha, mu_A);
    it.tau_T = H.multipliers(gamma, it.mu_P);
    it.kkt_P = certify(G, alpha, mu_A, it.tau_P, opts.integrity_limit, "G", k);
    it.kkt_T = certify(H, gamma, it.mu_P, it.tau_T, opts.integrity_limit, "H", k);
    it.residual = sup_norm(it.mu_P - it.mu_T);
    const bool done = it.residual <= opts.tol_stop;
    mu_A = mu_A - (it.mu_P - it.mu_T);
    mu_T_prev = it.mu_T;
    trace.iterations.push_back(std::move(it));
    if (done) {
      trace.converged = true;
      trace.termination = "tolerance";
      return trace;
    }
  }
  trace.termination = "max_iter";
  return trace;
}

DATrace run_alkan_gale(const ChoiceMap& CX, const ChoiceMap& CY, const Matrix& cap0,
                       const DAOptions& opts) {
  if (!(opts.tol_stop > 0.0)) throw DomainError("tol_stop must be positive");
  DATrace trace;
  trace.options = opts;
  trace.options.update_rule = UpdateRule::alkan_gale;
  Matrix mu_A = cap0;
  for (std::size_t k = 0; k < opts.max_iter; ++k) {
    DAIteration it;
    it.k = k;
    it.mu_A = mu_A;
    it.mu_P = CX(mu_A);
    it.mu_T = CY(it.mu_P);
    if (it.mu_P.rows() != cap0.rows() || it.mu_P.cols() != cap0.cols() ||
        it.mu_T.rows() != cap0.rows() || it.mu_T.cols() != cap0.cols()) {
      throw ShapeError("choice map output shape");
    }
    it.residual = sup_norm(it.mu_P - it.mu_T);
    const bool done = it.residual <= opts.tol_stop;
    for (Eigen::Index i = 0; i < mu_A.size(); ++i) {
      if (it.mu_T.data()[i] < it.mu_P.data()[i]) mu_A.data()[i] = it.mu_T.data()[i];
    }
    trace.iterations.push_back(std::move(it));
    if (done) {
      trace.converged = true;
      trace.termination = "tolerance";
      return trace;
    }
  }
  trace.termination = "max_iter";
  return trace;
}

EquilibriumOutcome extract_equilibrium(const DATrace& trace, const WelfareFunction& G,
                                       const WelfareFunction& H, const Matrix& alpha,
                                       const Matrix& gamma) {
  if (!trace.converged || trace.iterations.empty()) {
    throw StateError("equilibrium requested from a non-converged trace");
  }
  check_market_shapes(G, H, alpha, gamma);
  const auto& last = trace.iterations.back();
  const Matrix& mu = last.mu_P;
  const ExtendedMatrix tau_P = last.tau_P.size() ? last.tau_P : G.multipliers(alpha, last.mu_A);
  const ExtendedMatrix tau_T = last.tau_T.size() ? last.tau_T : H.multipliers(gamma, last.mu_P);
  const Matrix capG = G.demand_cap();
  const Matrix capH = H.demand_cap();

  ExtendedMatrix tau_alpha = ExtendedMatrix::Zero(mu.rows(), mu.cols());
  ExtendedMatrix tau_gamma = ExtendedMatrix::Zero(mu.rows(), mu.cols());
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    if (mu.data()[i] < capG.data()[i]) tau_alpha.data()[i] = tau_P.data()[i];
    if (mu.data()[i] < capH.data()[i]) tau_gamma.data()[i] = tau_T.data()[i];
  }
  EquilibriumOutcome out{Matching(mu, G.unmatched(mu), H.unmatched(mu)),
                         ext::sub(alpha, tau_alpha),
                         ext::sub(gamma, tau_gamma),
                         tau_alpha,
                         tau_gamma,
                         {}};
  out.residuals["trace_residual"] = last.residual;
  out.residuals["iterations"] = static_cast<double>(trace.iterations.size());
  return out;
}

EquilibriumReport verify_generalized_equilibrium(const EquilibriumOutcome& out,
                                                 const WelfareFunction& G,
                                                 const WelfareFunction& H, const Matrix& alpha,
                                                 const Matrix& gamma, double tol) {
  check_market_shapes(G, H, alpha, gamma);
  EquilibriumReport rep;
  const Matrix gap = stability_gap(out.U, out.V, alpha, gamma);
  for (Eigen::Index x = 0; x < gap.rows(); ++x) {
    for (Eigen::Index y = 0; y < gap.cols(); ++y) {
      const double v = std::isnan(gap(x, y)) ? kInf : std::abs(gap(x, y));
      if (v > rep.stability || rep.worst_pair.first < 0) {
        rep.stability = v;
        rep.worst_pair = {x, y};
      }
    }
  }
  rep.fenchel_G = welfare_fenchel_residual(G, out.U, out.mu.mu());
  rep.fenchel_H = welfare_fenchel_residual(H, out.V, out.mu.mu());
  rep.pass = rep.stability <= tol && rep.fenchel_G <= tol && rep.fenchel_H <= tol;
  return rep;
}

InvariantReport trace_invariants(const DATrace& trace, double tol) {
  InvariantReport rep;
  auto note = [&](const std::string& name, double v, std::size_t k) {
    if (std::isnan(v)) v = kInf;
    auto& w = rep.worst[name];
    w = std::max(w, v);
    if (v > tol && !rep.first_k.count(name)) {
      rep.first_k[name] = k;
      rep.pass = false;
    }
  };
  const auto& its = trace.iterations;
  const bool subtractive = trace.options.update_rule == UpdateRule::subtractive;
  for (std::string name : {"mu_A_decreasing", "mu_A_nonnegative", "tau_P_increasing",
                           "tau_T_decreasing", "bracket", "lower_bound", "update", "telescoping"}) {
    rep.worst[name] = 0.0;
  }
  for (std::size_t k = 0; k < its.size(); ++k) {
    const auto& it = its[k];
    const Matrix zero = Matrix::Zero(it.mu_A.rows(), it.mu_A.cols());
    note("mu_A_nonnegative", matrix_excess(zero, it.mu_A), k);
    note("bracket",
         std::max({matrix_excess(zero, it.mu_T), matrix_excess(it.mu_T, it.mu_P),
                   matrix_excess(it.mu_P, it.mu_A)}),
         k);
    if (k == 0) continue;
    const auto& prev = its[k - 1];
    note("mu_A_decreasing", matrix_excess(it.mu_A, prev.mu_A), k);
    if (it.tau_P.size() && prev.tau_P.size()) {
      note("tau_P_increasing", matrix_excess(prev.tau_P, it.tau_P), k);
    }
    if (it.tau_T.size() && prev.tau_T.size()) {
      note("tau_T_decreasing", matrix_excess(it.tau_T, prev.tau_T), k);
    }
    if (subtractive) {
      note("lower_bound", matrix_excess(prev.mu_T, it.mu_P), k);
      const Matrix expected = prev.mu_A - (prev.mu_P - prev.mu_T);
      note("update", sup_norm(it.mu_A - expected), k);
    }
  }
  if (subtractive && its.size() >= 2) {
    // Kahan-compensated sum of the rejected mass.
    const auto rows = its.front().mu_A.rows();
    const auto cols = its.front().mu_A.cols();
    Matrix sum = Matrix::Zero(rows, cols);
    Matrix comp = Matrix::Zero(rows, cols);
    for (std::size_t k = 0; k + 1 < its.size(); ++k) {
      const Matrix term = its[k].mu_P - its[k].mu_T;
      for (Eigen::Index i = 0; i < sum.size(); ++i) {
        const double y = term.data()[i] - comp.data()[i];
        const double t = sum.data()[i] + y;
        comp.data()[i] = (t - sum.data()[i]) - y;
        sum.data()[i] = t;
      }
    }
    const Matrix drop = its.front().mu_A - its.back().mu_A;
    note("telescoping", sup_norm(sum - drop), its.size() - 1);
  }
  return rep;
}

}  // namespace matron
