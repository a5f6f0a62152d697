#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "matron/market.hpp"
#include "matron/welfare.hpp"

namespace matron {

enum class UpdateRule { subtractive, alkan_gale };

struct DAOptions {
  double tol_stop = 1e-10;
  std::size_t max_iter = 100'000;
  UpdateRule update_rule = UpdateRule::subtractive;
  std::uint64_t seed = 0;
  // A multiplier call whose Fenchel residual exceeds this aborts the run.
  double integrity_limit = 1e-6;
};

// Certificate of one multipliers(alpha, mu_bar) call: tau >= 0, tau
// (mu_bar - mu) = 0 and mu in dG(alpha - tau), with mu the demand under the
// upper bound only.
struct KKTRecord {
  double min_tau = 0.0;
  double complementarity = 0.0;
  double fenchel = 0.0;
};

struct DAIteration {
  std::size_t k = 0;
  Matrix mu_A;
  Matrix mu_P;
  Matrix mu_T;
  ExtendedMatrix tau_P;  // empty when no multipliers were computed
  ExtendedMatrix tau_T;
  double residual = 0.0;
  std::optional<KKTRecord> kkt_P;
  std::optional<KKTRecord> kkt_T;
};

struct DATrace {
  DAOptions options;
  std::vector<DAIteration> iterations;
  bool converged = false;
  std::string termination;  // "tolerance" | "max_iter"
};

// Proposal / disposal / update iteration started from mu_A = min(n^G, n^H).
DATrace run_da(const WelfareFunction& G, const WelfareFunction& H, const Matrix& alpha,
               const Matrix& gamma, const DAOptions& opts = {});

using ChoiceMap = std::function<Matrix(const Matrix&)>;

// Alkan-Gale variant: mu_X = CX(mu_A), mu_Y = CY(mu_X), and mu_A drops to
// mu_Y wherever mu_Y < mu_X. Stores mu_X / mu_Y as mu_P / mu_T; tau entries
// are left empty.
DATrace run_alkan_gale(const ChoiceMap& CX, const ChoiceMap& CY, const Matrix& cap0,
                       const DAOptions& opts = {});

// Throws StateError on a non-converged trace.
EquilibriumOutcome extract_equilibrium(const DATrace& trace, const WelfareFunction& G,
                                       const WelfareFunction& H, const Matrix& alpha,
                                       const Matrix& gamma);

struct EquilibriumReport {
  bool pass = false;
  // max |max(U - alpha, V - gamma)| over pairs.
  double stability = 0.0;
  double fenchel_G = 0.0;
  double fenchel_H = 0.0;
  std::pair<Eigen::Index, Eigen::Index> worst_pair{-1, -1};
};

EquilibriumReport verify_generalized_equilibrium(const EquilibriumOutcome& out,
                                                 const WelfareFunction& G,
                                                 const WelfareFunction& H, const Matrix& alpha,
                                                 const Matrix& gamma, double tol = kDefaultTol);

struct InvariantReport {
  bool pass = true;
  // Worst violation per invariant (0 when it holds).
  std::map<std::string, double> worst;
  // First iteration index at which each failing invariant breaks.
  std::map<std::string, std::size_t> first_k;
};

// Monotonicity of mu_A, tau_P, tau_T, the bracket 0 <= mu_T <= mu_P <= mu_A,
// mu_T(k-1) <= mu_P(k), the stored update rule and telescoping of the
// rejected mass.
InvariantReport trace_invariants(const DATrace& trace, double tol = 1e-12);

}  // namespace matron
