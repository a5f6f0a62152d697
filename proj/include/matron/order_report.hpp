#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace matron {

// Outcome of a brute-force order/structure check.
//
// `worst_violation` is the largest defect found, where a defect is
// (left-hand side - right-hand side) of the inequality being tested; the
// check passes when it stays at or below `threshold`. For exchange-type
// checks the defect of one (x, y, delta1) triple is the best value over all
// admissible delta2.
struct OrderReport {
  std::string check;
  bool pass = true;
  double worst_violation = 0.0;
  double threshold = 0.0;
  std::map<std::string, std::vector<double>> witness;
  std::uint64_t pairs_checked = 0;
  std::uint64_t seed = 0;
  bool exhaustive = true;
  std::string note;
};

struct OrderOptions {
  double tol = 1e-8;
  // Exhaustive below this many tuples, uniform random subsample above.
  std::uint64_t pair_budget = 1'000'000;
  std::uint64_t seed = 0;
  // 0: honour MATRON_MATCH_THREADS, else hardware concurrency.
  unsigned threads = 0;
};

struct SetOrderOptions {
  double membership_tol = 1e-9;
  // Per-axis resolution of the delta lattices; empty means infer from the
  // coordinate gaps of the sets.
  std::vector<double> delta_step;
  std::uint64_t pair_budget = 1'000'000;
  std::uint64_t seed = 0;
};

}  // namespace matron
