#pragma once

#include <optional>
#include <string>

#include "matron/io.hpp"
#include "matron/legendre.hpp"

// JSON-level entry points shared by the command-line tool and the Python module.
namespace matron {

struct SolveRun {
  DATrace trace;
  std::optional<EquilibriumOutcome> outcome;       // only when converged
  std::optional<EquilibriumReport> verification;   // only when converged
  Json result;
};

SolveRun solve_instance(const InstanceFile& inst, double verify_tol);

// Re-checks a stored result document against its instance.
Json verify_result(const InstanceFile& inst, const Json& result_doc, double tol, bool& pass);

// Dispatches on spec["check"]. Missing or mistyped keys raise SchemaError.
Json run_check_spec(const Json& spec, bool& pass);

GridFunction::Axes axes_from_json(const Json& j, const std::string& what);

struct ConjugateRun {
  Json doc;
  LegendreResult transform;
};

// dual_axes empty means take them from grid_doc["dual_axes"].
ConjugateRun conjugate_grid(const Json& grid_doc, GridFunction::Axes dual_axes);

}  // namespace matron
