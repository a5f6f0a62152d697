#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "matron/deferred_acceptance.hpp"
#include "matron/grid_function.hpp"
#include "matron/logit_welfare.hpp"
#include "matron/market.hpp"
#include "matron/order_report.hpp"
#include "matron/orders.hpp"
#include "matron/point_set.hpp"
#include "matron/welfare.hpp"

namespace matron {

inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

// Every parse failure below throws SchemaError.
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& doc);

// Finite reals are JSON numbers; infinities are the strings "+inf" / "-inf".
Json real_to_json(double v);
double real_from_json(const Json& j, const std::string& what);

// {"rows": r, "cols": c, "data": [row-major]}. Readers also accept nested
// arrays [[...], ...].
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& what);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j, const std::string& what);

Json grid_to_json(const GridFunction& f);
// Accepts {"axes", "values", "convex"} tables and the generators
// {"kind": "quadratic", "axes", "A", "center"?} (1/2 (q-c)'A(q-c)) and
// {"kind": "indicator", "axes", "points"}.
GridFunction grid_from_json(const Json& j);

PointSet points_from_json(const Json& j, const std::string& what);

Json report_to_json(const OrderReport& rep);
Json duality_to_json(const DualityReport& rep);

struct InstanceFile {
  MarketInstance market;
  Json welfare_g;
  Json welfare_h;
  DAOptions options;
};

InstanceFile parse_instance(const Json& doc);
InstanceFile load_instance(const std::string& path);
Json instance_to_json(const InstanceFile& inst);

// Builds G (side rows, masses n, reservations alpha_x0) or H (side cols,
// masses m, reservations gamma_0y) from a welfare spec. Quadratic and grid
// caps default to the side's masses broadcast over the matrix.
WelfarePtr make_welfare(const Json& spec, const MarketInstance& market, Side side);

struct SolveRecord {
  const InstanceFile* instance = nullptr;
  const DATrace* trace = nullptr;
  const EquilibriumOutcome* outcome = nullptr;       // null when not converged
  const EquilibriumReport* verification = nullptr;   // null when not converged
};

Json result_to_json(const SolveRecord& rec);
EquilibriumOutcome outcome_from_json(const Json& doc);

// One JSON object per line: k, mu_A, mu_P, mu_T, tau_P, tau_T, residual.
void write_trace_jsonl(std::ostream& os, const DATrace& trace);

}  // namespace matron
