#include "matron/commands.hpp"

#include "matron/error.hpp"
#include "matron/orders.hpp"
#include "matron/set_orders.hpp"

namespace matron {

namespace {

OrderOptions order_options(const Json& spec) {
  OrderOptions o;
  if (!spec.contains("options")) return o;
  const auto& j = spec.at("options");
  if (j.contains("tol")) o.tol = j.at("tol").get<double>();
  if (j.contains("pair_budget")) o.pair_budget = j.at("pair_budget").get<std::uint64_t>();
  if (j.contains("seed")) o.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("threads")) o.threads = j.at("threads").get<unsigned>();
  return o;
}

IndexSet index_set(const Json& spec) {
  IndexSet D;
  if (!spec.contains("D")) throw SchemaError("check needs \"D\"");
  for (const auto& e : spec.at("D")) D.push_back(e.get<std::size_t>());
  return D;
}

Json dispatch_check(const Json& spec, bool& pass) {
  if (!spec.is_object() || !spec.contains("check")) throw SchemaError("check spec needs \"check\"");
  const auto check = spec.at("check").get<std::string>();
  const auto opts = order_options(spec);
  auto grid = [&](const char* key) {
    if (!spec.contains(key)) throw SchemaError(std::string("check needs \"") + key + "\"");
    return grid_from_json(spec.at(key));
  };
  auto eps = [&]() {
    if (!spec.contains("eps")) throw SchemaError("check needs \"eps\"");
    return real_from_json(spec.at("eps"), "eps");
  };
  auto points = [&](const char* key) {
    if (!spec.contains(key)) throw SchemaError(std::string("check needs \"") + key + "\"");
    return points_from_json(spec.at(key), key);
  };
  SetOrderOptions sopts;
  sopts.pair_budget = opts.pair_budget;
  sopts.seed = opts.seed;
  if (spec.contains("delta_step")) sopts.delta_step = spec.at("delta_step").get<std::vector<double>>();

  Json report;
  auto take = [&](const OrderReport& r) {
    report = report_to_json(r);
    pass = r.pass;
  };
  if (check == "submodular") {
    take(check_submodular(grid("f"), opts));
  } else if (check == "p_order") {
    take(check_p_order(grid("f"), grid("g"), opts));
  } else if (check == "q_order_functions") {
    take(check_q_order_functions(grid("f"), grid("g"), opts));
  } else if (check == "eps_d_q_order") {
    take(check_eps_d_q_order(grid("f"), grid("g"), eps(), index_set(spec), opts));
  } else if (check == "eps_d_p_order") {
    take(check_eps_d_p_order(grid("f"), grid("g"), eps(), index_set(spec), opts));
  } else if (check == "duality") {
    if (!spec.contains("dual_axes")) throw SchemaError("duality check needs \"dual_axes\"");
    const auto dual = axes_from_json(spec.at("dual_axes"), "dual_axes");
    const auto rep = duality_check(grid("f"), grid("g"), eps(), index_set(spec), dual, opts);
    report = duality_to_json(rep);
    pass = rep.consistent;
  } else if (check == "q_order_sets") {
    take(check_q_order_sets(points("X"), points("Y"), sopts));
  } else if (check == "matron") {
    take(check_matron(points("X"), sopts));
  } else if (check == "m_natural") {
    const double step = spec.contains("step") ? spec.at("step").get<double>() : 0.0;
    take(check_m_natural(points("X"), step));
  } else if (check == "paramodular") {
    SetFunctionPair pair;
    pair.n = spec.at("n").get<std::size_t>();
    pair.g = spec.at("g").get<std::vector<double>>();
    pair.h = spec.at("h").get<std::vector<double>>();
    take(check_paramodular(pair, opts));
  } else {
    throw SchemaError("unknown check \"" + check + "\"");
  }
  return report;
}

}  // namespace

SolveRun solve_instance(const InstanceFile& inst, double verify_tol) {
  const auto G = make_welfare(inst.welfare_g, inst.market, Side::rows);
  const auto H = make_welfare(inst.welfare_h, inst.market, Side::cols);
  const auto& alpha = inst.market.alpha();
  const auto& gamma = inst.market.gamma();
  SolveRun run;
  run.trace = run_da(*G, *H, alpha, gamma, inst.options);
  SolveRecord rec{&inst, &run.trace, nullptr, nullptr};
  if (run.trace.converged) {
    run.outcome = extract_equilibrium(run.trace, *G, *H, alpha, gamma);
    run.verification = verify_generalized_equilibrium(*run.outcome, *G, *H, alpha, gamma, verify_tol);
    rec.outcome = &*run.outcome;
    rec.verification = &*run.verification;
  }
  run.result = result_to_json(rec);
  return run;
}

Json verify_result(const InstanceFile& inst, const Json& result_doc, double tol, bool& pass) {
  const auto outcome = outcome_from_json(result_doc);
  const auto G = make_welfare(inst.welfare_g, inst.market, Side::rows);
  const auto H = make_welfare(inst.welfare_h, inst.market, Side::cols);
  if (outcome.mu.mu().rows() != inst.market.num_x() || outcome.mu.mu().cols() != inst.market.num_y()) {
    throw SchemaError("result shape does not match the instance");
  }
  const auto rep =
      verify_generalized_equilibrium(outcome, *G, *H, inst.market.alpha(), inst.market.gamma(), tol);
  Json j;
  j["pass"] = rep.pass;
  j["stability"] = real_to_json(rep.stability);
  j["fenchel_G"] = real_to_json(rep.fenchel_G);
  j["fenchel_H"] = real_to_json(rep.fenchel_H);
  j["worst_pair"] = {rep.worst_pair.first, rep.worst_pair.second};
  pass = rep.pass;
  return j;
}

Json run_check_spec(const Json& spec, bool& pass) {
  pass = false;
  try {
    return dispatch_check(spec, pass);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("check spec: ") + e.what());
  }
}

GridFunction::Axes axes_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw SchemaError(what + " must be a non-empty array of arrays");
  GridFunction::Axes axes;
  try {
    for (const auto& a : j) axes.push_back(a.get<std::vector<double>>());
  } catch (const nlohmann::json::exception&) {
    throw SchemaError(what + " must hold arrays of numbers");
  }
  return axes;
}

ConjugateRun conjugate_grid(const Json& grid_doc, GridFunction::Axes dual_axes) {
  const GridFunction f = grid_from_json(grid_doc);
  if (dual_axes.empty()) {
    if (!grid_doc.contains("dual_axes")) {
      throw SchemaError("no dual axes: pass them explicitly or add \"dual_axes\" to the grid");
    }
    dual_axes = axes_from_json(grid_doc.at("dual_axes"), "dual_axes");
  }
  auto res = legendre_transform(f, dual_axes);
  Json j = grid_to_json(res.conjugate);
  j["grid_error"] = res.grid_error;
  j["saturated_nodes"] = res.saturated_nodes;
  return {std::move(j), std::move(res)};
}

}  // namespace matron
