// matron-match: command-line front end.
//
//   matron-match solve INSTANCE [--tol T] [--max-iter N] [--update-rule R]
//                               [--trace-out PATH] [--out PATH] [--verify-tol T]
//   matron-match verify INSTANCE RESULT [--tol T]
//   matron-match check-order SPEC [--out PATH]
//   matron-match conjugate GRID [--dual-axes lo:hi:n,...] [--out PATH]
//
// Exit codes: 0 success / pass, 1 check failed or runtime error, 2 malformed
// input, 3 solve did not converge, 4 solve converged but failed verification.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "matron/commands.hpp"
#include "matron/error.hpp"

namespace {

using namespace matron;

enum Exit { kOk = 0, kFail = 1, kSchema = 2, kNoConvergence = 3, kUnverified = 4 };

void emit(const Json& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc.dump(2) << '\n';
  } else {
    write_json_file(out_path, doc);
  }
}

GridFunction::Axes parse_dual_axes(const std::string& text) {
  GridFunction::Axes axes;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t n = 0;
    char c1 = 0;
    char c2 = 0;
    std::stringstream ps(part);
    if (!(ps >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || n < 2 || !(hi > lo)) {
      throw SchemaError("dual axis \"" + part + "\" is not lo:hi:n");
    }
    axes.push_back(linspace(lo, hi, n));
  }
  if (axes.empty()) throw SchemaError("no dual axes given");
  return axes;
}

int run_solve(const std::string& path, const CLI::App& app, double tol, std::size_t max_iter,
              const std::string& rule, const std::string& trace_out, const std::string& out,
              double verify_tol) {
  InstanceFile inst = load_instance(path);
  if (app.count("--tol")) inst.options.tol_stop = tol;
  if (app.count("--max-iter")) inst.options.max_iter = max_iter;
  if (app.count("--update-rule")) {
    inst.options.update_rule = rule == "alkan_gale" ? UpdateRule::alkan_gale : UpdateRule::subtractive;
  }
  const SolveRun run = solve_instance(inst, verify_tol);
  if (!trace_out.empty()) {
    std::ofstream os(trace_out);
    if (!os) throw Error("cannot write " + trace_out);
    write_trace_jsonl(os, run.trace);
  }
  emit(run.result, out);
  if (!run.trace.converged) {
    std::cerr << "did not converge after " << run.trace.iterations.size() << " iterations\n";
    return kNoConvergence;
  }
  const auto& report = *run.verification;
  if (!report.pass) {
    std::cerr << "verification failed: stability " << report.stability << ", fenchel "
              << report.fenchel_G << " / " << report.fenchel_H << '\n';
    return kUnverified;
  }
  return kOk;
}

int run_verify(const std::string& inst_path, const std::string& result_path, double tol) {
  bool pass = false;
  const Json j = verify_result(load_instance(inst_path), read_json_file(result_path), tol, pass);
  std::cout << j.dump(2) << '\n';
  return pass ? kOk : kFail;
}

int run_check_order(const std::string& path, const std::string& out) {
  bool pass = false;
  const Json report = run_check_spec(read_json_file(path), pass);
  emit(report, out);
  if (!pass) std::cerr << "check failed\n";
  return pass ? kOk : kFail;
}

int run_conjugate(const std::string& path, const std::string& dual_text, const std::string& out) {
  GridFunction::Axes dual;
  if (!dual_text.empty()) dual = parse_dual_axes(dual_text);
  const auto run = conjugate_grid(read_json_file(path), dual);
  if (run.transform.boundary_saturation) {
    std::cerr << "warning: " << run.transform.saturated_nodes
              << " dual nodes attain their maximum on the primal grid boundary\n";
  }
  emit(run.doc, out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized equilibrium matchings and order checks"};
  app.require_subcommand(1);

  std::string instance;
  std::string result;
  std::string spec;
  std::string grid_path;
  std::string out;
  std::string trace_out;
  std::string rule = "subtractive";
  std::string dual_axes;
  double tol = 1e-10;
  double verify_tol = 1e-6;
  double check_tol = 1e-6;
  std::size_t max_iter = 100'000;

  auto* solve = app.add_subcommand("solve", "run deferred acceptance on an instance file");
  solve->add_option("instance", instance, "instance JSON")->required();
  solve->add_option("--tol", tol, "stopping tolerance on |mu_P - mu_T|");
  solve->add_option("--max-iter", max_iter, "iteration cap");
  solve->add_option("--update-rule", rule, "subtractive | alkan_gale")
      ->check(CLI::IsMember({"subtractive", "alkan_gale"}));
  solve->add_option("--trace-out", trace_out, "write the trace as JSON lines");
  solve->add_option("--out", out, "result file (default stdout)");
  solve->add_option("--verify-tol", verify_tol, "tolerance of the equilibrium certificate");

  auto* verify = app.add_subcommand("verify", "re-verify a stored result");
  verify->add_option("instance", instance, "instance JSON")->required();
  verify->add_option("result", result, "result JSON")->required();
  verify->add_option("--tol", check_tol, "certificate tolerance");

  auto* order = app.add_subcommand("check-order", "run an order / structure check");
  order->add_option("spec", spec, "check spec JSON")->required();
  order->add_option("--out", out, "report file (default stdout)");

  auto* conj = app.add_subcommand("conjugate", "Legendre transform of a grid function");
  conj->add_option("grid", grid_path, "grid function JSON")->required();
  conj->add_option("--dual-axes", dual_axes, "lo:hi:n per axis, comma separated");
  conj->add_option("--out", out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kSchema;
  }

  try {
    if (*solve) return run_solve(instance, *solve, tol, max_iter, rule, trace_out, out, verify_tol);
    if (*verify) return run_verify(instance, result, check_tol);
    if (*order) return run_check_order(spec, out);
    if (*conj) return run_conjugate(grid_path, dual_axes, out);
  } catch (const SchemaError& e) {
    std::cerr << e.what() << '\n';
    return kSchema;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return kSchema;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kFail;
  }
  return kFail;
}
