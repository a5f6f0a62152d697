// Python module matron_match._core. Numeric helpers take and return numpy
// arrays; the file-format entry points take and return JSON text, and the
// package __init__ turns that into dicts.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "matron/commands.hpp"
#include "matron/error.hpp"
#include "matron/lcp.hpp"
#include "matron/logit_welfare.hpp"

namespace py = pybind11;
using namespace matron;

namespace {

Vector or_empty(const std::optional<Vector>& v) { return v ? *v : Vector{}; }

Json parse(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  }
}

py::tuple solve_json(const std::string& instance, double verify_tol, std::optional<double> tol,
                     std::optional<std::size_t> max_iter, std::optional<std::string> rule) {
  InstanceFile inst = parse_instance(parse(instance, "instance"));
  if (tol) inst.options.tol_stop = *tol;
  if (max_iter) inst.options.max_iter = *max_iter;
  if (rule) {
    if (*rule == "alkan_gale") {
      inst.options.update_rule = UpdateRule::alkan_gale;
    } else if (*rule == "subtractive") {
      inst.options.update_rule = UpdateRule::subtractive;
    } else {
      throw SchemaError("unknown update rule \"" + *rule + "\"");
    }
  }
  SolveRun run;
  {
    py::gil_scoped_release release;
    run = solve_instance(inst, verify_tol);
  }
  std::ostringstream trace;
  write_trace_jsonl(trace, run.trace);
  return py::make_tuple(run.result.dump(), trace.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = kToolVersion;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ShapeError>(m, "ShapeError", base);
  py::register_exception<DomainError>(m, "DomainError", base);
  py::register_exception<ContractError>(m, "ContractError", base);
  py::register_exception<ConditioningError>(m, "ConditioningError", base);
  py::register_exception<IterationLimitError>(m, "IterationLimitError", base);
  py::register_exception<SolverIntegrityError>(m, "SolverIntegrityError", base);
  py::register_exception<StateError>(m, "StateError", base);
  py::register_exception<SizeError>(m, "SizeError", base);
  py::register_exception<SchemaError>(m, "SchemaError", base);

  m.def(
      "logit_value",
      [](const ExtendedMatrix& alpha, const Vector& n, std::optional<Vector> reservation) {
        return logit_value(alpha, n, or_empty(reservation));
      },
      py::arg("alpha"), py::arg("n"), py::arg("reservation") = py::none());

  m.def(
      "logit_demand",
      [](const Matrix& alpha, const Matrix& mu_bar, const Vector& n, std::optional<Vector> reservation) {
        auto d = logit_constrained_demand(alpha, mu_bar, n, Matrix{}, or_empty(reservation));
        return py::make_tuple(d.mu, d.mu_x0);
      },
      py::arg("alpha"), py::arg("mu_bar"), py::arg("n"), py::arg("reservation") = py::none());

  m.def(
      "logit_multipliers",
      [](const Matrix& alpha, const Matrix& mu_bar, const Vector& n, std::optional<Vector> reservation) {
        return logit_multipliers(alpha, mu_bar, n, or_empty(reservation));
      },
      py::arg("alpha"), py::arg("mu_bar"), py::arg("n"), py::arg("reservation") = py::none());

  m.def(
      "lcp_solve",
      [](const Matrix& S, const Vector& rho, double tol, std::size_t max_sweeps) {
        LCPOptions o;
        o.tol = tol;
        o.max_sweeps = max_sweeps;
        auto sol = lcp_solve({S, rho}, o);
        return py::make_tuple(sol.r, sol.tau);
      },
      py::arg("S"), py::arg("rho"), py::arg("tol") = 1e-10, py::arg("max_sweeps") = 10'000);

  m.def(
      "quadratic_residual",
      [](const Vector& p, const Vector& q_bar, const Matrix& A) {
        auto res = quadratic_residual(p, q_bar, A);
        return py::make_tuple(res.r, res.tau);
      },
      py::arg("p"), py::arg("q_bar"), py::arg("A"));

  m.def("solve_json", &solve_json, py::arg("instance"), py::arg("verify_tol") = 1e-6,
        py::arg("tol") = py::none(), py::arg("max_iter") = py::none(),
        py::arg("update_rule") = py::none());

  m.def(
      "verify_json",
      [](const std::string& instance, const std::string& result, double tol) {
        bool pass = false;
        return verify_result(parse_instance(parse(instance, "instance")), parse(result, "result"), tol,
                             pass)
            .dump();
      },
      py::arg("instance"), py::arg("result"), py::arg("tol") = 1e-6);

  m.def(
      "check_order_json",
      [](const std::string& spec) {
        const Json doc = parse(spec, "check spec");
        bool pass = false;
        Json report;
        {
          py::gil_scoped_release release;
          report = run_check_spec(doc, pass);
        }
        return report.dump();
      },
      py::arg("spec"));

  m.def(
      "conjugate_json",
      [](const std::string& grid, std::optional<std::vector<std::vector<double>>> dual_axes) {
        GridFunction::Axes dual;
        if (dual_axes) dual = *dual_axes;
        return conjugate_grid(parse(grid, "grid"), dual).doc.dump();
      },
      py::arg("grid"), py::arg("dual_axes") = py::none());
}
