#include <doctest.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "matron/error.hpp"
#include "matron/io.hpp"

using namespace matron;

namespace {

const std::string golden = std::string(MATRON_SOURCE_DIR) + "/docs/golden/";

struct Solved {
  InstanceFile inst;
  DATrace trace;
  EquilibriumOutcome out;
  EquilibriumReport rep;
  Json result;
};

Solved solve(const Json& doc) {
  auto inst = parse_instance(doc);
  const auto G = make_welfare(inst.welfare_g, inst.market, Side::rows);
  const auto H = make_welfare(inst.welfare_h, inst.market, Side::cols);
  auto trace = run_da(*G, *H, inst.market.alpha(), inst.market.gamma(), inst.options);
  auto out = extract_equilibrium(trace, *G, *H, inst.market.alpha(), inst.market.gamma());
  auto rep = verify_generalized_equilibrium(out, *G, *H, inst.market.alpha(), inst.market.gamma(), 1e-6);
  Solved s{std::move(inst), std::move(trace), std::move(out), rep, {}};
  s.result = result_to_json({&s.inst, &s.trace, &s.out, &s.rep});
  return s;
}

Json base_instance() { return read_json_file(golden + "instance.json"); }

}  // namespace

TEST_CASE("reals round-trip through text") {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 2000; ++k) {
    double v;
    const std::uint64_t bits = rng();
    std::memcpy(&v, &bits, sizeof v);
    if (!std::isfinite(v)) continue;
    const Json back = Json::parse(Json(real_to_json(v)).dump());
    CHECK(std::bit_cast<std::uint64_t>(real_from_json(back, "v")) == bits);
  }
  CHECK(real_to_json(kInf) == "+inf");
  CHECK(real_to_json(-kInf) == "-inf");
  CHECK(real_from_json("+inf", "v") == kInf);
  CHECK(real_from_json("-inf", "v") == -kInf);
  CHECK_THROWS_AS(real_from_json("infinity", "v"), SchemaError);
  CHECK_THROWS_AS(real_from_json(Json(nullptr), "v"), SchemaError);
}

TEST_CASE("matrix encodings") {
  Matrix m(2, 3);
  m << 1, 2, 3, 4, -kInf, 6;
  CHECK(matrix_from_json(matrix_to_json(m), "m") == m);
  const Json nested = Json::parse(R"([[1, 2, 3], [4, "-inf", 6]])");
  CHECK(matrix_from_json(nested, "m") == m);
  CHECK_THROWS_AS(matrix_from_json(Json::parse("[[1, 2], [3]]"), "m"), SchemaError);
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows": 2, "cols": 2, "data": [1, 2, 3]})"), "m"), SchemaError);
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows": -1, "cols": 2, "data": []})"), "m"), SchemaError);
}

TEST_CASE("instance round trip") {
  const auto inst = parse_instance(base_instance());
  const Json again = instance_to_json(inst);
  const auto back = parse_instance(Json::parse(again.dump()));
  CHECK(back.market.alpha() == inst.market.alpha());
  CHECK(back.market.gamma() == inst.market.gamma());
  CHECK(back.market.types_x() == inst.market.types_x());
  CHECK(back.options.tol_stop == inst.options.tol_stop);
  CHECK(instance_to_json(back).dump() == again.dump());
}

TEST_CASE("instance schema errors") {
  auto missing = base_instance();
  missing.erase("alpha");
  CHECK_THROWS_AS(parse_instance(missing), SchemaError);

  auto negative = base_instance();
  negative["n"] = Json::parse("[-1.0, 2.0]");
  CHECK_THROWS_AS(parse_instance(negative), SchemaError);

  auto shape = base_instance();
  shape["gamma"] = Json::parse("[[1.0, 2.0]]");
  CHECK_THROWS_AS(parse_instance(shape), SchemaError);

  auto kind = base_instance();
  kind["welfare_h"] = Json::parse(R"({"kind": "probit"})");
  CHECK_THROWS_AS(parse_instance(kind), SchemaError);

  auto rule = base_instance();
  rule["options"]["update_rule"] = "random";
  CHECK_THROWS_AS(parse_instance(rule), SchemaError);

  auto tol = base_instance();
  tol["options"]["tol_stop"] = 0.0;
  CHECK_THROWS_AS(parse_instance(tol), SchemaError);

  CHECK_THROWS_AS(parse_instance(Json::parse("[1, 2]")), SchemaError);
  CHECK_THROWS_AS(read_json_file(golden + "does_not_exist.json"), SchemaError);
}

TEST_CASE("welfare specs") {
  auto doc = base_instance();
  doc["welfare_h"] = Json::parse(R"({"kind": "quadratic", "A": [[2,0,0,0],[0,2,0,0],[0,0,2,0],[0,0,0,2]]})");
  const auto inst = parse_instance(doc);
  const auto H = make_welfare(inst.welfare_h, inst.market, Side::cols);
  CHECK(H->kind() == "quadratic");
  CHECK(H->demand_cap()(0, 1) == 0.5);

  doc["welfare_g"] = Json::parse(R"({"kind": "grid", "cap": [[1,1],[1,1]],
      "conjugate": {"kind": "indicator", "axes": [[0,1],[0,1],[0,1],[0,1]], "points": [[0,0,0,0]]}})");
  const auto G = make_welfare(parse_instance(doc).welfare_g, inst.market, Side::rows);
  CHECK(G->kind() == "grid");
  CHECK(G->value(Matrix::Ones(2, 2)) == 0.0);
}

TEST_CASE("result files round trip exactly") {
  const auto s = solve(base_instance());
  REQUIRE(s.rep.pass);
  const auto out = outcome_from_json(Json::parse(s.result.dump(2)));
  CHECK(out.mu.mu() == s.out.mu.mu());
  CHECK(out.mu.mu_x0() == s.out.mu.mu_x0());
  CHECK(out.U == s.out.U);
  CHECK(out.tau_gamma == s.out.tau_gamma);
  CHECK(out.residuals == s.out.residuals);
}

TEST_CASE("infinite multipliers survive the result file") {
  auto doc = base_instance();
  doc["m"] = Json::parse("[1.5, 0.0]");
  const auto s = solve(doc);
  REQUIRE(s.rep.pass);
  CHECK(s.out.tau_alpha(0, 1) == kInf);
  const auto text = s.result.dump();
  CHECK(text.find("\"-inf\"") != std::string::npos);
  const auto out = outcome_from_json(Json::parse(text));
  CHECK(out.tau_alpha == s.out.tau_alpha);
  CHECK(out.U == s.out.U);
}

TEST_CASE("results are deterministic") {
  CHECK(solve(base_instance()).result.dump(2) == solve(base_instance()).result.dump(2));
}

TEST_CASE("partial results carry nulls") {
  auto doc = base_instance();
  doc["options"]["max_iter"] = 2;
  const auto inst = parse_instance(doc);
  const auto G = make_welfare(inst.welfare_g, inst.market, Side::rows);
  const auto H = make_welfare(inst.welfare_h, inst.market, Side::cols);
  const auto trace = run_da(*G, *H, inst.market.alpha(), inst.market.gamma(), inst.options);
  REQUIRE_FALSE(trace.converged);
  const Json j = result_to_json({&inst, &trace, nullptr, nullptr});
  CHECK(j["converged"] == false);
  CHECK(j["termination"] == "max_iter");
  CHECK(j["U"].is_null());
  CHECK(j["verification"].is_null());
  CHECK_THROWS_AS(outcome_from_json(j), SchemaError);
}

TEST_CASE("trace lines") {
  const auto s = solve(base_instance());
  std::ostringstream os;
  write_trace_jsonl(os, s.trace);
  std::istringstream is(os.str());
  std::string line;
  std::size_t k = 0;
  while (std::getline(is, line)) {
    const auto j = Json::parse(line);
    std::vector<std::string> keys;
    for (const auto& [key, v] : j.items()) keys.push_back(key);
    CHECK(keys == std::vector<std::string>{"k", "mu_A", "mu_P", "mu_T", "tau_P", "tau_T", "residual"});
    CHECK(j["k"] == k++);
  }
  CHECK(k == s.trace.iterations.size());
}

TEST_CASE("golden files") {
  const auto inst = load_instance(golden + "instance.json");
  const auto G = make_welfare(inst.welfare_g, inst.market, Side::rows);
  const auto H = make_welfare(inst.welfare_h, inst.market, Side::cols);
  const auto stored = outcome_from_json(read_json_file(golden + "result.json"));
  CHECK(verify_generalized_equilibrium(stored, *G, *H, inst.market.alpha(), inst.market.gamma(), 1e-6).pass);
  CHECK(solve(base_instance()).result.dump(2) + "\n" ==
        [&] {
          std::ifstream in(golden + "result.json");
          return std::string(std::istreambuf_iterator<char>(in), {});
        }());

  std::ifstream trace(golden + "trace.jsonl");
  std::string first;
  REQUIRE(std::getline(trace, first));
  CHECK(Json::parse(first)["k"] == 0);

  const auto grid = grid_from_json(read_json_file(golden + "grid.json"));
  CHECK(grid.dims() == 1);
  const auto conj = grid_from_json(read_json_file(golden + "conjugate.json"));
  CHECK(conj.value(std::size_t{0}) == 4.0);

  const auto report = read_json_file(golden + "report.json");
  CHECK(report["check"] == "duality");
  CHECK(report["pass"] == true);
}
