#include "matron/io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "matron/error.hpp"
#include "matron/grid_welfare.hpp"
#include "matron/quadratic_welfare.hpp"

namespace matron {

namespace {

const Json& require(const Json& j, const std::string& key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(what + ": missing \"" + key + "\"");
  return j.at(key);
}

std::vector<std::string> labels_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw SchemaError(what + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw SchemaError(what + " must be an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

Json labels_to_json(const std::vector<std::string>& v) {
  Json out = Json::array();
  for (const auto& s : v) out.push_back(s);
  return out;
}

std::vector<double> reals_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw SchemaError(what + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(real_from_json(e, what));
  return out;
}

GridFunction::Axes axes_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw SchemaError("axes must be a nonempty array of arrays");
  GridFunction::Axes axes;
  for (const auto& a : j) axes.push_back(reals_from_json(a, "axis"));
  return axes;
}

std::string rule_name(UpdateRule r) {
  return r == UpdateRule::subtractive ? "subtractive" : "alkan_gale";
}

Json options_to_json(const DAOptions& o) {
  Json j;
  j["tol_stop"] = o.tol_stop;
  j["max_iter"] = o.max_iter;
  j["update_rule"] = rule_name(o.update_rule);
  j["seed"] = o.seed;
  j["integrity_limit"] = o.integrity_limit;
  return j;
}

DAOptions options_from_json(const Json& j) {
  DAOptions o;
  if (j.is_null()) return o;
  if (!j.is_object()) throw SchemaError("options must be an object");
  try {
    if (j.contains("tol_stop")) o.tol_stop = j.at("tol_stop").get<double>();
    if (j.contains("max_iter")) o.max_iter = j.at("max_iter").get<std::size_t>();
    if (j.contains("seed")) o.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("integrity_limit")) o.integrity_limit = j.at("integrity_limit").get<double>();
    if (j.contains("update_rule")) {
      const auto r = j.at("update_rule").get<std::string>();
      if (r == "subtractive") {
        o.update_rule = UpdateRule::subtractive;
      } else if (r == "alkan_gale") {
        o.update_rule = UpdateRule::alkan_gale;
      } else {
        throw SchemaError("unknown update_rule \"" + r + "\"");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("options: ") + e.what());
  }
  if (!(o.tol_stop > 0.0)) throw SchemaError("options.tol_stop must be positive");
  return o;
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << doc.dump(2) << '\n';
}

Json real_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  if (std::isnan(v)) return nullptr;
  return v;
}

double real_from_json(const Json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "+inf" || s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw SchemaError(what + ": expected a number, \"+inf\" or \"-inf\"");
}

Json matrix_to_json(const Matrix& m) {
  Json data = Json::array();
  for (Eigen::Index x = 0; x < m.rows(); ++x) {
    for (Eigen::Index y = 0; y < m.cols(); ++y) data.push_back(real_to_json(m(x, y)));
  }
  Json j;
  j["rows"] = static_cast<std::size_t>(m.rows());
  j["cols"] = static_cast<std::size_t>(m.cols());
  j["data"] = std::move(data);
  return j;
}

Matrix matrix_from_json(const Json& j, const std::string& what) {
  if (j.is_array()) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    Eigen::Index cols = 0;
    if (rows > 0) {
      if (!j[0].is_array()) throw SchemaError(what + ": nested rows expected");
      cols = static_cast<Eigen::Index>(j[0].size());
    }
    Matrix m(rows, cols);
    for (Eigen::Index x = 0; x < rows; ++x) {
      const auto& row = j[static_cast<std::size_t>(x)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
        throw SchemaError(what + ": ragged matrix");
      }
      for (Eigen::Index y = 0; y < cols; ++y) m(x, y) = real_from_json(row[static_cast<std::size_t>(y)], what);
    }
    return m;
  }
  const auto& r = require(j, "rows", what);
  const auto& c = require(j, "cols", what);
  if (!r.is_number_integer() || !c.is_number_integer() || r.get<long long>() < 0 ||
      c.get<long long>() < 0) {
    throw SchemaError(what + ": rows/cols must be nonnegative integers");
  }
  const auto data = reals_from_json(require(j, "data", what), what);
  const auto rows = r.get<Eigen::Index>();
  const auto cols = c.get<Eigen::Index>();
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw SchemaError(what + ": data length does not match rows*cols");
  }
  Matrix m(rows, cols);
  for (Eigen::Index x = 0; x < rows; ++x) {
    for (Eigen::Index y = 0; y < cols; ++y) m(x, y) = data[static_cast<std::size_t>(x * cols + y)];
  }
  return m;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(real_to_json(v(i)));
  return out;
}

Vector vector_from_json(const Json& j, const std::string& what) {
  const auto vals = reals_from_json(j, what);
  return Eigen::Map<const Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

Json grid_to_json(const GridFunction& f) {
  Json axes = Json::array();
  for (const auto& a : f.axes()) axes.push_back(a);
  Json values = Json::array();
  for (double v : f.values()) values.push_back(real_to_json(v));
  Json j;
  j["axes"] = std::move(axes);
  j["values"] = std::move(values);
  j["convex"] = f.convex();
  return j;
}

GridFunction grid_from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("grid function must be an object");
  auto axes = axes_from_json(require(j, "axes", "grid function"));
  const bool convex = j.contains("convex") && j.at("convex").is_boolean() && j.at("convex").get<bool>();
  const std::string kind = j.contains("kind") ? j.at("kind").get<std::string>() : "table";
  try {
    if (kind == "table") {
      return GridFunction(std::move(axes), reals_from_json(require(j, "values", "grid function"), "values"),
                          convex);
    }
    if (kind == "quadratic") {
      const Matrix A = matrix_from_json(require(j, "A", "quadratic grid"), "A");
      const auto d = static_cast<Eigen::Index>(axes.size());
      if (A.rows() != d || A.cols() != d) throw SchemaError("quadratic grid: A must be d x d");
      Vector c = Vector::Zero(d);
      if (j.contains("center")) c = vector_from_json(j.at("center"), "center");
      if (c.size() != d) throw SchemaError("quadratic grid: center dimension");
      return GridFunction::sample(
          std::move(axes),
          [&](std::span<const double> q) {
            const Vector v = Eigen::Map<const Vector>(q.data(), d) - c;
            return 0.5 * v.dot(A * v);
          },
          true);
    }
    if (kind == "indicator") {
      const auto pts = points_from_json(require(j, "points", "indicator grid"), "points");
      return GridFunction::indicator(std::move(axes),
                                     [&](std::span<const double> p) { return pts.contains(p); });
    }
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(std::string("grid function: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("grid function: ") + e.what());
  }
  throw SchemaError("unknown grid function kind \"" + kind + "\"");
}

PointSet points_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw SchemaError(what + " must be an array of points");
  std::vector<PointSet::Point> pts;
  for (const auto& p : j) pts.push_back(reals_from_json(p, what));
  try {
    return PointSet(std::move(pts));
  } catch (const Error& e) {
    throw SchemaError(what + ": " + e.what());
  }
}

Json report_to_json(const OrderReport& rep) {
  Json j;
  j["check"] = rep.check;
  j["pass"] = rep.pass;
  j["worst_violation"] = real_to_json(rep.worst_violation);
  j["threshold"] = real_to_json(rep.threshold);
  Json w = Json::object();
  for (const auto& [k, v] : rep.witness) {
    Json arr = Json::array();
    for (double x : v) arr.push_back(real_to_json(x));
    w[k] = std::move(arr);
  }
  j["witness"] = std::move(w);
  j["pairs_checked"] = rep.pairs_checked;
  j["seed"] = rep.seed;
  j["exhaustive"] = rep.exhaustive;
  if (!rep.note.empty()) j["note"] = rep.note;
  return j;
}

Json duality_to_json(const DualityReport& rep) {
  Json j;
  j["check"] = "duality";
  j["pass"] = rep.consistent;
  j["agree"] = rep.agree;
  j["band"] = rep.band;
  j["q_side"] = report_to_json(rep.q_side);
  j["p_side"] = report_to_json(rep.p_side);
  return j;
}

InstanceFile parse_instance(const Json& doc) {
  if (!doc.is_object()) throw SchemaError("instance must be a JSON object");
  try {
    auto tx = labels_from_json(require(doc, "types_x", "instance"), "types_x");
    auto ty = labels_from_json(require(doc, "types_y", "instance"), "types_y");
    Vector n = vector_from_json(require(doc, "n", "instance"), "n");
    Vector m = vector_from_json(require(doc, "m", "instance"), "m");
    Matrix alpha = matrix_from_json(require(doc, "alpha", "instance"), "alpha");
    Matrix gamma = matrix_from_json(require(doc, "gamma", "instance"), "gamma");
    // An empty side gives 0 x k matrices that nested arrays cannot express.
    if (alpha.size() == 0) alpha.resize(n.size(), m.size());
    if (gamma.size() == 0) gamma.resize(n.size(), m.size());
    Vector a0 = doc.contains("alpha_x0") ? vector_from_json(doc.at("alpha_x0"), "alpha_x0")
                                         : Vector(Vector::Zero(n.size()));
    Vector g0 = doc.contains("gamma_0y") ? vector_from_json(doc.at("gamma_0y"), "gamma_0y")
                                         : Vector(Vector::Zero(m.size()));
    MarketInstance market(std::move(tx), std::move(ty), std::move(n), std::move(m), std::move(alpha),
                          std::move(a0), std::move(gamma), std::move(g0));
    Json wg = doc.contains("welfare_g") ? doc.at("welfare_g") : Json{{"kind", "logit"}};
    Json wh = doc.contains("welfare_h") ? doc.at("welfare_h") : Json{{"kind", "logit"}};
    DAOptions opts = options_from_json(doc.contains("options") ? doc.at("options") : Json());
    InstanceFile out{std::move(market), std::move(wg), std::move(wh), opts};
    // Validate the welfare specs eagerly.
    make_welfare(out.welfare_g, out.market, Side::rows);
    make_welfare(out.welfare_h, out.market, Side::cols);
    return out;
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(e.what());
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(e.what());
  }
}

InstanceFile load_instance(const std::string& path) { return parse_instance(read_json_file(path)); }

Json instance_to_json(const InstanceFile& inst) {
  const auto& mk = inst.market;
  Json j;
  j["types_x"] = labels_to_json(mk.types_x());
  j["types_y"] = labels_to_json(mk.types_y());
  j["n"] = vector_to_json(mk.n());
  j["m"] = vector_to_json(mk.m());
  j["alpha"] = matrix_to_json(mk.alpha());
  j["alpha_x0"] = vector_to_json(mk.alpha_x0());
  j["gamma"] = matrix_to_json(mk.gamma());
  j["gamma_0y"] = vector_to_json(mk.gamma_0y());
  j["welfare_g"] = inst.welfare_g;
  j["welfare_h"] = inst.welfare_h;
  j["options"] = options_to_json(inst.options);
  return j;
}

WelfarePtr make_welfare(const Json& spec, const MarketInstance& market, Side side) {
  const std::string kind = require(spec, "kind", "welfare").get<std::string>();
  const Vector& masses = side == Side::rows ? market.n() : market.m();
  const Eigen::Index other = side == Side::rows ? market.num_y() : market.num_x();
  Matrix default_cap(market.num_x(), market.num_y());
  for (Eigen::Index x = 0; x < market.num_x(); ++x) {
    for (Eigen::Index y = 0; y < market.num_y(); ++y) {
      default_cap(x, y) = side == Side::rows ? market.n()(x) : market.m()(y);
    }
  }
  auto cap_of = [&]() {
    return spec.contains("cap") ? matrix_from_json(spec.at("cap"), "cap") : default_cap;
  };
  if (kind == "logit") {
    return std::make_shared<LogitWelfare>(masses, other, side,
                                          side == Side::rows ? market.alpha_x0() : market.gamma_0y());
  }
  if (kind == "quadratic") {
    return std::make_shared<QuadraticWelfare>(matrix_from_json(require(spec, "A", "quadratic welfare"), "A"),
                                              cap_of(), side);
  }
  if (kind == "grid") {
    return std::make_shared<GridWelfare>(grid_from_json(require(spec, "conjugate", "grid welfare")),
                                         cap_of(), side);
  }
  throw SchemaError("unknown welfare kind \"" + kind + "\"");
}

Json result_to_json(const SolveRecord& rec) {
  const auto& inst = *rec.instance;
  const auto& trace = *rec.trace;
  Json j;
  j["tool_version"] = kToolVersion;
  j["seed"] = trace.options.seed;
  j["converged"] = trace.converged;
  j["termination"] = trace.termination;
  j["iterations"] = trace.iterations.size();
  j["options"] = options_to_json(trace.options);
  j["types_x"] = labels_to_json(inst.market.types_x());
  j["types_y"] = labels_to_json(inst.market.types_y());
  if (rec.outcome != nullptr) {
    const auto& out = *rec.outcome;
    j["mu"] = matrix_to_json(out.mu.mu());
    j["mu_x0"] = vector_to_json(out.mu.mu_x0());
    j["mu_0y"] = vector_to_json(out.mu.mu_0y());
    j["U"] = matrix_to_json(out.U);
    j["V"] = matrix_to_json(out.V);
    j["tau_alpha"] = matrix_to_json(out.tau_alpha);
    j["tau_gamma"] = matrix_to_json(out.tau_gamma);
    Json res = Json::object();
    for (const auto& [k, v] : out.residuals) res[k] = real_to_json(v);
    j["residuals"] = std::move(res);
  } else {
    // Partial result: last proposal, no certified utilities.
    const Matrix mu = trace.iterations.empty()
                          ? Matrix::Zero(inst.market.num_x(), inst.market.num_y())
                          : trace.iterations.back().mu_P;
    j["mu"] = matrix_to_json(mu);
    j["mu_x0"] = nullptr;
    j["mu_0y"] = nullptr;
    j["U"] = nullptr;
    j["V"] = nullptr;
    j["tau_alpha"] = nullptr;
    j["tau_gamma"] = nullptr;
    Json res = Json::object();
    res["trace_residual"] = trace.iterations.empty() ? Json(nullptr) : real_to_json(trace.iterations.back().residual);
    j["residuals"] = std::move(res);
  }
  if (rec.verification != nullptr) {
    const auto& v = *rec.verification;
    Json vj;
    vj["pass"] = v.pass;
    vj["stability"] = real_to_json(v.stability);
    vj["fenchel_G"] = real_to_json(v.fenchel_G);
    vj["fenchel_H"] = real_to_json(v.fenchel_H);
    j["verification"] = std::move(vj);
  } else {
    j["verification"] = nullptr;
  }
  return j;
}

EquilibriumOutcome outcome_from_json(const Json& doc) {
  try {
    for (const char* key : {"mu", "mu_x0", "mu_0y", "U", "V", "tau_alpha", "tau_gamma"}) {
      if (require(doc, key, "result").is_null()) {
        throw SchemaError(std::string("result has no certified \"") + key + "\"");
      }
    }
    EquilibriumOutcome out{Matching(matrix_from_json(doc.at("mu"), "mu"),
                                    vector_from_json(doc.at("mu_x0"), "mu_x0"),
                                    vector_from_json(doc.at("mu_0y"), "mu_0y")),
                           matrix_from_json(doc.at("U"), "U"),
                           matrix_from_json(doc.at("V"), "V"),
                           matrix_from_json(doc.at("tau_alpha"), "tau_alpha"),
                           matrix_from_json(doc.at("tau_gamma"), "tau_gamma"),
                           {}};
    if (doc.contains("residuals") && doc.at("residuals").is_object()) {
      for (const auto& [k, v] : doc.at("residuals").items()) {
        if (!v.is_null()) out.residuals[k] = real_from_json(v, k);
      }
    }
    return out;
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(e.what());
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(e.what());
  }
}

void write_trace_jsonl(std::ostream& os, const DATrace& trace) {
  for (const auto& it : trace.iterations) {
    Json j;
    j["k"] = it.k;
    j["mu_A"] = matrix_to_json(it.mu_A);
    j["mu_P"] = matrix_to_json(it.mu_P);
    j["mu_T"] = matrix_to_json(it.mu_T);
    j["tau_P"] = it.tau_P.size() ? matrix_to_json(it.tau_P) : Json(nullptr);
    j["tau_T"] = it.tau_T.size() ? matrix_to_json(it.tau_T) : Json(nullptr);
    j["residual"] = real_to_json(it.residual);
    os << j.dump() << '\n';
  }
}

}  // namespace matron
