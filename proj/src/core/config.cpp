#include "core/config.hpp"

#include <json.hpp>
#include <set>

namespace fkm {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& msg) {
  raise(ErrorCode::Config, "config error at " + path + ": " + msg);
}

void requireKeys(const json& obj, const std::string& path,
                 const std::set<std::string>& allowed) {
  if (!obj.is_object()) bad(path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      bad(path + "." + it.key(), "unknown key (strict schema)");
}

double getNumber(const json& obj, const std::string& path,
                 const std::string& key, std::optional<double> dflt = {}) {
  if (!obj.contains(key)) {
    if (dflt) return *dflt;
    bad(path + "." + key, "required number missing");
  }
  if (!obj[key].is_number()) bad(path + "." + key, "expected a number");
  return obj[key].get<double>();
}

std::string getString(const json& obj, const std::string& path,
                      const std::string& key,
                      std::optional<std::string> dflt = {}) {
  if (!obj.contains(key)) {
    if (dflt) return *dflt;
    bad(path + "." + key, "required string missing");
  }
  if (!obj[key].is_string()) bad(path + "." + key, "expected a string");
  return obj[key].get<std::string>();
}

Eigen::VectorXd getVector(const json& obj, const std::string& path,
                          const std::string& key) {
  if (!obj.contains(key) || !obj[key].is_array())
    bad(path + "." + key, "expected an array of numbers");
  const json& arr = obj[key];
  Eigen::VectorXd v(arr.size());
  for (size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) bad(path + "." + key, "expected numbers");
    v[i] = arr[i].get<double>();
  }
  return v;
}

std::vector<double> getDoubleList(const json& obj, const std::string& path,
                                  const std::string& key,
                                  std::vector<double> dflt) {
  if (!obj.contains(key)) return dflt;
  Eigen::VectorXd v = getVector(obj, path, key);
  return std::vector<double>(v.data(), v.data() + v.size());
}

MetricConfig parseMetric(const json& j) {
  const std::string path = "metric";
  requireKeys(j, path, {"kind", "dimension", "parameters"});
  MetricConfig mc;
  mc.kind = getString(j, path, "kind");
  double dim = getNumber(j, path, "dimension", 2.0);
  if (dim < 1 || dim > 8 || dim != std::floor(dim))
    bad(path + ".dimension", "dimension must be an integer in [1, 8]");
  mc.dimension = static_cast<int>(dim);

  json params = j.contains("parameters") ? j["parameters"] : json::object();
  const std::string ppath = path + ".parameters";
  if (mc.kind == "euclidean" || mc.kind == "quartic") {
    requireKeys(params, ppath, {});
  } else if (mc.kind == "riemannian") {
    requireKeys(params, ppath, {"preset", "g"});
    if (params.contains("preset")) {
      mc.preset = getString(params, ppath, "preset");
      if (mc.preset != "polar")
        bad(ppath + ".preset", "unknown preset '" + mc.preset + "'");
      if (mc.dimension != 2)
        bad(path + ".dimension", "the polar preset is 2-dimensional");
    } else if (params.contains("g")) {
      const json& g = params["g"];
      if (!g.is_array()) bad(ppath + ".g", "expected an array of string rows");
      for (const auto& row : g) {
        std::vector<std::string> entries;
        if (!row.is_array()) bad(ppath + ".g", "expected rows of strings");
        for (const auto& e : row) {
          if (!e.is_string()) bad(ppath + ".g", "entries must be expressions");
          entries.push_back(e.get<std::string>());
        }
        mc.entries.push_back(std::move(entries));
      }
    } else {
      bad(ppath, "riemannian metric needs 'preset' or 'g'");
    }
  } else if (mc.kind == "randers") {
    requireKeys(params, ppath, {"b", "alpha", "allowInvalid"});
    mc.b = getVector(params, ppath, "b");
    if (params.contains("alpha")) {
      const json& a = params["alpha"];
      if (!a.is_array()) bad(ppath + ".alpha", "expected a matrix");
      Eigen::MatrixXd alpha(a.size(), a.size());
      for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_array() || a[i].size() != a.size())
          bad(ppath + ".alpha", "expected a square matrix");
        for (size_t k = 0; k < a[i].size(); ++k)
          alpha(i, k) = a[i][k].get<double>();
      }
      mc.alpha = alpha;
    }
    if (params.contains("allowInvalid")) {
      if (!params["allowInvalid"].is_boolean())
        bad(ppath + ".allowInvalid", "expected a boolean");
      mc.allowInvalid = params["allowInvalid"].get<bool>();
    }
  } else if (mc.kind == "custom") {
    requireKeys(params, ppath, {"F"});
    mc.fExpr = getString(params, ppath, "F");
  } else {
    bad(path + ".kind",
        "unknown metric kind '" + mc.kind +
            "' (euclidean | riemannian | randers | quartic | custom)");
  }
  return mc;
}

SystemConfig parseSystem(const json& j, int n) {
  const std::string path = "system";
  requireKeys(j, path,
              {"type", "masses", "gravity", "height", "field", "hamiltonMode"});
  SystemConfig sc;
  std::string type = getString(j, path, "type");
  if (type == "lagrange")
    sc.type = SystemType::Lagrange;
  else if (type == "hamilton")
    sc.type = SystemType::Hamilton;
  else
    bad(path + ".type", "expected 'lagrange' or 'hamilton'");

  if (j.contains("masses")) sc.masses = getVector(j, path, "masses");
  sc.gravity = getNumber(j, path, "gravity", 0.0);
  if (j.contains("height")) sc.height = getString(j, path, "height");
  if (j.contains("field")) sc.field = getString(j, path, "field");

  std::string mode = getString(j, path, "hamiltonMode", "plain");
  if (mode == "plain")
    sc.mode = HamiltonMode::Plain;
  else if (mode == "connection-corrected")
    sc.mode = HamiltonMode::ConnectionCorrected;
  else
    bad(path + ".hamiltonMode", "expected 'plain' or 'connection-corrected'");

  if (sc.type == SystemType::Hamilton && sc.field.empty())
    bad(path + ".field", "hamilton systems need a field expression");
  if (!sc.field.empty() && (sc.masses || j.contains("height")))
    bad(path, "give either a custom field or a structured system, not both");
  if (sc.masses && static_cast<int>(sc.masses->size()) != n)
    bad(path + ".masses", "length must equal the metric dimension");
  return sc;
}

InitialConfig parseInitial(const json& j, int n) {
  const std::string path = "initial";
  requireKeys(j, path, {"x", "y", "t0", "t1"});
  InitialConfig ic;
  ic.x = getVector(j, path, "x");
  ic.y = getVector(j, path, "y");
  if (static_cast<int>(ic.x.size()) != n || static_cast<int>(ic.y.size()) != n)
    bad(path, "x and y must have the metric dimension");
  if (ic.y.lpNorm<Eigen::Infinity>() == 0.0)
    bad(path + ".y",
        "initial fiber coordinate lies on the null section (y must be "
        "nonzero)");
  ic.t0 = getNumber(j, path, "t0", 0.0);
  ic.t1 = getNumber(j, path, "t1", 1.0);
  if (!(ic.t1 > ic.t0)) bad(path + ".t1", "t1 must exceed t0");
  return ic;
}

IntegratorConfig parseIntegrator(const json& j) {
  const std::string path = "integrator";
  requireKeys(j, path, {"method", "step", "tol", "nullTolerance"});
  IntegratorConfig ic;
  std::string method = getString(j, path, "method", "rk45-adaptive");
  if (method == "rk4-fixed")
    ic.method = IntegratorMethod::RK4Fixed;
  else if (method == "rk45-adaptive")
    ic.method = IntegratorMethod::RK45Adaptive;
  else if (method == "implicit-midpoint")
    ic.method = IntegratorMethod::ImplicitMidpoint;
  else
    bad(path + ".method",
        "expected rk4-fixed | rk45-adaptive | implicit-midpoint");
  ic.step = getNumber(j, path, "step", 0.01);
  ic.tol = getNumber(j, path, "tol", 1e-10);
  ic.nullTolerance = getNumber(j, path, "nullTolerance", 1e-9);
  if (!(ic.step > 0.0)) bad(path + ".step", "step must be positive");
  if (!(ic.tol > 0.0)) bad(path + ".tol", "tol must be positive");
  return ic;
}

EinsteinConfig parseEinstein(const json& j) {
  const std::string path = "einstein";
  requireKeys(j, path, {"A", "c", "tMin", "tMax", "tStep"});
  EinsteinConfig ec;
  ec.A = getDoubleList(j, path, "A", ec.A);
  ec.c = getDoubleList(j, path, "c", ec.c);
  ec.tMin = getNumber(j, path, "tMin", ec.tMin);
  ec.tMax = getNumber(j, path, "tMax", ec.tMax);
  ec.tStep = getNumber(j, path, "tStep", ec.tStep);
  for (double a : ec.A)
    if (!(a > 0.0)) bad(path + ".A", "A values must be positive");
  return ec;
}

}  // namespace

RunConfig parseConfig(const std::string& jsonText) {
  json j;
  try {
    j = json::parse(jsonText);
  } catch (const json::exception& e) {
    raise(ErrorCode::Config, std::string("config is not valid JSON: ") +
                                 e.what());
  }
  requireKeys(j, "$",
              {"metric", "model", "system", "initial", "integrator", "seed",
               "samples", "output", "einstein"});

  RunConfig cfg;
  if (j.contains("metric")) cfg.metric = parseMetric(j["metric"]);
  const int n = cfg.metric ? cfg.metric->dimension : 2;

  if (j.contains("model")) {
    requireKeys(j["model"], "model", {"a"});
    cfg.model.a = getNumber(j["model"], "model", "a", 1.0);
  }
  if (!(cfg.model.a > 0.0))
    raise(ErrorCode::Config,
          "config error at model.a: the homogeneity constant requires a > 0");

  if (j.contains("system")) cfg.system = parseSystem(j["system"], n);
  if (j.contains("initial")) cfg.initial = parseInitial(j["initial"], n);
  if (j.contains("integrator")) cfg.integrator = parseIntegrator(j["integrator"]);

  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer() || j["seed"].get<int64_t>() < 0)
      bad("seed", "expected a nonnegative integer");
    cfg.seed = j["seed"].get<uint64_t>();
  }
  if (j.contains("samples")) {
    if (!j["samples"].is_number_integer() || j["samples"].get<int64_t>() < 0)
      bad("samples", "expected a nonnegative integer");
    cfg.samples = j["samples"].get<long>();
  }
  if (j.contains("output")) {
    requireKeys(j["output"], "output", {"path"});
    cfg.outputPath = getString(j["output"], "output", "path", "");
  }
  if (j.contains("einstein")) cfg.einstein = parseEinstein(j["einstein"]);
  return cfg;
}

FundamentalFunction buildMetric(const MetricConfig& mc, bool forValidation) {
  if (mc.kind == "euclidean") return FundamentalFunction::euclidean(mc.dimension);
  if (mc.kind == "quartic") return FundamentalFunction::quartic(mc.dimension);
  if (mc.kind == "riemannian") {
    if (mc.preset == "polar") return FundamentalFunction::polar();
    return FundamentalFunction::riemannian(mc.dimension, mc.entries);
  }
  if (mc.kind == "randers")
    return FundamentalFunction::randers(mc.dimension, mc.b, mc.alpha,
                                        mc.allowInvalid || forValidation);
  if (mc.kind == "custom")
    return FundamentalFunction::custom(mc.dimension, mc.fExpr);
  raise(ErrorCode::Config, "unknown metric kind '" + mc.kind + "'");
}

BuiltSystem buildSystem(const SystemConfig& sc, int n) {
  BuiltSystem out;
  out.type = sc.type;
  out.mode = sc.mode;
  if (sc.type == SystemType::Hamilton) {
    out.hamiltonian.H = Expression::parse(sc.field, n);
    out.id = "hamilton:" + sc.field;
    return out;
  }
  if (!sc.field.empty()) {
    out.lagrangian.L = Expression::parse(sc.field, n);
    out.id = "lagrange:" + sc.field;
    return out;
  }
  Eigen::VectorXd masses =
      sc.masses ? *sc.masses : Eigen::VectorXd::Ones(n);
  FieldPtr height;
  if (!sc.height.empty()) {
    auto h = Expression::parse(sc.height, n);
    if (!h->baseOnly())
      raise(ErrorCode::Config,
            "config error at system.height: must be a function of x only");
    height = h;
  }
  out.lagrangian = lagrangianStandard(masses, sc.gravity, height);
  out.id = "lagrange:standard";
  return out;
}

}  // namespace fkm
