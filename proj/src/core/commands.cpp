#include "core/commands.hpp"

#include <json.hpp>

#include "core/einstein.hpp"
#include "core/jet.hpp"
#include "core/sampling.hpp"
#include "core/verify.hpp"

namespace fkm {

namespace {

using nlohmann::json;

json matrixJson(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json vectorJson(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

json adaptedTensorJson(const AdaptedTensor& t) {
  return {{"hh", matrixJson(t.hh)},
          {"hv", matrixJson(t.hv)},
          {"vh", matrixJson(t.vh)},
          {"vv", matrixJson(t.vv)}};
}

json conditionJson(const ConditionReport& c) {
  json j = {{"pass", c.pass}, {"worstDefect", c.worstDefect}};
  if (c.worstSample >= 0) j["worstSample"] = c.worstSample;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

const MetricConfig& requireMetric(const RunConfig& cfg) {
  if (!cfg.metric)
    raise(ErrorCode::Config, "this command requires a 'metric' section");
  return *cfg.metric;
}

const InitialConfig& requireInitial(const RunConfig& cfg) {
  if (!cfg.initial)
    raise(ErrorCode::Config, "this command requires an 'initial' section");
  return *cfg.initial;
}

CommandResult doValidate(const RunConfig& cfg, OutputFormat fmt) {
  if (fmt == OutputFormat::Csv)
    raise(ErrorCode::Config, "validate reports are JSON only");
  const MetricConfig& mc = requireMetric(cfg);
  FundamentalFunction F = buildMetric(mc, /*forValidation=*/true);

  long count = cfg.samples > 0 ? cfg.samples : 100;
  PointSampler sampler(cfg.seed, F.dimension());
  std::vector<PhasePoint> pts;
  pts.reserve(count);
  for (long i = 0; i < count; ++i) pts.push_back(sampler.sample());
  ValidationReport rep = validateFinsler(F, pts);

  json j;
  j["metric"] = {{"kind", mc.kind}, {"dimension", mc.dimension}};
  j["seed"] = cfg.seed;
  j["samples"] = rep.sampleCount;
  j["conditions"] = {{"positivity", conditionJson(rep.positivity)},
                     {"homogeneity", conditionJson(rep.homogeneity)},
                     {"definiteness", conditionJson(rep.definiteness)}};
  j["pass"] = rep.pass;

  CommandResult out;
  out.artifact = j.dump(2) + "\n";
  out.status = rep.pass ? RunStatus::Ok : RunStatus::CheckFailed;
  out.message = rep.pass ? "validate: all Finsler conditions hold"
                         : "validate: Finsler conditions violated";
  return out;
}

CommandResult doDerive(const RunConfig& cfg, OutputFormat fmt) {
  if (fmt == OutputFormat::Csv)
    raise(ErrorCode::Config, "derive dumps are JSON only");
  FundamentalFunction F = buildMetric(requireMetric(cfg));
  const InitialConfig& init = requireInitial(cfg);
  PhasePoint p{init.x, init.y};
  ModelParams m = cfg.model;

  ConnectionData cd = connectionAt(F, p);
  json j;
  j["point"] = {{"x", vectorJson(p.x)}, {"y", vectorJson(p.y)}};
  j["model"] = {{"a", m.a}};
  j["F"] = F.norm(p);
  j["energyDensity"] = energyDensity(F, p);
  j["metricTensor"] = matrixJson(cd.g);
  j["spray"] = vectorJson(cd.spray);
  j["nonlinearConnection"] = matrixJson(cd.N);
  j["sasakiLift"] = adaptedTensorJson(sasakiLift(F, p));
  j["homogeneousLift"] = adaptedTensorJson(homogeneousLift(F, p, m));
  j["homogeneousAlmostComplex"] =
      adaptedTensorJson(homogeneousAlmostComplex(F, p, m));
  j["theta"] = adaptedTensorJson(symplecticFormTheta(F, p));

  CommandResult out;
  out.artifact = j.dump(2) + "\n";
  out.message = "derive: geometric objects at the initial point";
  return out;
}

json trajectoryJson(const Trajectory& tr) {
  json j;
  j["meta"] = {{"systemId", tr.systemId},
               {"aborted", tr.aborted},
               {"abortReason", tr.abortReason}};
  j["samples"] = json::array();
  for (const auto& s : tr.samples) {
    json row = {{"t", s.t},
                {"x", vectorJson(s.p.x)},
                {"y", vectorJson(s.p.y)},
                {"stepSize", s.stepSize}};
    for (const auto& [k, v] : s.diagnostics) row[k] = v;
    j["samples"].push_back(row);
  }
  return j;
}

CommandResult doSimulate(const RunConfig& cfg, OutputFormat fmt) {
  FundamentalFunction F = buildMetric(requireMetric(cfg));
  const InitialConfig& init = requireInitial(cfg);
  if (!cfg.system)
    raise(ErrorCode::Config, "simulate requires a 'system' section");
  BuiltSystem sys = buildSystem(*cfg.system, F.dimension());
  ModelParams m = cfg.model;
  PhasePoint p0{init.x, init.y};

  FlowField flow;
  DiagnosticFn diag;
  if (sys.type == SystemType::Lagrange) {
    LagrangianSpec L = sys.lagrangian;
    flow = [L, F, m](double, const Eigen::VectorXd& u) {
      PhasePoint p = PhasePoint::fromFlat(u);
      Eigen::VectorXd ydot = elRhs(L, F, p, m);
      Eigen::VectorXd du(u.size());
      du << p.y, ydot;
      return du;
    };
    diag = [L, F, m](double, const PhasePoint& p) {
      Eigen::VectorXd ydot = elRhs(L, F, p, m);
      auto [fam1, fam2] = elResidual(L, F, {p, ydot}, m);
      std::map<std::string, double> d;
      d["norm_y"] = F.norm(p);
      d["energy"] = energyFunction(L, {p, ydot}, F, m);
      d["res_family2"] = fam2.norm();
      return d;
    };
  } else {
    HamiltonianSpec H = sys.hamiltonian;
    HamiltonMode mode = sys.mode;
    flow = [H, F, m, mode](double, const Eigen::VectorXd& u) {
      PhasePoint p = PhasePoint::fromFlat(u);
      auto [xd, yd] = hamiltonRhs(H, F, p, m, mode);
      Eigen::VectorXd du(u.size());
      du << xd, yd;
      return du;
    };
    diag = [H, F](double, const PhasePoint& p) {
      Eigen::VectorXd u = p.flat();
      std::map<std::string, double> d;
      d["norm_y"] = F.norm(p);
      d["energy"] = H.H->eval(std::span<const double>(u.data(), u.size()));
      d["res_family2"] = 0.0;
      return d;
    };
  }

  Trajectory tr = integrate(flow, p0, init.t0, init.t1, cfg.integrator, diag);
  tr.systemId = sys.id;

  CommandResult out;
  out.artifact = fmt == OutputFormat::Json ? trajectoryJson(tr).dump(2) + "\n"
                                           : trajectoryCsv(tr);
  if (tr.aborted) {
    out.status = RunStatus::DomainError;
    out.message = "simulate: " + tr.abortReason + " (partial trajectory)";
  } else {
    out.message = "simulate: integrated " +
                  std::to_string(tr.samples.size()) + " samples";
  }
  return out;
}

CommandResult doVerify(const RunConfig& cfg, OutputFormat fmt) {
  VerificationReport rep = runVerification(cfg);
  CommandResult out;
  out.artifact =
      fmt == OutputFormat::Csv ? verificationCsv(rep) : verificationJson(rep);
  out.status = rep.pass ? RunStatus::Ok : RunStatus::CheckFailed;
  long passed = 0;
  for (const auto& e : rep.entries) passed += e.pass ? 1 : 0;
  out.message = "verify: " + std::to_string(passed) + "/" +
                std::to_string(rep.entries.size()) + " invariants passed";
  return out;
}

json einsteinJson(const std::vector<SweepRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows)
    arr.push_back({{"A", r.A},
                   {"c", r.c},
                   {"t", r.t},
                   {"u", r.u},
                   {"v", r.v},
                   {"defect", r.defect},
                   {"domain_ok", r.domainOk}});
  return arr;
}

CommandResult doEinstein(const RunConfig& cfg, OutputFormat fmt) {
  const EinsteinConfig& ec = cfg.einstein;
  auto rows = einsteinSweep(ec.A, ec.c, ec.tMin, ec.tMax, ec.tStep);

  bool pass = true;
  for (const auto& r : rows)
    if (std::isfinite(r.defect) && r.defect > 1e-9) pass = false;

  CommandResult out;
  out.artifact = fmt == OutputFormat::Json
                     ? einsteinJson(rows).dump(2) + "\n"
                     : einsteinCsv(rows);
  out.status = pass ? RunStatus::Ok : RunStatus::CheckFailed;
  out.message = pass ? "einstein: corollary identity holds on the grid"
                     : "einstein: integrability defect above tolerance";
  return out;
}

}  // namespace

CommandResult runCommand(Command cmd, const RunConfig& cfg, OutputFormat fmt) {
  try {
    switch (cmd) {
      case Command::Validate:
        return doValidate(cfg, fmt);
      case Command::Derive:
        return doDerive(cfg, fmt);
      case Command::Simulate:
        return doSimulate(cfg, fmt);
      case Command::Verify:
        return doVerify(cfg, fmt);
      case Command::Einstein:
        return doEinstein(cfg, fmt);
    }
    raise(ErrorCode::Config, "unknown command");
  } catch (const Error& e) {
    CommandResult out;
    out.status = e.code() == ErrorCode::Config ? RunStatus::ConfigError
                                               : RunStatus::DomainError;
    out.message = e.what();
    return out;
  }
}

CommandResult runCommand(Command cmd, const std::string& configJson,
                         OutputFormat fmt) {
  RunConfig cfg;
  try {
    cfg = parseConfig(configJson);
  } catch (const Error& e) {
    CommandResult out;
    out.status = RunStatus::ConfigError;
    out.message = e.what();
    return out;
  }
  return runCommand(cmd, cfg, fmt);
}

}  // namespace fkm
