#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/dynamics.hpp"
#include "core/integrate.hpp"

namespace fkm {

struct MetricConfig {
  std::string kind = "euclidean";
  int dimension = 2;
  // riemannian
  std::vector<std::vector<std::string>> entries;
  std::string preset;
  // randers
  Eigen::VectorXd b;
  std::optional<Eigen::MatrixXd> alpha;
  bool allowInvalid = false;
  // custom
  std::string fExpr;
};

enum class SystemType { Lagrange, Hamilton };

struct SystemConfig {
  SystemType type = SystemType::Lagrange;
  std::optional<Eigen::VectorXd> masses;
  double gravity = 0.0;
  std::string height;  // expression in x, optional
  std::string field;   // custom L or H expression, optional
  HamiltonMode mode = HamiltonMode::Plain;
};

struct InitialConfig {
  Eigen::VectorXd x, y;
  double t0 = 0.0;
  double t1 = 1.0;
};

struct EinsteinConfig {
  std::vector<double> A{1.0, 2.0, 5.0};
  std::vector<double> c{-2.0, -1.0, -0.5, 0.5, 1.0};
  double tMin = 0.01;
  double tMax = 3.0;
  double tStep = 0.01;
};

/// Parsed run configuration. Unknown keys are rejected with their path;
/// defaults: a = 1, rk45-adaptive at tol 1e-10, seed 42, plain Hamilton
/// mode.
struct RunConfig {
  std::optional<MetricConfig> metric;
  ModelParams model;
  std::optional<SystemConfig> system;
  std::optional<InitialConfig> initial;
  IntegratorConfig integrator;
  uint64_t seed = 42;
  long samples = 0;  // 0: per-check defaults
  std::string outputPath;
  EinsteinConfig einstein;
};

RunConfig parseConfig(const std::string& jsonText);

/// Instantiates the configured metric. `forValidation` permits
/// parameter sets that violate the Finsler conditions (e.g. a Randers
/// covector of norm >= 1) so the validator can report on them.
FundamentalFunction buildMetric(const MetricConfig& mc,
                                bool forValidation = false);

struct BuiltSystem {
  SystemType type;
  LagrangianSpec lagrangian;    // type == Lagrange
  HamiltonianSpec hamiltonian;  // type == Hamilton
  HamiltonMode mode = HamiltonMode::Plain;
  std::string id;
};

BuiltSystem buildSystem(const SystemConfig& sc, int n);

}  // namespace fkm
