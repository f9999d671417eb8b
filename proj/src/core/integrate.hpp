#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "core/text.hpp"
#include "core/types.hpp"

namespace fkm {

enum class IntegratorMethod { RK4Fixed, RK45Adaptive, ImplicitMidpoint };

struct IntegratorConfig {
  IntegratorMethod method = IntegratorMethod::RK45Adaptive;
  double step = 0.01;            // fixed-step methods
  double tol = 1e-10;            // adaptive error control (abs and rel)
  double nullTolerance = 1e-9;   // |y| below this aborts the flow
};

/// Phase-space vector field: u = (x, y) flattened, returns du/dt.
using FlowField = std::function<Eigen::VectorXd(double t, const Eigen::VectorXd& u)>;

/// Per-sample diagnostics attached by the caller.
using DiagnosticFn =
    std::function<std::map<std::string, double>(double t, const PhasePoint&)>;

struct TrajectorySample {
  double t;
  PhasePoint p;
  std::map<std::string, double> diagnostics;
  double stepSize;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::string systemId;
  IntegratorConfig config;
  bool aborted = false;       // flow approached the null section
  std::string abortReason;
};

/// Integrates the flow over [t0, t1], sampling every accepted step.
/// Null-section approach stops integration and returns the partial
/// trajectory with `aborted` set; adaptive step underflow raises a
/// stiffness error.
Trajectory integrate(const FlowField& rhs, const PhasePoint& p0, double t0,
                     double t1, const IntegratorConfig& cfg,
                     const DiagnosticFn& diag = {});

/// max_t |q(p(t)) - q(p(t0))| over the trajectory samples.
double conservedQuantityDrift(
    const Trajectory& tr, const std::function<double(const PhasePoint&)>& q);

/// CSV with the exact column set
///   t, x^1..x^n, y^1..y^n, norm_y, energy, res_family2, step_size
/// (header mandatory, shortest round-trip decimals).
std::string trajectoryCsv(const Trajectory& tr);

}  // namespace fkm
