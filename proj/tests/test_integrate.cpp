#include <doctest.h>

#include "core/dynamics.hpp"
#include "core/expr.hpp"
#include "core/integrate.hpp"

using namespace fkm;

namespace {

FlowField elFlow(const LagrangianSpec& L, const FundamentalFunction& F,
                 ModelParams m) {
  return [L, F, m](double, const Eigen::VectorXd& u) {
    PhasePoint p = PhasePoint::fromFlat(u);
    Eigen::VectorXd ydot = elRhs(L, F, p, m);
    Eigen::VectorXd du(u.size());
    du << p.y, ydot;
    return du;
  };
}

FlowField hamiltonFlow(const HamiltonianSpec& H, const FundamentalFunction& F,
                       ModelParams m) {
  return [H, F, m](double, const Eigen::VectorXd& u) {
    PhasePoint p = PhasePoint::fromFlat(u);
    auto [xd, yd] = hamiltonRhs(H, F, p, m, HamiltonMode::Plain);
    Eigen::VectorXd du(u.size());
    du << xd, yd;
    return du;
  };
}

}  // namespace

TEST_CASE("free particle moves on an exact straight line") {
  FundamentalFunction E = FundamentalFunction::euclidean(2);
  LagrangianSpec L = lagrangianStandard(Eigen::VectorXd::Ones(2), 0.0, {});
  PhasePoint p0{Eigen::VectorXd::Zero(2),
                (Eigen::VectorXd(2) << 1.0, 0.0).finished()};
  IntegratorConfig cfg;
  cfg.method = IntegratorMethod::RK4Fixed;
  cfg.step = 0.01;
  Trajectory tr = integrate(elFlow(L, E, ModelParams{1.0}), p0, 0.0, 1.0, cfg);
  REQUIRE(tr.samples.size() == 101);
  CHECK(tr.samples.back().t == doctest::Approx(1.0));
  CHECK(std::abs(tr.samples.back().p.x[0] - 1.0) < 1e-12);
  CHECK(std::abs(tr.samples.back().p.x[1]) < 1e-12);
  for (const auto& s : tr.samples) {
    CHECK(s.p.y[0] == 1.0);  // y never changes, bitwise
    CHECK(s.p.y[1] == 0.0);
  }
  // constant-of-motion drift on |y|
  CHECK(conservedQuantityDrift(tr, [](const PhasePoint& p) {
          return p.y.norm();
        }) == 0.0);
}

TEST_CASE("harmonic hamiltonian conserves H to 1e-8 over [0,10]") {
  FundamentalFunction E = FundamentalFunction::euclidean(1);
  HamiltonianSpec H{Expression::parse("0.5*(x1^2 + y1^2)", 1)};
  PhasePoint p0{Eigen::VectorXd::Zero(1),
                (Eigen::VectorXd(1) << 1.0).finished()};
  IntegratorConfig cfg;  // rk45 tol 1e-10 default
  Trajectory tr =
      integrate(hamiltonFlow(H, E, ModelParams{1.0}), p0, 0.0, 10.0, cfg);
  CHECK_FALSE(tr.aborted);
  auto hval = [&](const PhasePoint& p) {
    Eigen::VectorXd u = p.flat();
    return H.H->eval(std::span<const double>(u.data(), u.size()));
  };
  CHECK(conservedQuantityDrift(tr, hval) / 0.5 < 1e-8);
  CHECK(tr.samples.back().t == 10.0);
}

TEST_CASE("rk4 endpoint error contracts at fourth order") {
  FundamentalFunction E = FundamentalFunction::euclidean(2);
  LagrangianSpec L = lagrangianStandard(Eigen::VectorXd::Ones(2), 9.8,
                                        Expression::parse("x2", 2));
  PhasePoint p0{Eigen::VectorXd::Zero(2),
                (Eigen::VectorXd(2) << 3.0, 4.0).finished()};
  auto endpoint = [&](double h) {
    IntegratorConfig cfg;
    cfg.method = IntegratorMethod::RK4Fixed;
    cfg.step = h;
    return integrate(elFlow(L, E, ModelParams{1.0}), p0, 0.0, 2.0, cfg)
        .samples.back()
        .p.flat();
  };
  double e1 = (endpoint(0.2) - endpoint(0.1)).norm();
  double e2 = (endpoint(0.1) - endpoint(0.05)).norm();
  double ratio = e1 / e2;
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("implicit midpoint integrates and converges at second order") {
  FundamentalFunction E = FundamentalFunction::euclidean(2);
  LagrangianSpec L = lagrangianStandard(Eigen::VectorXd::Ones(2), 9.8,
                                        Expression::parse("x2", 2));
  PhasePoint p0{Eigen::VectorXd::Zero(2),
                (Eigen::VectorXd(2) << 3.0, 4.0).finished()};
  auto endpoint = [&](double h) {
    IntegratorConfig cfg;
    cfg.method = IntegratorMethod::ImplicitMidpoint;
    cfg.step = h;
    return integrate(elFlow(L, E, ModelParams{1.0}), p0, 0.0, 1.0, cfg)
        .samples.back()
        .p.flat();
  };
  double e1 = (endpoint(0.1) - endpoint(0.05)).norm();
  double e2 = (endpoint(0.05) - endpoint(0.025)).norm();
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("null-section approach aborts with a partial trajectory") {
  // Hamilton flow of H = x1 in one dimension: ydot = -|y|, exponential
  // decay toward the null section.
  FundamentalFunction E = FundamentalFunction::euclidean(1);
  HamiltonianSpec H{Expression::parse("x1", 1)};
  PhasePoint p0{Eigen::VectorXd::Zero(1),
                (Eigen::VectorXd(1) << 1.0).finished()};
  IntegratorConfig cfg;
  cfg.nullTolerance = 1e-6;
  Trajectory tr =
      integrate(hamiltonFlow(H, E, ModelParams{1.0}), p0, 0.0, 30.0, cfg);
  CHECK(tr.aborted);
  CHECK(tr.abortReason.find("null section") != std::string::npos);
  CHECK(tr.samples.back().t < 30.0);
  CHECK(tr.samples.back().p.y[0] < 1e-6);
  CHECK(tr.samples.size() > 10);
}

TEST_CASE("stiffness error on a finite-time blowup") {
  // L = |y|^2/2 + sqrt(2 - x1): the force diverges as x1 -> 2.
  FundamentalFunction E = FundamentalFunction::euclidean(1);
  LagrangianSpec L{Expression::parse("0.5*y1^2 + sqrt(2 - x1)", 1), {}};
  PhasePoint p0{(Eigen::VectorXd(1) << 1.0).finished(),
                (Eigen::VectorXd(1) << 1.0).finished()};
  IntegratorConfig cfg;
  try {
    integrate(elFlow(L, E, ModelParams{1.0}), p0, 0.0, 5.0, cfg);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Stiffness);
  }
}

TEST_CASE("integration rejects bad spans and records diagnostics") {
  FundamentalFunction E = FundamentalFunction::euclidean(1);
  HamiltonianSpec H{Expression::parse("0.5*(x1^2+y1^2)", 1)};
  PhasePoint p0{Eigen::VectorXd::Zero(1),
                (Eigen::VectorXd(1) << 1.0).finished()};
  IntegratorConfig cfg;
  CHECK_THROWS_AS(
      integrate(hamiltonFlow(H, E, ModelParams{1.0}), p0, 1.0, 1.0, cfg),
      Error);

  DiagnosticFn diag = [&](double, const PhasePoint& p) {
    std::map<std::string, double> d;
    d["norm_y"] = p.y.norm();
    d["energy"] = 0.5 * (p.x.squaredNorm() + p.y.squaredNorm());
    d["res_family2"] = 0.0;
    return d;
  };
  cfg.method = IntegratorMethod::RK4Fixed;
  cfg.step = 0.25;
  Trajectory tr =
      integrate(hamiltonFlow(H, E, ModelParams{1.0}), p0, 0.0, 1.0, cfg, diag);
  std::string csv = trajectoryCsv(tr);
  CHECK(csv.rfind("t,x1,y1,norm_y,energy,res_family2,step_size\n", 0) == 0);
  // header + 5 samples
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
}
