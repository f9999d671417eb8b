#include "core/verify.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <cmath>
#include <functional>
#include <json.hpp>

#include "core/einstein.hpp"
#include "core/jet.hpp"
#include "core/sampling.hpp"

namespace fkm {

namespace {

struct Builtin {
  std::string name;
  FundamentalFunction F;
};

std::vector<Builtin> builtins() {
  return {
      {"euclidean", FundamentalFunction::euclidean(2)},
      {"polar", FundamentalFunction::polar()},
      {"randers", FundamentalFunction::randers(
                      2, (Eigen::VectorXd(2) << 0.5, 0.0).finished())},
      {"quartic", FundamentalFunction::quartic(2)},
  };
}

constexpr double kAs[] = {0.5, 1.0, 2.0};

/// Hard-coded Levi-Civita symbols of ds^2 = dr^2 + r^2 dtheta^2; the
/// oracle side of the connection consistency check.
Eigen::MatrixXd polarChristoffelN(const PhasePoint& p) {
  double r = p.x[0];
  Eigen::MatrixXd N(2, 2);
  // N^i_j = Gamma^i_jk y^k; nonzero symbols: G^r_tt = -r, G^t_rt = 1/r.
  N(0, 0) = 0.0;
  N(0, 1) = -r * p.y[1];
  N(1, 0) = p.y[1] / r;
  N(1, 1) = p.y[0] / r;
  return N;
}

struct Suite {
  uint64_t seed;
  long samplesOverride;
  std::vector<InvariantResult> results;

  long count(long dflt) const {
    return samplesOverride > 0 ? samplesOverride : dflt;
  }

  uint64_t entrySeed() const {
    return seed ^ (0x9E3779B97F4A7C15ULL * (results.size() + 1));
  }

  void add(const std::string& name, long samples, double maxDefect,
           double tolerance) {
    results.push_back(
        {name, samples, maxDefect, tolerance, maxDefect <= tolerance});
  }
};

// ---- jetcalc ----

void fdDefectEntries(Suite& s) {
  auto bs = builtins();
  long perField = s.count(100);
  double worst1 = 0.0, worst23 = 0.0;
  PointSampler sampler(s.entrySeed(), 2);
  for (const auto& b : bs) {
    for (const ScalarField* f : {&b.F.F(), &b.F.F2()}) {
      for (long i = 0; i < perField; ++i) {
        PhasePoint p = sampler.sample();
        worst1 = std::max(worst1, finiteDifferenceDefect(*f, p, 1, 1e-5));
        worst23 = std::max(worst23, finiteDifferenceDefect(*f, p, 2, 1e-4));
        worst23 = std::max(worst23, finiteDifferenceDefect(*f, p, 3, 1e-3));
      }
    }
  }
  s.add("jetcalc/fd-defect-order1", perField * 8, worst1, 1e-6);
  s.add("jetcalc/fd-defect-order23", perField * 8, worst23, 1e-4);
}

void jetSymmetryEntry(Suite& s) {
  auto bs = builtins();
  long per = s.count(100);
  PointSampler sampler(s.entrySeed(), 2);
  double worst = 0.0;
  for (const auto& b : bs)
    for (long i = 0; i < per; ++i) {
      Jet3 jet = evaluateJet(b.F.F2(), sampler.sample(), 3);
      worst = std::max(worst,
                       (jet.hess - jet.hess.transpose()).cwiseAbs().maxCoeff());
      for (int a = 0; a < jet.dim; ++a)
        for (int c = 0; c < jet.dim; ++c)
          for (int d = 0; d < jet.dim; ++d) {
            double base = jet.thirdAt(a, c, d);
            worst = std::max(worst, std::abs(base - jet.thirdAt(a, d, c)));
            worst = std::max(worst, std::abs(base - jet.thirdAt(c, a, d)));
            worst = std::max(worst, std::abs(base - jet.thirdAt(d, c, a)));
          }
    }
  s.add("jetcalc/jet-symmetry", per * 4, worst, 0.0);
}

// ---- finsler-core ----

void metricEntries(Suite& s) {
  auto bs = builtins();
  long per = s.count(100);
  PointSampler sampler(s.entrySeed(), 2);
  double worstHom = 0.0, worstNorm = 0.0, worstEuler = 0.0, worstSym = 0.0;
  for (const auto& b : bs)
    for (long i = 0; i < per; ++i) {
      PhasePoint p = sampler.sample();
      Eigen::MatrixXd g = metricTensor(b.F, p).g;
      worstSym = std::max(worstSym,
                          (g - g.transpose()).cwiseAbs().maxCoeff());
      for (double l : {0.5, 2.0, 10.0}) {
        PhasePoint q{p.x, l * p.y};
        Eigen::MatrixXd gl = metricTensor(b.F, q).g;
        worstHom = std::max(
            worstHom, (gl - g).cwiseAbs().maxCoeff() /
                          (1.0 + g.cwiseAbs().maxCoeff()));
      }
      double f = b.F.norm(p);
      Eigen::VectorXd yl = lowerIndex(b.F, p);
      worstNorm = std::max(worstNorm, std::abs(yl.dot(p.y) - f * f));
      Jet3 jf = evaluateJet(b.F.F(), p, 1);
      worstEuler =
          std::max(worstEuler, std::abs(jf.grad.tail(2).dot(p.y) - f));
    }
  s.add("finsler/metric-homogeneity", per * 4, worstHom, 1e-9);
  s.add("finsler/norm-identity", per * 4, worstNorm, 1e-10);
  s.add("finsler/euler-relation", per * 4, worstEuler, 1e-10);
  s.add("finsler/metric-symmetry", per * 4, worstSym, 0.0);
}

// ---- connection ----

void connectionEntries(Suite& s) {
  auto bs = builtins();
  long per = s.count(50);
  PointSampler sampler(s.entrySeed(), 2);

  double worstDual = 0.0, worstHom = 0.0, worstFlat = 0.0;
  for (const auto& b : bs)
    for (long i = 0; i < per; ++i) {
      PhasePoint p = sampler.sample();
      ConnectionData cd = connectionAt(b.F, p);
      AdaptedFrame fr{cd.N};
      Eigen::MatrixXd pairing = fr.coframe() * fr.frame();
      worstDual = std::max(
          worstDual,
          (pairing - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff());
      for (double l : {0.5, 2.0}) {
        PhasePoint q{p.x, l * p.y};
        ConnectionData cl = connectionAt(b.F, q);
        worstHom = std::max(
            worstHom, (cl.spray - l * l * cd.spray).cwiseAbs().maxCoeff() /
                          (1.0 + (l * l * cd.spray).cwiseAbs().maxCoeff()));
        worstHom = std::max(worstHom,
                            (cl.N - l * cd.N).cwiseAbs().maxCoeff() /
                                (1.0 + (l * cd.N).cwiseAbs().maxCoeff()));
      }
      if (b.name != "polar") {
        worstFlat = std::max(worstFlat, cd.spray.cwiseAbs().maxCoeff());
        worstFlat = std::max(worstFlat, cd.N.cwiseAbs().maxCoeff());
      }
    }

  long perOracle = s.count(100);
  PointSampler polarSampler(s.entrySeed() + 1, 2);
  FundamentalFunction polar = FundamentalFunction::polar();
  double worstOracle = 0.0;
  for (long i = 0; i < perOracle; ++i) {
    PhasePoint p = polarSampler.sample();
    Eigen::MatrixXd N = nonlinearConnection(polar, p);
    worstOracle = std::max(
        worstOracle, (N - polarChristoffelN(p)).cwiseAbs().maxCoeff());
  }

  s.add("connection/frame-duality", per * 4, worstDual, 0.0);
  s.add("connection/spray-connection-homogeneity", per * 4, worstHom, 1e-9);
  s.add("connection/polar-christoffel", perOracle, worstOracle, 1e-9);
  s.add("connection/minkowski-flatness", per * 3, worstFlat, 0.0);
}

// ---- kahler-model ----

void kahlerEntries(Suite& s) {
  auto bs = builtins();
  long perInv = s.count(1000);
  long perLift = s.count(200);

  double worstInv = 0.0, worstHerm = 0.0;
  {
    PointSampler sampler(s.entrySeed(), 2);
    for (const auto& b : bs)
      for (long i = 0; i < perInv; ++i) {
        PhasePoint p = sampler.sample();
        for (double a : kAs) {
          ModelParams m{a};
          Eigen::MatrixXd J = homogeneousAlmostComplex(b.F, p, m).full();
          worstInv = std::max(
              worstInv, (J * J + Eigen::MatrixXd::Identity(4, 4))
                            .cwiseAbs()
                            .maxCoeff());
          worstHerm = std::max(worstHerm, hermitianDefect(b.F, p, m));
        }
      }
  }

  double liftFailures = 0.0, worstTheta = 0.0, worstReduce = 0.0;
  {
    PointSampler sampler(s.entrySeed() + 1, 2);
    for (const auto& b : bs)
      for (long i = 0; i < perLift; ++i) {
        PhasePoint p = sampler.sample();
        AdaptedTensor sas = sasakiLift(b.F, p);
        Eigen::LLT<Eigen::MatrixXd> llt(sas.full());
        if (llt.info() != Eigen::Success) liftFailures += 1.0;
        for (double a : kAs) {
          Eigen::LLT<Eigen::MatrixXd> llt2(
              homogeneousLift(b.F, p, ModelParams{a}).full());
          if (llt2.info() != Eigen::Success) liftFailures += 1.0;
        }

        AdaptedTensor theta = symplecticFormTheta(b.F, p);
        Eigen::MatrixXd T = theta.full();
        worstTheta = std::max(worstTheta,
                              (T + T.transpose()).cwiseAbs().maxCoeff());
        double detG = sas.hh.determinant();
        double detT = T.determinant();
        worstTheta =
            std::max(worstTheta, std::abs(detT - detG * detG) /
                                     std::max(1.0, detG * detG));

        AdaptedTensor reduced =
            homogeneousLift(b.F, p, ModelParams{b.F.norm(p)});
        worstReduce = std::max(
            worstReduce,
            (reduced.full() - sas.full()).cwiseAbs().maxCoeff());
      }
  }

  s.add("kahler/involution", perInv * 4 * 3, worstInv, 1e-12);
  s.add("kahler/hermitian-compatibility", perInv * 4 * 3, worstHerm, 1e-10);
  s.add("kahler/lift-positive-definite", perLift * 4 * 4, liftFailures, 0.0);
  s.add("kahler/theta-antisymmetric-nondegenerate", perLift * 4, worstTheta,
        1e-9);
  s.add("kahler/homogeneous-lift-reduction", perLift * 4, worstReduce, 0.0);
}

// ---- dynamics ----

LagrangianSpec verifyLagrangian(int n) {
  Eigen::VectorXd masses(n);
  for (int i = 0; i < n; ++i) masses[i] = 1.0 + 0.5 * i;
  return lagrangianStandard(masses, 9.8, Expression::parse("x2", n));
}

void elResidualEntry(Suite& s) {
  auto bs = builtins();
  long per = s.count(100);
  PointSampler sampler(s.entrySeed(), 2);
  LagrangianSpec L = verifyLagrangian(2);
  double worst = 0.0;
  for (const auto& b : bs)
    for (long i = 0; i < per; ++i) {
      PhasePoint p = sampler.sample();
      for (double a : kAs) {
        ModelParams m{a};
        Eigen::VectorXd ydot = elRhs(L, b.F, p, m);
        auto [fam1, fam2] = elResidual(L, b.F, {p, ydot}, m);
        Jet3 j = evaluateJet(*L.L, p, 1);
        double scale = 1.0 + j.grad.tail(2).norm();
        worst = std::max(worst, fam1.cwiseAbs().maxCoeff() / scale);
      }
    }
  s.add("dynamics/el-family1-residual", per * 4 * 3, worst, 1e-10);
}

struct FlowSetup {
  FundamentalFunction F;
  LagrangianSpec L;
  ModelParams m;
  PhasePoint p0;
  double t1;
};

FlowField elFlow(const FlowSetup& setup) {
  return [setup](double, const Eigen::VectorXd& u) {
    PhasePoint p = PhasePoint::fromFlat(u);
    Eigen::VectorXd ydot = elRhs(setup.L, setup.F, p, setup.m);
    Eigen::VectorXd du(u.size());
    du << p.y, ydot;
    return du;
  };
}

FlowSetup projectileSetup() {
  return {FundamentalFunction::euclidean(2),
          lagrangianStandard(Eigen::VectorXd::Ones(2), 9.8,
                             Expression::parse("x2", 2)),
          ModelParams{1.0},
          PhasePoint{Eigen::VectorXd::Zero(2),
                     (Eigen::VectorXd(2) << 3.0, 4.0).finished()},
          1.0};
}

void hamiltonConservationEntry(Suite& s) {
  FundamentalFunction F = FundamentalFunction::euclidean(1);
  HamiltonianSpec H{Expression::parse("0.5*(x1^2 + y1^2)", 1)};
  ModelParams m{1.0};
  FlowField flow = [&](double, const Eigen::VectorXd& u) {
    PhasePoint p = PhasePoint::fromFlat(u);
    auto [xd, yd] = hamiltonRhs(H, F, p, m, HamiltonMode::Plain);
    Eigen::VectorXd du(2);
    du << xd, yd;
    return du;
  };
  IntegratorConfig cfg;
  cfg.method = IntegratorMethod::RK45Adaptive;
  cfg.tol = 1e-10;
  PhasePoint p0{Eigen::VectorXd::Zero(1),
                (Eigen::VectorXd(1) << 1.0).finished()};
  Trajectory tr = integrate(flow, p0, 0.0, 10.0, cfg);
  auto hval = [&](const PhasePoint& p) {
    Eigen::VectorXd u = p.flat();
    return H.H->eval(std::span<const double>(u.data(), u.size()));
  };
  double drift = conservedQuantityDrift(tr, hval) / std::abs(hval(p0));
  s.add("dynamics/hamilton-conservation",
        static_cast<long>(tr.samples.size()), drift, 1e-8);
}

void kahlerIdentityEntry(Suite& s) {
  double worst = 0.0;
  long samples = 0;

  auto runCheck = [&](const FlowSetup& setup, double step) {
    IntegratorConfig cfg;
    cfg.method = IntegratorMethod::RK4Fixed;
    cfg.step = step;
    Trajectory tr = integrate(elFlow(setup), setup.p0, 0.0, setup.t1, cfg);
    for (const auto& sm : tr.samples) {
      Eigen::VectorXd ydot = elRhs(setup.L, setup.F, sm.p, setup.m);
      AdaptedOneForm res =
          kahlerIdentityResidual(setup.L, setup.F, {sm.p, ydot}, setup.m);
      worst = std::max(worst, res.dx.cwiseAbs().maxCoeff());
      ++samples;
    }
  };

  runCheck(projectileSetup(), 0.01);

  FlowSetup freeParticle{FundamentalFunction::euclidean(2),
                         lagrangianStandard(Eigen::VectorXd::Ones(2), 0.0, {}),
                         ModelParams{2.0},
                         PhasePoint{Eigen::VectorXd::Zero(2),
                                    (Eigen::VectorXd(2) << 1.0, 0.0).finished()},
                         1.0};
  runCheck(freeParticle, 0.01);

  Eigen::VectorXd masses(2);
  masses << 1.0, 1.2;
  FlowSetup polarFlow{FundamentalFunction::polar(),
                      lagrangianStandard(masses, 3.0,
                                         Expression::parse("x2", 2)),
                      ModelParams{0.5},
                      PhasePoint{(Eigen::VectorXd(2) << 1.5, 0.2).finished(),
                                 (Eigen::VectorXd(2) << 0.4, 0.3).finished()},
                      1.0};
  runCheck(polarFlow, 0.02);

  s.add("dynamics/kahler-identity", samples, worst, 1e-7);
}

void freeFlowEntry(Suite& s) {
  FlowSetup setup{FundamentalFunction::euclidean(2),
                  lagrangianStandard(Eigen::VectorXd::Ones(2), 0.0, {}),
                  ModelParams{1.0},
                  PhasePoint{Eigen::VectorXd::Zero(2),
                             (Eigen::VectorXd(2) << 1.0, 0.0).finished()},
                  1.0};
  IntegratorConfig cfg;
  cfg.method = IntegratorMethod::RK4Fixed;
  cfg.step = 0.01;
  Trajectory tr = integrate(elFlow(setup), setup.p0, 0.0, setup.t1, cfg);
  double defect = 0.0;
  for (const auto& sm : tr.samples) {
    defect = std::max(defect, elRhs(setup.L, setup.F, sm.p, setup.m)
                                  .cwiseAbs()
                                  .maxCoeff());
    defect = std::max(defect,
                      (sm.p.y - setup.p0.y).lpNorm<Eigen::Infinity>());
  }
  Eigen::VectorXd expectedEnd = setup.p0.x + setup.t1 * setup.p0.y;
  defect = std::max(defect, (tr.samples.back().p.x - expectedEnd)
                                .lpNorm<Eigen::Infinity>());
  s.add("dynamics/free-flow-straight",
        static_cast<long>(tr.samples.size()), defect, 1e-12);
}

void rk4OrderEntry(Suite& s) {
  FlowSetup setup = projectileSetup();
  setup.t1 = 2.0;
  auto endpoint = [&](double h) {
    IntegratorConfig cfg;
    cfg.method = IntegratorMethod::RK4Fixed;
    cfg.step = h;
    Trajectory tr = integrate(elFlow(setup), setup.p0, 0.0, setup.t1, cfg);
    return tr.samples.back().p.flat();
  };
  Eigen::VectorXd uh = endpoint(0.2);
  Eigen::VectorXd uh2 = endpoint(0.1);
  Eigen::VectorXd uh4 = endpoint(0.05);
  double e1 = (uh - uh2).norm();
  double e2 = (uh2 - uh4).norm();
  double order = std::log2(e1 / e2);
  s.add("dynamics/rk4-order", 3, std::max(0.0, 3.8 - order), 0.0);
}

void liouvilleConsistencyEntry(Suite& s) {
  auto bs = builtins();
  long per = s.count(100);
  PointSampler sampler(s.entrySeed(), 2);
  Rng rng(s.entrySeed() + 7);
  double worst = 0.0;
  for (const auto& b : bs)
    for (long i = 0; i < per; ++i) {
      PhasePoint p = sampler.sample();
      Eigen::VectorXd Y(2);
      Y << rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0);
      for (double a : kAs) {
        ModelParams m{a};
        AdaptedVector V = liouvilleVectorField({p, Y}, b.F, m);
        Eigen::MatrixXd J = homogeneousAlmostComplex(b.F, p, m).full();
        Eigen::VectorXd xi(4);
        xi << p.y, Y;
        Eigen::VectorXd Jxi = J * xi;
        worst = std::max(worst, (Jxi.head(2) - V.h).cwiseAbs().maxCoeff());
        worst = std::max(worst, (Jxi.tail(2) - V.v).cwiseAbs().maxCoeff());
      }
    }
  s.add("dynamics/liouville-consistency", per * 4 * 3, worst, 0.0);
}

// ---- einstein ----

void einsteinEntries(Suite& s) {
  const std::vector<double> As{1.0, 2.0, 5.0};
  const std::vector<double> cs{-2.0, -1.0, -0.5, 0.5, 1.0};
  double worstDefect = 0.0, worstPos = 0.0, worstLimit = 0.0;
  long valid = 0;
  for (double A : As)
    for (double c : cs) {
      for (long k = 1; k <= 300; ++k) {
        double t = 0.01 * k;
        EinsteinParams p{A, c, t};
        if (A * A - 2.0 * c * t <= 0.0) continue;
        ++valid;
        worstDefect = std::max(worstDefect, integrabilityDefect(p));
        double u = uFunction(p);
        worstPos = std::max(worstPos, -u);
        if (c < 0.0) worstPos = std::max(worstPos, -vFunction(p));
      }
      EinsteinParams tiny{A, c, 1e-8};
      worstLimit = std::max(
          worstLimit, std::abs(vFunction(tiny) + 3.0 * c / (2.0 * A)));
    }
  s.add("einstein/integrability-defect", valid, worstDefect, 1e-9);
  s.add("einstein/positivity", valid, std::max(0.0, worstPos), 0.0);
  s.add("einstein/v-limit", static_cast<long>(As.size() * cs.size()),
        worstLimit, 1e-6);
}

}  // namespace

VerificationReport runVerification(const RunConfig& cfg) {
  VerificationReport rep;
  rep.seed = cfg.seed;
  rep.a = cfg.model.a;
  rep.samplesOverride = cfg.samples;
  if (cfg.metric) {
    rep.metric = cfg.metric->kind;
    rep.dimension = cfg.metric->dimension;
  }

  Suite suite{cfg.seed, cfg.samples, {}};
  fdDefectEntries(suite);
  jetSymmetryEntry(suite);
  metricEntries(suite);
  connectionEntries(suite);
  kahlerEntries(suite);
  elResidualEntry(suite);
  hamiltonConservationEntry(suite);
  kahlerIdentityEntry(suite);
  freeFlowEntry(suite);
  rk4OrderEntry(suite);
  liouvilleConsistencyEntry(suite);
  einsteinEntries(suite);

  rep.entries = std::move(suite.results);
  rep.pass = true;
  for (const auto& e : rep.entries) rep.pass = rep.pass && e.pass;
  return rep;
}

std::string verificationJson(const VerificationReport& rep) {
  nlohmann::json j;
  j["environment"] = {{"seed", rep.seed},
                      {"metric", rep.metric},
                      {"a", rep.a},
                      {"dimension", rep.dimension},
                      {"samplesOverride", rep.samplesOverride}};
  j["invariants"] = nlohmann::json::array();
  for (const auto& e : rep.entries)
    j["invariants"].push_back({{"name", e.name},
                               {"samples", e.samples},
                               {"maxDefect", e.maxDefect},
                               {"tolerance", e.tolerance},
                               {"pass", e.pass}});
  j["pass"] = rep.pass;
  return j.dump(2) + "\n";
}

std::string verificationCsv(const VerificationReport& rep) {
  std::string out = "name,samples,maxDefect,tolerance,pass\n";
  for (const auto& e : rep.entries)
    out += e.name + "," + std::to_string(e.samples) + "," +
           formatDouble(e.maxDefect) + "," + formatDouble(e.tolerance) + "," +
           (e.pass ? "true" : "false") + "\n";
  return out;
}

const std::vector<std::string>& canonicalInvariantNames() {
  static const std::vector<std::string> names = {
      "jetcalc/fd-defect-order1",
      "jetcalc/fd-defect-order23",
      "jetcalc/jet-symmetry",
      "finsler/metric-homogeneity",
      "finsler/norm-identity",
      "finsler/euler-relation",
      "finsler/metric-symmetry",
      "connection/frame-duality",
      "connection/spray-connection-homogeneity",
      "connection/polar-christoffel",
      "connection/minkowski-flatness",
      "kahler/involution",
      "kahler/hermitian-compatibility",
      "kahler/lift-positive-definite",
      "kahler/theta-antisymmetric-nondegenerate",
      "kahler/homogeneous-lift-reduction",
      "dynamics/el-family1-residual",
      "dynamics/hamilton-conservation",
      "dynamics/kahler-identity",
      "dynamics/free-flow-straight",
      "dynamics/rk4-order",
      "dynamics/liouville-consistency",
      "einstein/integrability-defect",
      "einstein/positivity",
      "einstein/v-limit",
  };
  return names;
}

}  // namespace fkm
