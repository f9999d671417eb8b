#include "core/dynamics.hpp"

#include <Eigen/LU>
#include <sstream>

#include "core/jet.hpp"

namespace fkm {

namespace {

struct Factors {
  double F;
  double alpha;  // F / a
  double beta;   // a / F
};

Factors factors(const FundamentalFunction& F, const PhasePoint& p,
                const ModelParams& m) {
  checkModelParams(m);
  checkPhasePoint(p);
  double f = F.norm(p);
  if (!std::isfinite(f) || f <= 0.0)
    raise(ErrorCode::Domain, "fundamental function not positive at the point");
  return Factors{f, f / m.a, m.a / f};
}

/// Derivatives of L and the connection shared by the section-3 objects.
/// `withGradients` additionally assembles the full phase gradient of the
/// horizontal derivative w_i = dL/dx^i - N^k_i dL/dy^k, which costs one
/// tangent-mode connection pass.
struct LagrangianDerivs {
  int n;
  double Lval;
  Eigen::VectorXd gradLx, gradLy;
  Eigen::MatrixXd hess;  // full 2n x 2n
  Eigen::MatrixXd N;
  Eigen::VectorXd w;
  std::vector<Eigen::VectorXd> dw;  // per i: 2n gradient of w_i
};

LagrangianDerivs lagrangianDerivs(const LagrangianSpec& L,
                                  const FundamentalFunction& F,
                                  const PhasePoint& p, bool withGradients) {
  LagrangianDerivs d;
  d.n = F.dimension();
  const int n = d.n;
  Jet3 jet = evaluateJet(*L.L, p, 2);
  d.Lval = jet.value;
  d.gradLx = jet.grad.head(n);
  d.gradLy = jet.grad.tail(n);
  d.hess = jet.hess;

  ConnectionGradients cg;
  if (withGradients) {
    cg = connectionGradients(F, p);
    d.N = cg.N;
  } else {
    d.N = nonlinearConnection(F, p);
  }

  d.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double acc = d.gradLx[i];
    for (int k = 0; k < n; ++k) acc -= d.N(k, i) * d.gradLy[k];
    d.w[i] = acc;
  }

  if (withGradients) {
    d.dw.assign(n, Eigen::VectorXd::Zero(2 * n));
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd acc = d.hess.row(i).transpose();  // grad of dL/dx_i
      for (int k = 0; k < n; ++k)
        acc -= d.N(k, i) * d.hess.row(n + k).transpose() +
               d.gradLy[k] * cg.dN[k][i];
      d.dw[i] = std::move(acc);
    }
  }
  return d;
}

/// Coefficient matrices of the four wedge groups of Phi_L, all indexed
/// (j, i) in the paper's order:
///   A(j,i) = delta_j(dL/dy^i), B(j,i) = delta_j(delta_i L),
///   D(j,i) = d/dy^j(delta_i L), M = fiber Hessian.
struct PhiCoefficients {
  Eigen::MatrixXd A, B, D, M;
};

PhiCoefficients phiCoefficients(const LagrangianDerivs& d) {
  const int n = d.n;
  PhiCoefficients c;
  c.M = d.hess.block(n, n, n, n);
  c.A.resize(n, n);
  c.B.resize(n, n);
  c.D.resize(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double a = d.hess(j, n + i);
      for (int k = 0; k < n; ++k) a -= d.N(k, j) * d.hess(n + k, n + i);
      c.A(j, i) = a;
      double b = d.dw[i][j];
      for (int k = 0; k < n; ++k) b -= d.N(k, j) * d.dw[i][n + k];
      c.B(j, i) = b;
      c.D(j, i) = d.dw[i][n + j];
    }
  return c;
}

AdaptedTensor assemblePhi(const PhiCoefficients& c, double alpha,
                          double beta) {
  const int n = static_cast<int>(c.M.rows());
  AdaptedTensor phi;
  phi.variance = Variance::TwoForm;
  phi.hh.resize(n, n);
  phi.hv.resize(n, n);
  phi.vh.resize(n, n);
  phi.vv.resize(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      phi.hh(p, q) = alpha * (c.A(p, q) - c.A(q, p));
      phi.hv(p, q) = -beta * c.B(p, q) - alpha * c.M(q, p);
      phi.vh(p, q) = alpha * c.M(p, q) + beta * c.B(q, p);
      phi.vv(p, q) = -beta * (c.D(p, q) - c.D(q, p));
    }
  return phi;
}

}  // namespace

LagrangianSpec lagrangianStandard(const Eigen::VectorXd& masses,
                                  double gravity, FieldPtr height) {
  const int n = static_cast<int>(masses.size());
  if (n < 1) raise(ErrorCode::Parameter, "masses vector must be non-empty");
  for (int i = 0; i < n; ++i)
    if (!(masses[i] > 0.0))
      raise(ErrorCode::Parameter,
            "mass m_" + std::to_string(i + 1) + " must be positive");
  if (height && height->phaseDim() != 2 * n)
    raise(ErrorCode::Parameter, "height field dimension mismatch");
  double mbar = masses.mean();

  FieldPtr h = height;
  auto L = makeField(2 * n, [masses, gravity, mbar, h, n](auto c) {
    auto kinetic = c[n] * c[n] * (0.5 * masses[0]);
    for (int i = 1; i < n; ++i) kinetic += c[n + i] * c[n + i] * (0.5 * masses[i]);
    if (gravity != 0.0 && h) kinetic -= h->eval(c) * (mbar * gravity);
    return kinetic;
  });

  LagrangianSpec spec;
  spec.L = std::move(L);
  spec.structured = StructuredLagrangian{masses, gravity, std::move(h)};
  return spec;
}

AdaptedOneForm verticalDifferential(const LagrangianSpec& L,
                                    const FundamentalFunction& F,
                                    const PhasePoint& p,
                                    const ModelParams& m) {
  Factors f = factors(F, p, m);
  auto d = lagrangianDerivs(L, F, p, false);
  AdaptedOneForm out;
  out.dx = -f.alpha * d.gradLy;
  out.dy = f.beta * d.w;
  return out;
}

AdaptedTensor kahlerFormLagrangian(const LagrangianSpec& L,
                                   const FundamentalFunction& F,
                                   const PhasePoint& p, const ModelParams& m) {
  Factors f = factors(F, p, m);
  auto d = lagrangianDerivs(L, F, p, true);
  return assemblePhi(phiCoefficients(d), f.alpha, f.beta);
}

AdaptedVector liouvilleVectorField(const SemisprayState& xi,
                                   const FundamentalFunction& F,
                                   const ModelParams& m) {
  Factors f = factors(F, xi.p, m);
  return AdaptedVector{f.beta * xi.Y, -f.alpha * xi.p.y};
}

double energyFunction(const LagrangianSpec& L, const SemisprayState& xi,
                      const FundamentalFunction& F, const ModelParams& m) {
  Factors f = factors(F, xi.p, m);
  auto d = lagrangianDerivs(L, F, xi.p, false);
  return -f.alpha * xi.p.y.dot(d.gradLy) + f.beta * xi.Y.dot(d.w) - d.Lval;
}

Eigen::VectorXd elRhs(const LagrangianSpec& L, const FundamentalFunction& F,
                      const PhasePoint& p, const ModelParams& m) {
  Factors f = factors(F, p, m);
  auto d = lagrangianDerivs(L, F, p, false);
  const int n = d.n;
  Eigen::MatrixXd M = d.hess.block(n, n, n, n);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    double acc = -f.beta * d.w[i];
    for (int j = 0; j < n; ++j) acc -= d.hess(j, n + i) * p.y[j];
    b[i] = acc;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  if (!lu.isInvertible()) {
    std::ostringstream os;
    os << "degenerate Lagrangian: fiber Hessian singular at x = ["
       << p.x.transpose() << "], y = [" << p.y.transpose() << "]";
    raise(ErrorCode::Degenerate, os.str());
  }
  return lu.solve(b);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> elResidual(
    const LagrangianSpec& L, const FundamentalFunction& F,
    const SemisprayState& s, const ModelParams& m) {
  Factors f = factors(F, s.p, m);
  auto d = lagrangianDerivs(L, F, s.p, true);
  const int n = d.n;
  Eigen::VectorXd fam1(n), fam2(n);
  Eigen::VectorXd flatVel(2 * n);
  flatVel << s.p.y, s.Y;
  for (int i = 0; i < n; ++i) {
    double ddt = 0.0;  // d/dt(dL/dy^i) by the coordinate chain rule
    for (int j = 0; j < n; ++j)
      ddt += d.hess(j, n + i) * s.p.y[j] + d.hess(n + j, n + i) * s.Y[j];
    fam1[i] = f.alpha * ddt + d.w[i];
    fam2[i] = f.beta * d.dw[i].dot(flatVel) - d.gradLy[i];
  }
  return {fam1, fam2};
}

AdaptedOneForm kahlerIdentityResidual(const LagrangianSpec& L,
                                      const FundamentalFunction& F,
                                      const SemisprayState& s,
                                      const ModelParams& m) {
  Factors f = factors(F, s.p, m);
  auto d = lagrangianDerivs(L, F, s.p, true);
  const int n = d.n;
  PhiCoefficients c = phiCoefficients(d);
  AdaptedTensor phi = assemblePhi(c, f.alpha, f.beta);

  const Eigen::VectorXd& X = s.p.y;
  Eigen::VectorXd Yc = s.Y + d.N * X;  // adapted fiber velocity

  AdaptedOneForm res;
  res.dx.resize(n);
  res.dy.resize(n);
  for (int q = 0; q < n; ++q) {
    double ih = 0.0, iv = 0.0;
    for (int p2 = 0; p2 < n; ++p2) {
      ih += X[p2] * phi.hh(p2, q) + Yc[p2] * phi.vh(p2, q);
      iv += X[p2] * phi.hv(p2, q) + Yc[p2] * phi.vv(p2, q);
    }
    double dEH = 0.0, dEV = 0.0;
    for (int p2 = 0; p2 < n; ++p2) {
      dEH += -f.alpha * X[p2] * c.A(q, p2) + f.beta * Yc[p2] * c.B(q, p2);
      dEV += -f.alpha * X[p2] * c.M(q, p2) + f.beta * Yc[p2] * c.D(q, p2);
    }
    dEH -= d.w[q];
    dEV -= d.gradLy[q];
    res.dx[q] = ih - dEH;
    res.dy[q] = iv - dEV;
  }
  return res;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> hamiltonRhs(
    const HamiltonianSpec& H, const FundamentalFunction& F,
    const PhasePoint& p, const ModelParams& m, HamiltonMode mode) {
  Factors f = factors(F, p, m);
  const int n = F.dimension();
  Jet3 jet = evaluateJet(*H.H, p, 1);
  Eigen::VectorXd gradHx = jet.grad.head(n);
  Eigen::VectorXd gradHy = jet.grad.tail(n);
  Eigen::VectorXd xdot = f.alpha * gradHy;
  Eigen::VectorXd ydot;
  if (mode == HamiltonMode::Plain) {
    ydot = -f.alpha * gradHx;
  } else {
    Eigen::MatrixXd N = nonlinearConnection(F, p);
    ydot.resize(n);
    for (int i = 0; i < n; ++i) {
      double acc = gradHx[i];
      for (int k = 0; k < n; ++k) acc -= N(k, i) * gradHy[k];
      ydot[i] = -f.alpha * acc;
    }
  }
  return {xdot, ydot};
}

}  // namespace fkm
