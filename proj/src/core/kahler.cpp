#include "core/kahler.hpp"

namespace fkm {

namespace {

double normAt(const FundamentalFunction& F, const PhasePoint& p) {
  checkPhasePoint(p);
  double f = F.norm(p);
  if (!std::isfinite(f) || f <= 0.0)
    raise(ErrorCode::Domain, "fundamental function not positive at the point");
  return f;
}

}  // namespace

AdaptedTensor sasakiLift(const FundamentalFunction& F, const PhasePoint& p) {
  Eigen::MatrixXd g = metricTensor(F, p).g;
  const int n = F.dimension();
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(n, n);
  return AdaptedTensor{g, zero, zero, g, Variance::Metric};
}

AdaptedTensor homogeneousLift(const FundamentalFunction& F,
                              const PhasePoint& p, const ModelParams& m) {
  checkModelParams(m);
  double f = normAt(F, p);
  double s = m.a / f;
  Eigen::MatrixXd g = metricTensor(F, p).g;
  const int n = F.dimension();
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(n, n);
  return AdaptedTensor{g, zero, zero, (s * s) * g, Variance::Metric};
}

AdaptedTensor almostComplex(const FundamentalFunction& F,
                            const PhasePoint& p) {
  checkPhasePoint(p);
  const int n = F.dimension();
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(n, n);
  return AdaptedTensor{zero, eye, -eye, zero, Variance::Endomorphism};
}

AdaptedTensor homogeneousAlmostComplex(const FundamentalFunction& F,
                                       const PhasePoint& p,
                                       const ModelParams& m) {
  checkModelParams(m);
  double f = normAt(F, p);
  const int n = F.dimension();
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(n, n);
  return AdaptedTensor{zero, (m.a / f) * eye, -(f / m.a) * eye, zero,
                       Variance::Endomorphism};
}

AdaptedTensor symplecticFormTheta(const FundamentalFunction& F,
                                  const PhasePoint& p) {
  Eigen::MatrixXd g = metricTensor(F, p).g;
  const int n = F.dimension();
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(n, n);
  return AdaptedTensor{zero, -g, g, zero, Variance::TwoForm};
}

LiouvilleForms liouvilleOneForm(const FundamentalFunction& F,
                                const PhasePoint& p, const ModelParams& m) {
  checkModelParams(m);
  double f = normAt(F, p);
  double s = m.a / f;
  LiouvilleForms out;
  out.omega.dx = (s * s) * p.x;
  out.omega.dy = p.y;
  out.lambda.dx = s * p.y;
  out.lambda.dy = -s * p.x;
  return out;
}

AdaptedTensor hamiltonianTwoForm(const FundamentalFunction& F,
                                 const PhasePoint& p, const ModelParams& m) {
  checkModelParams(m);
  double f = normAt(F, p);
  double s = m.a / f;
  const int n = F.dimension();
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(n, n);
  return AdaptedTensor{zero, s * eye, -s * eye, zero, Variance::TwoForm};
}

double hermitianDefect(const FundamentalFunction& F, const PhasePoint& p,
                       const ModelParams& m) {
  Eigen::MatrixXd G = homogeneousLift(F, p, m).full();
  Eigen::MatrixXd J = homogeneousAlmostComplex(F, p, m).full();
  Eigen::MatrixXd defect = J.transpose() * G * J - G;
  return defect.cwiseAbs().maxCoeff();
}

}  // namespace fkm
