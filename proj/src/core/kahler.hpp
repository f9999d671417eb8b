#pragma once

#include <Eigen/Core>

#include "core/connection.hpp"
#include "core/metric.hpp"

namespace fkm {

/// Homogeneity constant a > 0 of the homogeneous lift (fixed by the
/// application to keep physical dimensions consistent).
struct ModelParams {
  double a = 1.0;
};

inline void checkModelParams(const ModelParams& m) {
  if (!(m.a > 0.0) || !std::isfinite(m.a))
    raise(ErrorCode::Parameter, "model constant must satisfy a > 0");
}

enum class Variance { Metric, Endomorphism, TwoForm };

/// 2n x 2n object in the adapted frame, stored as four n x n blocks
/// (HH, HV, VH, VV). For endomorphisms, columns are inputs: block XY
/// maps Y-type frame vectors to X-type components.
struct AdaptedTensor {
  Eigen::MatrixXd hh, hv, vh, vv;
  Variance variance = Variance::Metric;

  Eigen::MatrixXd full() const {
    const int n = static_cast<int>(hh.rows());
    Eigen::MatrixXd M(2 * n, 2 * n);
    M.block(0, 0, n, n) = hh;
    M.block(0, n, n, n) = hv;
    M.block(n, 0, n, n) = vh;
    M.block(n, n, n, n) = vv;
    return M;
  }
};

/// One-form in the adapted coframe: dx-components and dy-components.
struct AdaptedOneForm {
  Eigen::VectorXd dx;
  Eigen::VectorXd dy;
};

/// Tangent vector in the adapted frame: horizontal and vertical parts.
struct AdaptedVector {
  Eigen::VectorXd h;
  Eigen::VectorXd v;
};

/// Sasaki-Matsumoto lift G = g dx (x) dx + g dy (x) dy.
AdaptedTensor sasakiLift(const FundamentalFunction& F, const PhasePoint& p);

/// Homogeneous lift: HH = g, VV = (a^2/F^2) g.
AdaptedTensor homogeneousLift(const FundamentalFunction& F,
                              const PhasePoint& p, const ModelParams& m);

/// Almost complex structure F(d/dx) = -d/dy, F(d/dy) = d/dx.
AdaptedTensor almostComplex(const FundamentalFunction& F, const PhasePoint& p);

/// Homogenized structure: HV = (a/F) I, VH = -(F/a) I; squares to -I.
AdaptedTensor homogeneousAlmostComplex(const FundamentalFunction& F,
                                       const PhasePoint& p,
                                       const ModelParams& m);

/// Almost symplectic 2-form theta = g_ij dy^i ^ dx^j as the full
/// antisymmetric matrix [[0, -g], [g, 0]].
AdaptedTensor symplecticFormTheta(const FundamentalFunction& F,
                                  const PhasePoint& p);

/// The 1-form omega = (a^2/F^2) x^i dx^i + y^i dy^i and its image
/// lambda = F*(omega), the Liouville form of the Hamilton picture.
struct LiouvilleForms {
  AdaptedOneForm omega;
  AdaptedOneForm lambda;
};
LiouvilleForms liouvilleOneForm(const FundamentalFunction& F,
                                const PhasePoint& p, const ModelParams& m);

/// Closed form phi = -d(lambda) = (a/F) dx^i ^ dy^i, the Hamiltonian
/// two-form of the flow equations.
AdaptedTensor hamiltonianTwoForm(const FundamentalFunction& F,
                                 const PhasePoint& p, const ModelParams& m);

/// Hermitian compatibility defect max_AB |G(JA, JB) - G(A, B)| over the
/// adapted frame probe basis, with G the homogeneous lift and J the
/// homogenized almost complex structure.
double hermitianDefect(const FundamentalFunction& F, const PhasePoint& p,
                       const ModelParams& m);

}  // namespace fkm
