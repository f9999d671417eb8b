#pragma once

#include <Eigen/Core>
#include <vector>

#include "core/metric.hpp"

namespace fkm {

/// Metric, spray and Cartan nonlinear connection evaluated together
/// (they share the order-3 jet of F^2).
struct ConnectionData {
  Eigen::MatrixXd g;      // fundamental tensor
  Eigen::MatrixXd gInv;
  Eigen::VectorXd spray;  // G^i
  Eigen::MatrixXd N;      // N^i_j, row i fiber, column j base
};

ConnectionData connectionAt(const FundamentalFunction& F, const PhasePoint& p);

/// Spray coefficients G^i = 1/4 g^il (y^k d2F2/dy^l dx^k - dF2/dx^l).
Eigen::VectorXd sprayCoefficients(const FundamentalFunction& F,
                                  const PhasePoint& p);

/// Cartan nonlinear connection N^i_j = dG^i/dy^j.
Eigen::MatrixXd nonlinearConnection(const FundamentalFunction& F,
                                    const PhasePoint& p);

/// N^i_j together with its full phase-space gradient (entries dN[i][j]
/// are 2n-vectors). Needs one tangent-mode pass; used by the Lagrangian
/// two-form, whose coefficients differentiate horizontal derivatives.
struct ConnectionGradients {
  Eigen::MatrixXd N;
  std::vector<std::vector<Eigen::VectorXd>> dN;
};

ConnectionGradients connectionGradients(const FundamentalFunction& F,
                                        const PhasePoint& p);

/// Adapted frame (d/dx^i = d/dx^i - N^j_i d/dy^j, d/dy^i) and dual
/// coframe (dx^i, dy^i + N^i_j dx^j) as 2n x 2n matrices. Frame columns
/// hold coordinate components of the frame vectors; coframe rows hold
/// coordinate-coframe components of the covectors, so coframe * frame is
/// exactly the identity.
struct AdaptedFrame {
  Eigen::MatrixXd N;

  Eigen::MatrixXd frame() const;    // [[I, 0], [-N, I]]
  Eigen::MatrixXd coframe() const;  // [[I, 0], [ N, I]]
};

AdaptedFrame adaptedFrame(const FundamentalFunction& F, const PhasePoint& p);

/// Horizontal derivative df/dx^i - N^j_i df/dy^j at p.
double adaptedPartialX(const FundamentalFunction& F, const ScalarField& f,
                       const PhasePoint& p, int i);

}  // namespace fkm
