#pragma once

#include <optional>
#include <utility>

#include "core/kahler.hpp"

namespace fkm {

/// Lagrangian on the phase coordinates; the optional structured form
/// records how a standard mechanical L = T - P was assembled.
struct StructuredLagrangian {
  Eigen::VectorXd masses;
  double gravity = 0.0;
  FieldPtr height;  // function of x only
};

struct LagrangianSpec {
  FieldPtr L;
  std::optional<StructuredLagrangian> structured;
};

struct HamiltonianSpec {
  FieldPtr H;
};

/// Semispray data: X^i = y^i is implied by p, Y^i = dy^i/dt is the
/// fiber velocity.
struct SemisprayState {
  PhasePoint p;
  Eigen::VectorXd Y;
};

enum class HamiltonMode { Plain, ConnectionCorrected };

/// Standard mechanical Lagrangian L(x, y) = 1/2 sum m_i (y^i)^2 - m g h(x)
/// with m the mean particle mass (the potential's mass factor is not
/// indexed). The kinetic (dy/dt)^2 term of the underlying T drops out of
/// the phase-space Lagrangian, which depends on (x, y) only.
LagrangianSpec lagrangianStandard(const Eigen::VectorXd& masses,
                                  double gravity, FieldPtr height);

/// Vertical differential d_J L = -(F/a) dL/dy^i dx^i + (a/F) dL/dx^i dy^i
/// (horizontal x-derivatives).
AdaptedOneForm verticalDifferential(const LagrangianSpec& L,
                                    const FundamentalFunction& F,
                                    const PhasePoint& p, const ModelParams& m);

/// Lagrangian Kahler 2-form Phi_L = -d d_J L, assembled from its four
/// coefficient groups in the adapted coframe.
AdaptedTensor kahlerFormLagrangian(const LagrangianSpec& L,
                                   const FundamentalFunction& F,
                                   const PhasePoint& p, const ModelParams& m);

/// Liouville field V = J(xi): horizontal (a/F) Y^i, vertical -(F/a) X^i.
AdaptedVector liouvilleVectorField(const SemisprayState& xi,
                                   const FundamentalFunction& F,
                                   const ModelParams& m);

/// Energy E_L = V(L) - L.
double energyFunction(const LagrangianSpec& L, const SemisprayState& xi,
                      const FundamentalFunction& F, const ModelParams& m);

/// Fiber acceleration solving family one of the Euler-Lagrange system:
/// (F/a) d/dt(dL/dy^i) + dL/dx^i = 0 expanded along x-dot = y. Raises a
/// degenerate-Lagrangian error when the fiber Hessian is singular.
Eigen::VectorXd elRhs(const LagrangianSpec& L, const FundamentalFunction& F,
                      const PhasePoint& p, const ModelParams& m);

/// Residuals of both Euler-Lagrange families at the given state and
/// acceleration. Family two is a diagnostic: the printed equations are
/// 2n conditions on n accelerations and are generally inconsistent, so
/// the flow never enforces it.
std::pair<Eigen::VectorXd, Eigen::VectorXd> elResidual(
    const LagrangianSpec& L, const FundamentalFunction& F,
    const SemisprayState& s, const ModelParams& m);

/// i_xi Phi_L - dE_L in the adapted coframe. The contraction uses the
/// adapted fiber velocity dy^i/dt + N^i_j dx^j/dt for xi's vertical
/// components (the coframe pairing of the curve's velocity), which
/// reduces to Y on flat metrics. The dx-part vanishes along el_rhs
/// flows; the dy-part reproduces minus the family-two residual.
AdaptedOneForm kahlerIdentityResidual(const LagrangianSpec& L,
                                      const FundamentalFunction& F,
                                      const SemisprayState& s,
                                      const ModelParams& m);

/// Hamilton equations (x-dot, y-dot) = (F/a) (dH/dy, -dH/dx). In plain
/// mode both derivatives are coordinate partials (conserves H exactly
/// along the flow); the corrected mode replaces dH/dx by the horizontal
/// derivative.
std::pair<Eigen::VectorXd, Eigen::VectorXd> hamiltonRhs(
    const HamiltonianSpec& H, const FundamentalFunction& F,
    const PhasePoint& p, const ModelParams& m, HamiltonMode mode);

}  // namespace fkm
