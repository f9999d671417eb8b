#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "core/scalar_field.hpp"
#include "core/types.hpp"

namespace fkm {

/// Value and all partial derivatives of a scalar field at a phase point,
/// up to `order` (at most 3). Tensors are stored dense and filled from
/// the simplex coefficients of the underlying polynomial, so symmetry of
/// the Hessian and the third tensor is structural.
struct Jet3 {
  int dim = 0;    // 2n
  int order = 0;  // populated levels
  double value = 0.0;
  Eigen::VectorXd grad;       // order >= 1
  Eigen::MatrixXd hess;       // order >= 2
  std::vector<double> third;  // order == 3, dense dim^3

  double thirdAt(int a, int b, int c) const {
    return third[(static_cast<size_t>(a) * dim + b) * dim + c];
  }

  /// Partial derivative for a multi-index of length <= 3 (empty index
  /// returns the value). Invariant under permutation of the index.
  double partial(std::span<const int> idx) const;
};

/// All partials of f at p up to `order`, exact to rounding (algorithmic
/// differentiation on truncated Taylor arithmetic, never finite
/// differences). Throws a domain error identifying the offending
/// coefficient when the evaluation is non-finite.
Jet3 evaluateJet(const ScalarField& f, const PhasePoint& p, int order);

/// Max relative discrepancy between the jet partials of exactly `order`
/// and nested central finite differences with the given base step. Steps
/// are scaled per coordinate (by max(1,|x_i|) on the base, by |y| on the
/// fiber) so the homogeneity of the built-in fields does not skew the
/// truncation error across sampling radii. Test oracle only.
double finiteDifferenceDefect(const ScalarField& f, const PhasePoint& p,
                              int order, double step);

}  // namespace fkm
