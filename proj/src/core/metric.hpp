#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "core/expr.hpp"
#include "core/scalar_field.hpp"
#include "core/types.hpp"

namespace fkm {

enum class MetricKind { Euclidean, Riemannian, Randers, Quartic, Custom };

std::string metricKindName(MetricKind k);

/// A fundamental function F(x, y) with its square as a separately built
/// field (g, sprays and the connection differentiate F^2, and the square
/// is better conditioned when assembled directly).
class FundamentalFunction {
public:
  static FundamentalFunction euclidean(int n);
  /// Riemannian F^2 = g_ij(x) y^i y^j with expression entries on x.
  static FundamentalFunction riemannian(
      int n, const std::vector<std::vector<std::string>>& entries);
  /// Named preset: ds^2 = dr^2 + r^2 dtheta^2 with (x1, x2) = (r, theta).
  static FundamentalFunction polar();
  /// Randers F = sqrt(y^T alpha y) + b.y; requires |b|_alpha < 1 unless
  /// `allowInvalid` (validation work needs to construct broken metrics).
  static FundamentalFunction randers(int n, const Eigen::VectorXd& b,
                                     std::optional<Eigen::MatrixXd> alpha = {},
                                     bool allowInvalid = false);
  /// Quartic Minkowski F = (sum (y^i)^4)^(1/4).
  static FundamentalFunction quartic(int n);
  /// Custom F from an expression over x1..xn, y1..yn.
  static FundamentalFunction custom(int n, const std::string& fExpr);

  int dimension() const { return n_; }
  MetricKind kind() const { return kind_; }
  const ScalarField& F() const { return *f_; }
  const ScalarField& F2() const { return *f2_; }
  FieldPtr FPtr() const { return f_; }
  FieldPtr F2Ptr() const { return f2_; }

  /// F(x, y); the paper's |y| is always this value.
  double norm(const PhasePoint& p) const;

private:
  FundamentalFunction(int n, MetricKind kind, FieldPtr f, FieldPtr f2)
      : n_(n), kind_(kind), f_(std::move(f)), f2_(std::move(f2)) {}

  int n_;
  MetricKind kind_;
  FieldPtr f_;
  FieldPtr f2_;
};

struct MetricTensor {
  Eigen::MatrixXd g;
  PhasePoint point;
};

/// Fundamental tensor g_ij = 1/2 d^2 F^2 / dy^i dy^j at p.
MetricTensor metricTensor(const FundamentalFunction& F, const PhasePoint& p);

/// Inverse of a positive definite metric (Cholesky); raises a regularity
/// error when the factorization fails.
Eigen::MatrixXd inverseMetric(const MetricTensor& g);

/// Energy density t = F^2 / 2.
double energyDensity(const FundamentalFunction& F, const PhasePoint& p);

/// Lowered fiber coordinate y_i = 1/2 dF^2/dy^i (= g_ij y^j).
Eigen::VectorXd lowerIndex(const FundamentalFunction& F, const PhasePoint& p);

struct ConditionReport {
  bool pass = true;
  double worstDefect = 0.0;
  int worstSample = -1;
  std::string note;
};

struct ValidationReport {
  ConditionReport positivity;    // F finite and > 0
  ConditionReport homogeneity;   // F(x, ly) = l F(x, y), l in {0.5, 2, 10}
  ConditionReport definiteness;  // fiber Hessian of F^2 positive definite
  int sampleCount = 0;
  bool pass = false;
};

/// Checks the Finsler conditions at every sample; failures are report
/// entries, never exceptions.
ValidationReport validateFinsler(const FundamentalFunction& F,
                                 std::span<const PhasePoint> samples);

}  // namespace fkm
