#pragma once

#include <memory>
#include <string>

#include "core/scalar_field.hpp"

namespace fkm {

/// Scalar field parsed from an arithmetic expression in the phase
/// coordinates x1..xn, y1..yn. Supported: + - * / ^ (right
/// associative), parentheses, the constant pi, and the functions sqrt,
/// exp, log, sin, cos, tan, atan. Integer exponents are evaluated by
/// repeated multiplication so negative bases are fine.
class Expression final : public ScalarField {
public:
  /// `n` is the base dimension; variables beyond x1..xn / y1..yn are
  /// rejected. Parse failures raise config errors with a position.
  static std::shared_ptr<const Expression> parse(const std::string& text,
                                                 int n);

  int phaseDim() const override;
  double eval(std::span<const double> c) const override;
  Taylor<double> eval(std::span<const Taylor<double>> c) const override;
  Taylor<Grad> eval(std::span<const Taylor<Grad>> c) const override;

  const std::string& text() const { return text_; }

  /// True when no fiber variable y* occurs (pure function of x).
  bool baseOnly() const;

  struct Node;
  ~Expression() override;

private:
  Expression(std::string text, int n, std::unique_ptr<Node> root);

  std::string text_;
  int n_;
  std::unique_ptr<Node> root_;
};

using ExprPtr = std::shared_ptr<const Expression>;

}  // namespace fkm
