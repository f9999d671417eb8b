#pragma once

#include <memory>
#include <span>
#include <utility>

#include "core/taylor.hpp"

namespace fkm {

/// A scalar function of the 2n phase coordinates (x^1..x^n, y^1..y^n),
/// evaluable on plain doubles and on lifted number types so that all
/// derivatives are exact. Implementations must be deterministic and
/// stateless.
class ScalarField {
public:
  virtual ~ScalarField() = default;

  /// Number of phase coordinates (2n).
  virtual int phaseDim() const = 0;

  virtual double eval(std::span<const double> c) const = 0;
  virtual Taylor<double> eval(std::span<const Taylor<double>> c) const = 0;
  virtual Taylor<Grad> eval(std::span<const Taylor<Grad>> c) const = 0;
};

using FieldPtr = std::shared_ptr<const ScalarField>;

/// Adapter turning a generic callable (templated on the scalar type)
/// into a ScalarField.
template <class Fn>
class LambdaField final : public ScalarField {
public:
  LambdaField(int phaseDim, Fn fn) : dim_(phaseDim), fn_(std::move(fn)) {}

  int phaseDim() const override { return dim_; }
  double eval(std::span<const double> c) const override { return fn_(c); }
  Taylor<double> eval(std::span<const Taylor<double>> c) const override {
    return fn_(c);
  }
  Taylor<Grad> eval(std::span<const Taylor<Grad>> c) const override {
    return fn_(c);
  }

private:
  int dim_;
  Fn fn_;
};

template <class Fn>
FieldPtr makeField(int phaseDim, Fn fn) {
  return std::make_shared<LambdaField<Fn>>(phaseDim, std::move(fn));
}

}  // namespace fkm
