#pragma once

#include <Eigen/Core>
#include <cmath>

namespace fkm {

/// Forward-mode tangent scalar: a value together with its full gradient
/// with respect to the phase coordinates. An empty gradient vector means
/// an exact zero gradient (constants stay cheap inside polynomial
/// arithmetic). Used as the coefficient ring of Taylor<Grad> to obtain
/// derivatives of connection-level quantities one order beyond the jet
/// truncation.
class Grad {
public:
  Grad() : v_(0.0) {}
  Grad(double v) : v_(v) {}  // NOLINT: implicit by design (constants)
  Grad(double v, Eigen::VectorXd g) : v_(v), g_(std::move(g)) {}

  static Grad seed(double v, int dim, int var) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
    g[var] = 1.0;
    return Grad(v, std::move(g));
  }

  double value() const { return v_; }
  bool hasGrad() const { return g_.size() > 0; }
  const Eigen::VectorXd& gradRaw() const { return g_; }
  Eigen::VectorXd grad(int dim) const {
    return hasGrad() ? g_ : Eigen::VectorXd::Zero(dim);
  }
  double grad(int dim, int var) const { return hasGrad() ? g_[var] : 0.0; }

  Grad operator-() const { return hasGrad() ? Grad(-v_, -g_) : Grad(-v_); }

  friend Grad operator+(const Grad& a, const Grad& b) {
    if (!a.hasGrad()) return Grad(a.v_ + b.v_, b.g_);
    if (!b.hasGrad()) return Grad(a.v_ + b.v_, a.g_);
    return Grad(a.v_ + b.v_, a.g_ + b.g_);
  }
  friend Grad operator-(const Grad& a, const Grad& b) {
    if (!b.hasGrad()) return Grad(a.v_ - b.v_, a.g_);
    if (!a.hasGrad()) return Grad(a.v_ - b.v_, -b.g_);
    return Grad(a.v_ - b.v_, a.g_ - b.g_);
  }
  friend Grad operator*(const Grad& a, const Grad& b) {
    if (!a.hasGrad() && !b.hasGrad()) return Grad(a.v_ * b.v_);
    if (!a.hasGrad()) return Grad(a.v_ * b.v_, a.v_ * b.g_);
    if (!b.hasGrad()) return Grad(a.v_ * b.v_, b.v_ * a.g_);
    return Grad(a.v_ * b.v_, b.v_ * a.g_ + a.v_ * b.g_);
  }
  friend Grad operator/(const Grad& a, const Grad& b) {
    double inv = 1.0 / b.v_;
    double q = a.v_ * inv;
    if (!a.hasGrad() && !b.hasGrad()) return Grad(q);
    if (!b.hasGrad()) return Grad(q, inv * a.g_);
    if (!a.hasGrad()) return Grad(q, (-q * inv) * b.g_);
    return Grad(q, inv * a.g_ - (q * inv) * b.g_);
  }

  Grad& operator+=(const Grad& o) { return *this = *this + o; }
  Grad& operator-=(const Grad& o) { return *this = *this - o; }
  Grad& operator*=(const Grad& o) { return *this = *this * o; }
  Grad& operator/=(const Grad& o) { return *this = *this / o; }

private:
  double v_;
  Eigen::VectorXd g_;

  friend Grad chain(double fv, double dfv, const Grad& x);
};

/// f(x) with f' supplied: value fv = f(x.value()), derivative dfv.
inline Grad chain(double fv, double dfv, const Grad& x) {
  if (!x.hasGrad()) return Grad(fv);
  return Grad(fv, dfv * x.g_);
}

inline Grad sqrt(const Grad& x) {
  double s = std::sqrt(x.value());
  return chain(s, 0.5 / s, x);
}
inline Grad exp(const Grad& x) {
  double e = std::exp(x.value());
  return chain(e, e, x);
}
inline Grad log(const Grad& x) {
  return chain(std::log(x.value()), 1.0 / x.value(), x);
}
inline Grad sin(const Grad& x) {
  return chain(std::sin(x.value()), std::cos(x.value()), x);
}
inline Grad cos(const Grad& x) {
  return chain(std::cos(x.value()), -std::sin(x.value()), x);
}
inline Grad tan(const Grad& x) {
  double t = std::tan(x.value());
  return chain(t, 1.0 + t * t, x);
}
inline Grad atan(const Grad& x) {
  return chain(std::atan(x.value()), 1.0 / (1.0 + x.value() * x.value()), x);
}
inline Grad pow(const Grad& x, double p) {
  double f = std::pow(x.value(), p);
  return chain(f, p * std::pow(x.value(), p - 1.0), x);
}

inline double value_of(double x) { return x; }
inline double value_of(const Grad& x) { return x.value(); }

}  // namespace fkm
