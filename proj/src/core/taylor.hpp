#pragma once

#include <cmath>
#include <memory>
#include <span>
#include <vector>

#include "core/grad.hpp"
#include "core/multiindex.hpp"

namespace fkm {

/// Truncated multivariate Taylor polynomial over a coefficient ring C
/// (double for plain jets, Grad for jets-with-tangents). Coefficient at
/// multi-index mu holds d^mu f / mu!, so arithmetic on seeded variables
/// propagates exact derivatives up to the layout order.
template <class C>
class Taylor {
public:
  Taylor() = default;
  explicit Taylor(std::shared_ptr<const JetLayout> lay)
      : lay_(std::move(lay)), c_(lay_->count()) {}

  static Taylor constant(std::shared_ptr<const JetLayout> lay, C v) {
    Taylor t(std::move(lay));
    t.c_[0] = std::move(v);
    return t;
  }

  static Taylor variable(std::shared_ptr<const JetLayout> lay, int var, C v) {
    Taylor t(lay);
    t.c_[0] = std::move(v);
    if (lay->order() >= 1) t.c_[lay->variableIndex(var)] = C(1.0);
    return t;
  }

  const std::shared_ptr<const JetLayout>& layout() const { return lay_; }
  const C& coeff(int idx) const { return c_[idx]; }
  C& coeff(int idx) { return c_[idx]; }

  /// Exact partial derivative for the multi-index at layout slot `idx`.
  C partial(int idx) const { return c_[idx] * C(lay_->factorial(idx)); }

  Taylor operator-() const {
    Taylor out(lay_);
    for (size_t i = 0; i < c_.size(); ++i) out.c_[i] = -c_[i];
    return out;
  }

  friend Taylor operator+(const Taylor& a, const Taylor& b) {
    Taylor out(a.lay_);
    for (size_t i = 0; i < out.c_.size(); ++i) out.c_[i] = a.c_[i] + b.c_[i];
    return out;
  }
  friend Taylor operator-(const Taylor& a, const Taylor& b) {
    Taylor out(a.lay_);
    for (size_t i = 0; i < out.c_.size(); ++i) out.c_[i] = a.c_[i] - b.c_[i];
    return out;
  }
  friend Taylor operator*(const Taylor& a, const Taylor& b) {
    Taylor out(a.lay_);
    for (const auto& m : a.lay_->mulTable())
      out.c_[m.dst] += a.c_[m.a] * b.c_[m.b];
    return out;
  }
  friend Taylor operator/(const Taylor& a, const Taylor& b) {
    return a * reciprocal(b);
  }

  friend Taylor operator+(const Taylor& a, const C& s) {
    Taylor out = a;
    out.c_[0] += s;
    return out;
  }
  friend Taylor operator+(const C& s, const Taylor& a) { return a + s; }
  friend Taylor operator-(const Taylor& a, const C& s) {
    Taylor out = a;
    out.c_[0] -= s;
    return out;
  }
  friend Taylor operator-(const C& s, const Taylor& a) { return -(a - s); }
  friend Taylor operator*(const Taylor& a, const C& s) {
    Taylor out(a.lay_);
    for (size_t i = 0; i < out.c_.size(); ++i) out.c_[i] = a.c_[i] * s;
    return out;
  }
  friend Taylor operator*(const C& s, const Taylor& a) { return a * s; }
  friend Taylor operator/(const Taylor& a, const C& s) {
    return a * (C(1.0) / s);
  }
  friend Taylor operator/(const C& s, const Taylor& a) {
    return reciprocal(a) * s;
  }

  Taylor& operator+=(const Taylor& o) { return *this = *this + o; }
  Taylor& operator-=(const Taylor& o) { return *this = *this - o; }
  Taylor& operator*=(const Taylor& o) { return *this = *this * o; }

private:
  std::shared_ptr<const JetLayout> lay_;
  std::vector<C> c_;
};

/// Composition with a univariate function given its derivatives at the
/// constant term: g(u) = sum_m derivs[m]/m! * (u - u0)^m, truncated.
template <class C>
Taylor<C> compose(const Taylor<C>& u, std::span<const C> derivs) {
  const auto& lay = u.layout();
  const int order = lay->order();
  Taylor<C> w = u;
  w.coeff(0) = C(0.0);
  double mfact = 1.0;
  for (int m = 2; m <= order; ++m) mfact *= m;
  Taylor<C> acc = Taylor<C>::constant(lay, derivs[order] * C(1.0 / mfact));
  for (int m = order - 1; m >= 0; --m) {
    double f = 1.0;
    for (int i = 2; i <= m; ++i) f *= i;
    acc = acc * w + Taylor<C>::constant(lay, derivs[m] * C(1.0 / f));
  }
  return acc;
}

/// Derivative ladder for c^p: d_m = p (p-1) ... (p-m+1) c^(p-m).
template <class C>
Taylor<C> powSeries(const Taylor<C>& u, double p) {
  const int order = u.layout()->order();
  std::vector<C> d(order + 1);
  using std::pow;
  d[0] = pow(u.coeff(0), p);
  for (int m = 1; m <= order; ++m)
    d[m] = d[m - 1] * C(p - (m - 1)) / u.coeff(0);
  return compose(u, std::span<const C>(d));
}

template <class C>
Taylor<C> reciprocal(const Taylor<C>& u) {
  const int order = u.layout()->order();
  std::vector<C> d(order + 1);
  d[0] = C(1.0) / u.coeff(0);
  for (int m = 1; m <= order; ++m) d[m] = d[m - 1] * C(-double(m)) / u.coeff(0);
  return compose(u, std::span<const C>(d));
}

template <class C>
Taylor<C> sqrt(const Taylor<C>& u) {
  return powSeries(u, 0.5);
}

template <class C>
Taylor<C> pow(const Taylor<C>& u, double p) {
  return powSeries(u, p);
}

/// Integer power by repeated multiplication; valid for any base sign.
template <class C>
Taylor<C> ipow(const Taylor<C>& u, long k) {
  const auto& lay = u.layout();
  if (k == 0) return Taylor<C>::constant(lay, C(1.0));
  if (k < 0) return reciprocal(ipow(u, -k));
  Taylor<C> acc = Taylor<C>::constant(lay, C(1.0));
  Taylor<C> base = u;
  for (long e = k; e > 0; e >>= 1) {
    if (e & 1) acc = acc * base;
    if (e > 1) base = base * base;
  }
  return acc;
}

template <class C>
Taylor<C> exp(const Taylor<C>& u) {
  const int order = u.layout()->order();
  using std::exp;
  std::vector<C> d(order + 1, exp(u.coeff(0)));
  return compose(u, std::span<const C>(d));
}

template <class C>
Taylor<C> log(const Taylor<C>& u) {
  const int order = u.layout()->order();
  std::vector<C> d(order + 1);
  using std::log;
  d[0] = log(u.coeff(0));
  if (order >= 1) d[1] = C(1.0) / u.coeff(0);
  for (int m = 2; m <= order; ++m)
    d[m] = d[m - 1] * C(-double(m - 1)) / u.coeff(0);
  return compose(u, std::span<const C>(d));
}

template <class C>
Taylor<C> sin(const Taylor<C>& u) {
  const int order = u.layout()->order();
  using std::cos;
  using std::sin;
  C s = sin(u.coeff(0)), c = cos(u.coeff(0));
  std::vector<C> cycle = {s, c, -s, -c};
  std::vector<C> d(order + 1);
  for (int m = 0; m <= order; ++m) d[m] = cycle[m % 4];
  return compose(u, std::span<const C>(d));
}

template <class C>
Taylor<C> cos(const Taylor<C>& u) {
  const int order = u.layout()->order();
  using std::cos;
  using std::sin;
  C s = sin(u.coeff(0)), c = cos(u.coeff(0));
  std::vector<C> cycle = {c, -s, -c, s};
  std::vector<C> d(order + 1);
  for (int m = 0; m <= order; ++m) d[m] = cycle[m % 4];
  return compose(u, std::span<const C>(d));
}

template <class C>
Taylor<C> tan(const Taylor<C>& u) {
  return sin(u) / cos(u);
}

template <class C>
Taylor<C> atan(const Taylor<C>& u) {
  // atan' = 1/(1+c^2); higher derivatives via the rational ladder.
  const int order = u.layout()->order();
  using std::atan;
  const C& c = u.coeff(0);
  C q = C(1.0) + c * c;
  std::vector<C> d(order + 1);
  d[0] = atan(c);
  if (order >= 1) d[1] = C(1.0) / q;
  if (order >= 2) d[2] = C(-2.0) * c / (q * q);
  if (order >= 3) d[3] = (C(6.0) * c * c - C(2.0)) / (q * q * q);
  return compose(u, std::span<const C>(d));
}

}  // namespace fkm
