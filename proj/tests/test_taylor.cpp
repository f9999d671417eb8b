#include <doctest.h>

#include "core/grad.hpp"
#include "core/taylor.hpp"

using namespace fkm;

namespace {

Taylor<double> var(std::shared_ptr<const JetLayout> lay, int i, double v) {
  return Taylor<double>::variable(lay, i, v);
}

double partialOf(const Taylor<double>& t, std::initializer_list<int> idx) {
  int e[JetLayout::kMaxDim] = {};
  for (int i : idx) e[i] += 1;
  int slot = t.layout()->indexOf(std::span<const int>(e, t.layout()->dim()));
  REQUIRE(slot >= 0);
  return t.partial(slot);
}

}  // namespace

TEST_CASE("layout enumerates the truncated monomial basis") {
  auto lay = JetLayout::get(2, 3);
  CHECK(lay->count() == 10);  // 1 + 2 + 3 + 4
  CHECK(lay->degree(0) == 0);
  CHECK(lay->variableIndex(0) == 1);
  CHECK(lay->variableIndex(1) == 2);
  auto lay4 = JetLayout::get(4, 3);
  CHECK(lay4->count() == 35);
  // cached instances are shared
  CHECK(JetLayout::get(2, 3).get() == lay.get());
}

TEST_CASE("polynomial arithmetic reproduces hand derivatives") {
  auto lay = JetLayout::get(2, 3);
  // f(u, w) = u^2 w + 3 w at (u, w) = (2, 5)
  auto u = var(lay, 0, 2.0);
  auto w = var(lay, 1, 5.0);
  auto f = u * u * w + w * 3.0;
  CHECK(f.coeff(0) == doctest::Approx(35.0));
  CHECK(partialOf(f, {0}) == doctest::Approx(20.0));       // 2uw
  CHECK(partialOf(f, {1}) == doctest::Approx(7.0));        // u^2 + 3
  CHECK(partialOf(f, {0, 0}) == doctest::Approx(10.0));    // 2w
  CHECK(partialOf(f, {0, 1}) == doctest::Approx(4.0));     // 2u
  CHECK(partialOf(f, {0, 0, 1}) == doctest::Approx(2.0));
  CHECK(partialOf(f, {1, 1}) == doctest::Approx(0.0));
}

TEST_CASE("division, sqrt and pow agree with closed forms") {
  auto lay = JetLayout::get(1, 3);
  auto u = var(lay, 0, 4.0);

  auto r = sqrt(u);
  CHECK(r.coeff(0) == doctest::Approx(2.0));
  CHECK(partialOf(r, {0}) == doctest::Approx(0.25));
  CHECK(partialOf(r, {0, 0}) == doctest::Approx(-1.0 / 32.0));
  CHECK(partialOf(r, {0, 0, 0}) == doctest::Approx(3.0 / 256.0));

  auto q = (u * u + 1.0) / u;  // u + 1/u
  CHECK(q.coeff(0) == doctest::Approx(4.25));
  CHECK(partialOf(q, {0}) == doctest::Approx(1.0 - 1.0 / 16.0));
  CHECK(partialOf(q, {0, 0}) == doctest::Approx(2.0 / 64.0));

  auto p = pow(u, 0.25);
  CHECK(p.coeff(0) == doctest::Approx(std::pow(4.0, 0.25)));
  CHECK(partialOf(p, {0}) ==
        doctest::Approx(0.25 * std::pow(4.0, -0.75)));

  auto ip = ipow(u - 5.0, 3);  // (u-5)^3 at u=4 -> -1
  CHECK(ip.coeff(0) == doctest::Approx(-1.0));
  CHECK(partialOf(ip, {0}) == doctest::Approx(3.0));   // 3(u-5)^2
  CHECK(partialOf(ip, {0, 0}) == doctest::Approx(-6.0));
}

TEST_CASE("transcendentals chain through composition") {
  auto lay = JetLayout::get(1, 3);
  auto u = var(lay, 0, 0.7);
  auto f = sin(u) * exp(u);
  double s = std::sin(0.7), c = std::cos(0.7), e = std::exp(0.7);
  CHECK(f.coeff(0) == doctest::Approx(s * e));
  CHECK(partialOf(f, {0}) == doctest::Approx(e * (s + c)));
  CHECK(partialOf(f, {0, 0}) == doctest::Approx(2.0 * e * c));
  auto g = log(u * u);
  CHECK(partialOf(g, {0}) == doctest::Approx(2.0 / 0.7));
}

TEST_CASE("tangent coefficients carry one extra derivative order") {
  // f(u) = u^3 with Grad-seeded coefficients: the gradient of the
  // second derivative recovers the third.
  auto lay = JetLayout::get(1, 2);  // order 2 on purpose
  Grad seed = Grad::seed(2.0, 1, 0);
  auto u = Taylor<Grad>::variable(lay, 0, seed);
  auto f = u * u * u;
  int e[JetLayout::kMaxDim] = {2};
  int slot = lay->indexOf(std::span<const int>(e, 1));
  Grad second = f.partial(slot);
  CHECK(second.value() == doctest::Approx(12.0));        // 6u
  CHECK(second.grad(1)[0] == doctest::Approx(6.0));      // d(6u)/du
}

TEST_CASE("grad arithmetic handles empty gradients as exact zeros") {
  Grad a = Grad::seed(3.0, 2, 0);
  Grad b(5.0);  // constant
  Grad c = a * b + b;
  CHECK(c.value() == doctest::Approx(20.0));
  CHECK(c.grad(2)[0] == doctest::Approx(5.0));
  CHECK(c.grad(2)[1] == doctest::Approx(0.0));
  Grad d = b / a;
  CHECK(d.grad(2)[0] == doctest::Approx(-5.0 / 9.0));
}
