#include <doctest.h>

#include <vector>

#include "core/expr.hpp"
#include "core/jet.hpp"

using namespace fkm;

namespace {

double evalAt(const Expression& e, std::vector<double> coords) {
  return e.eval(std::span<const double>(coords));
}

}  // namespace

TEST_CASE("expression evaluation and precedence") {
  auto e = Expression::parse("1 + 2*3^2", 1);
  CHECK(evalAt(*e, {0, 0}) == doctest::Approx(19.0));
  auto f = Expression::parse("-x1^2", 1);          // -(x1^2)
  CHECK(evalAt(*f, {3, 0}) == doctest::Approx(-9.0));
  auto g = Expression::parse("2^-2", 1);
  CHECK(evalAt(*g, {0, 1}) == doctest::Approx(0.25));
  auto h = Expression::parse("sin(pi/2) + cos(0)", 1);
  CHECK(evalAt(*h, {0, 1}) == doctest::Approx(2.0));
  auto k = Expression::parse("sqrt(x1^2 + y1^2)", 1);
  CHECK(evalAt(*k, {3, 4}) == doctest::Approx(5.0));
}

TEST_CASE("variables map to phase slots") {
  auto e = Expression::parse("x2 + 10*y1", 2);
  CHECK(evalAt(*e, {1, 2, 3, 4}) == doctest::Approx(32.0));
  CHECK_FALSE(e->baseOnly());
  CHECK(Expression::parse("x1*x2", 2)->baseOnly());
}

TEST_CASE("parse errors carry positions and paths") {
  CHECK_THROWS_AS(Expression::parse("x3", 2), Error);
  CHECK_THROWS_AS(Expression::parse("1 +", 2), Error);
  CHECK_THROWS_AS(Expression::parse("foo(1)", 2), Error);
  CHECK_THROWS_AS(Expression::parse("sin 1", 2), Error);
  CHECK_THROWS_AS(Expression::parse("(1", 2), Error);
  CHECK_THROWS_AS(Expression::parse("x1 ^ y1", 2), Error);  // non-const exponent
  try {
    Expression::parse("y9", 2);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Config);
    CHECK(std::string(e.what()).find("dimension") != std::string::npos);
  }
}

TEST_CASE("expressions differentiate exactly through jets") {
  auto e = Expression::parse("exp(x1)*sin(y1) + atan(y1)", 1);
  PhasePoint p{(Eigen::VectorXd(1) << 0.5).finished(),
               (Eigen::VectorXd(1) << 0.8).finished()};
  CHECK(finiteDifferenceDefect(*e, p, 1, 1e-6) < 1e-8);
  CHECK(finiteDifferenceDefect(*e, p, 2, 1e-4) < 1e-6);
  CHECK(finiteDifferenceDefect(*e, p, 3, 1e-3) < 1e-5);
  auto t = Expression::parse("tan(y1)*log(x1)", 1);
  CHECK(finiteDifferenceDefect(*t, p, 2, 1e-4) < 1e-6);
}

TEST_CASE("integer powers accept negative bases") {
  auto e = Expression::parse("y1^3", 1);
  CHECK(evalAt(*e, {0, -2}) == doctest::Approx(-8.0));
  PhasePoint p{(Eigen::VectorXd(1) << 1.0).finished(),
               (Eigen::VectorXd(1) << -2.0).finished()};
  Jet3 j = evaluateJet(*e, p, 2);
  CHECK(j.partial(std::vector<int>{1}) == doctest::Approx(12.0));
  CHECK(j.partial(std::vector<int>{1, 1}) == doctest::Approx(-12.0));
}
