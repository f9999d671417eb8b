#include <doctest.h>

#include "core/expr.hpp"
#include "core/jet.hpp"
#include "core/metric.hpp"
#include "core/sampling.hpp"

using namespace fkm;

namespace {

PhasePoint pt(std::initializer_list<double> x, std::initializer_list<double> y) {
  PhasePoint p;
  p.x = Eigen::VectorXd(x.size());
  p.y = Eigen::VectorXd(y.size());
  int i = 0;
  for (double v : x) p.x[i++] = v;
  i = 0;
  for (double v : y) p.y[i++] = v;
  return p;
}

}  // namespace

TEST_CASE("jet of x1*y1^2 matches hand differentiation") {
  auto f = Expression::parse("x1*y1^2", 1);
  Jet3 jet = evaluateJet(*f, pt({2}, {3}), 3);
  CHECK(jet.value == doctest::Approx(18.0));
  CHECK(jet.partial(std::vector<int>{0}) == doctest::Approx(9.0));   // d/dx1
  CHECK(jet.partial(std::vector<int>{1}) == doctest::Approx(12.0));  // d/dy1
  CHECK(jet.partial(std::vector<int>{1, 1}) == doctest::Approx(4.0));
  CHECK(jet.partial(std::vector<int>{0, 1, 1}) == doctest::Approx(2.0));
  // cross-check against the independent finite-difference oracle
  CHECK(finiteDifferenceDefect(*f, pt({2}, {3}), 1, 1e-5) < 1e-9);
  CHECK(finiteDifferenceDefect(*f, pt({2}, {3}), 2, 1e-4) < 1e-7);
  CHECK(finiteDifferenceDefect(*f, pt({2}, {3}), 3, 1e-3) < 1e-6);
}

TEST_CASE("constant and linear fields") {
  auto c7 = Expression::parse("7", 2);
  Jet3 jc = evaluateJet(*c7, pt({0.3, -1.0}, {2.0, 0.5}), 3);
  CHECK(jc.value == 7.0);
  CHECK(jc.grad.cwiseAbs().maxCoeff() == 0.0);
  CHECK(jc.hess.cwiseAbs().maxCoeff() == 0.0);
  CHECK(finiteDifferenceDefect(*c7, pt({0.3, -1.0}, {2.0, 0.5}), 1, 1e-5) ==
        0.0);

  auto lin = Expression::parse("y1 + y2", 2);
  Jet3 jl = evaluateJet(*lin, pt({0, 0}, {1, 1}), 2);
  CHECK(jl.grad[2] == doctest::Approx(1.0));
  CHECK(jl.grad[3] == doctest::Approx(1.0));
  CHECK(jl.grad.head(2).cwiseAbs().maxCoeff() == 0.0);
  CHECK(jl.hess.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("partial accessor symmetrizes and guards the order") {
  auto f = Expression::parse("x1*y1^2", 1);
  Jet3 jet = evaluateJet(*f, pt({2}, {3}), 2);
  CHECK(jet.partial(std::vector<int>{}) == doctest::Approx(18.0));
  CHECK(jet.partial(std::vector<int>{0, 1}) ==
        jet.partial(std::vector<int>{1, 0}));
  CHECK_THROWS_AS((void)jet.partial(std::vector<int>{0, 1, 1}), Error);
  try {
    (void)jet.partial(std::vector<int>{0, 1, 1});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Order);
  }
}

TEST_CASE("order argument controls populated levels") {
  auto f = Expression::parse("x1*y1^2", 1);
  Jet3 j0 = evaluateJet(*f, pt({2}, {3}), 0);
  CHECK(j0.value == doctest::Approx(18.0));
  CHECK(j0.grad.size() == 0);
  CHECK_THROWS_AS(evaluateJet(*f, pt({2}, {3}), 4), Error);
}

TEST_CASE("evaluation off the slit bundle raises a domain error") {
  FundamentalFunction F = FundamentalFunction::euclidean(2);
  CHECK_THROWS_AS(evaluateJet(F.F(), pt({0, 0}, {0, 0}), 1), Error);
  // NaN inside the field itself (pseudo-norm at an invalid direction)
  auto pseudo = Expression::parse("sqrt(y1^2 - y2^2)", 2);
  try {
    evaluateJet(*pseudo, pt({0, 0}, {1.0, 2.0}), 1);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Domain);
    CHECK(std::string(e.what()).find("non-finite") != std::string::npos);
  }
}

TEST_CASE("quartic F^2 jets agree with finite differences at spec steps") {
  FundamentalFunction F = FundamentalFunction::quartic(2);
  PhasePoint p = pt({0, 0}, {1.0, 1.0});
  CHECK(finiteDifferenceDefect(F.F2(), p, 2, 1e-4) < 1e-5);
}

TEST_CASE("fd defect bounds hold over random points for every built-in") {
  std::vector<FundamentalFunction> metrics;
  metrics.push_back(FundamentalFunction::euclidean(2));
  metrics.push_back(FundamentalFunction::polar());
  metrics.push_back(FundamentalFunction::randers(
      2, (Eigen::VectorXd(2) << 0.5, 0.0).finished()));
  metrics.push_back(FundamentalFunction::quartic(2));
  PointSampler sampler(1234, 2);
  for (const auto& F : metrics)
    for (int i = 0; i < 25; ++i) {
      PhasePoint p = sampler.sample();
      CHECK(finiteDifferenceDefect(F.F2(), p, 1, 1e-5) < 1e-6);
      CHECK(finiteDifferenceDefect(F.F2(), p, 2, 1e-4) < 1e-4);
      CHECK(finiteDifferenceDefect(F.F2(), p, 3, 1e-3) < 1e-4);
    }
}
