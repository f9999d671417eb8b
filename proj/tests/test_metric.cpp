#include <doctest.h>

#include "core/jet.hpp"
#include "core/metric.hpp"
#include "core/sampling.hpp"

using namespace fkm;

namespace {

PhasePoint pt2(double x1, double x2, double y1, double y2) {
  return PhasePoint{(Eigen::VectorXd(2) << x1, x2).finished(),
                    (Eigen::VectorXd(2) << y1, y2).finished()};
}

const double kSqrt2 = std::sqrt(2.0);

}  // namespace

TEST_CASE("euclidean metric tensor is the identity") {
  FundamentalFunction F = FundamentalFunction::euclidean(2);
  MetricTensor g = metricTensor(F, pt2(0.3, -0.7, 1.5, -2.0));
  CHECK((g.g - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("quartic metric at y=(1,1) matches the hand value") {
  FundamentalFunction F = FundamentalFunction::quartic(2);
  MetricTensor g = metricTensor(F, pt2(0, 0, 1, 1));
  CHECK(g.g(0, 0) == doctest::Approx(kSqrt2).epsilon(1e-12));
  CHECK(g.g(1, 1) == doctest::Approx(kSqrt2).epsilon(1e-12));
  CHECK(g.g(0, 1) == doctest::Approx(-kSqrt2 / 2.0).epsilon(1e-12));
  CHECK(g.g(1, 0) == g.g(0, 1));
  // FD oracle on the same Hessian
  CHECK(finiteDifferenceDefect(F.F2(), pt2(0, 0, 1, 1), 2, 1e-4) < 1e-5);

  Eigen::MatrixXd inv = inverseMetric(g);
  CHECK((g.g * inv - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("randers metric and energy at the spec point") {
  FundamentalFunction F = FundamentalFunction::randers(
      2, (Eigen::VectorXd(2) << 0.5, 0.0).finished());
  PhasePoint p = pt2(0, 0, 1, 0);
  CHECK(F.norm(p) == doctest::Approx(1.5));
  CHECK(energyDensity(F, p) == doctest::Approx(1.125));
  MetricTensor g = metricTensor(F, p);
  CHECK(g.g(0, 0) == doctest::Approx(2.25).epsilon(1e-12));
  CHECK(finiteDifferenceDefect(F.F2(), p, 2, 1e-4) < 1e-6);
}

TEST_CASE("inverse metric on simple diagonals") {
  FundamentalFunction F = FundamentalFunction::euclidean(2);
  MetricTensor g = metricTensor(F, pt2(0, 0, 1, 1));
  g.g = (Eigen::MatrixXd(2, 2) << 1, 0, 0, 4).finished();
  Eigen::MatrixXd inv = inverseMetric(g);
  CHECK(inv(0, 0) == doctest::Approx(1.0));
  CHECK(inv(1, 1) == doctest::Approx(0.25));
  g.g = (Eigen::MatrixXd(2, 2) << 1, 0, 0, -1).finished();
  CHECK_THROWS_AS(inverseMetric(g), Error);
}

TEST_CASE("energy density scales quadratically in y") {
  FundamentalFunction F = FundamentalFunction::euclidean(2);
  CHECK(energyDensity(F, pt2(0, 0, 3, 4)) == doctest::Approx(12.5));
  PointSampler sampler(77, 2);
  for (int i = 0; i < 20; ++i) {
    PhasePoint p = sampler.sample();
    PhasePoint q{p.x, 2.0 * p.y};
    CHECK(energyDensity(F, q) ==
          doctest::Approx(4.0 * energyDensity(F, p)).epsilon(1e-12));
  }
}

TEST_CASE("lower_index satisfies the norm identity on every built-in") {
  std::vector<FundamentalFunction> metrics;
  metrics.push_back(FundamentalFunction::euclidean(2));
  metrics.push_back(FundamentalFunction::polar());
  metrics.push_back(FundamentalFunction::randers(
      2, (Eigen::VectorXd(2) << 0.5, 0.0).finished()));
  metrics.push_back(FundamentalFunction::quartic(2));

  {  // euclidean example from the spec
    Eigen::VectorXd yl = lowerIndex(metrics[0], pt2(0, 0, 3, 4));
    CHECK(yl[0] == doctest::Approx(3.0));
    CHECK(yl[1] == doctest::Approx(4.0));
    CHECK(yl.dot(pt2(0, 0, 3, 4).y) == doctest::Approx(25.0));
  }

  PointSampler sampler(99, 2);
  for (const auto& F : metrics)
    for (int i = 0; i < 40; ++i) {
      PhasePoint p = sampler.sample();
      double f = F.norm(p);
      Eigen::VectorXd half = lowerIndex(F, p);
      Eigen::VectorXd gy = metricTensor(F, p).g * p.y;
      CHECK(std::abs(half.dot(p.y) - f * f) < 1e-10);
      CHECK((half - gy).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("validate passes the euclidean metric on random samples") {
  FundamentalFunction F = FundamentalFunction::euclidean(2);
  PointSampler sampler(42, 2);
  std::vector<PhasePoint> pts;
  for (int i = 0; i < 100; ++i) pts.push_back(sampler.sample());
  ValidationReport rep = validateFinsler(F, pts);
  CHECK(rep.pass);
  CHECK(rep.positivity.pass);
  CHECK(rep.homogeneity.pass);
  CHECK(rep.definiteness.pass);
}

TEST_CASE("validate rejects the pseudo-norm") {
  FundamentalFunction F =
      FundamentalFunction::custom(2, "sqrt(y1^2 - y2^2)");
  PointSampler sampler(42, 2);
  std::vector<PhasePoint> pts;
  for (int i = 0; i < 100; ++i) pts.push_back(sampler.sample());
  ValidationReport rep = validateFinsler(F, pts);
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(rep.positivity.pass);
  CHECK_FALSE(rep.definiteness.pass);
}

TEST_CASE("randers validity bound") {
  Eigen::VectorXd big = (Eigen::VectorXd(2) << 1.5, 0.0).finished();
  CHECK_THROWS_AS(FundamentalFunction::randers(2, big), Error);

  FundamentalFunction F = FundamentalFunction::randers(2, big, {}, true);
  // y along -b: F = |y| - 1.5 |y| < 0, a concrete positivity failure
  ValidationReport rep =
      validateFinsler(F, std::vector<PhasePoint>{pt2(0, 0, -1, 0)});
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(rep.positivity.pass);

  PointSampler sampler(42, 2);
  std::vector<PhasePoint> pts;
  for (int i = 0; i < 100; ++i) pts.push_back(sampler.sample());
  CHECK_FALSE(validateFinsler(F, pts).pass);
}

TEST_CASE("metric homogeneity of degree zero") {
  std::vector<FundamentalFunction> metrics;
  metrics.push_back(FundamentalFunction::polar());
  metrics.push_back(FundamentalFunction::quartic(2));
  PointSampler sampler(5, 2);
  for (const auto& F : metrics)
    for (int i = 0; i < 30; ++i) {
      PhasePoint p = sampler.sample();
      Eigen::MatrixXd g = metricTensor(F, p).g;
      for (double l : {0.5, 2.0, 10.0}) {
        Eigen::MatrixXd gl = metricTensor(F, {p.x, l * p.y}).g;
        CHECK((gl - g).cwiseAbs().maxCoeff() < 1e-9 * (1.0 + g.norm()));
      }
    }
}

TEST_CASE("custom riemannian entries must be x-only") {
  CHECK_THROWS_AS(FundamentalFunction::riemannian(2, {{"1", "0"}, {"0", "y1"}}),
                  Error);
  CHECK_THROWS_AS(FundamentalFunction::riemannian(2, {{"1"}, {"0", "x1"}}),
                  Error);
}
