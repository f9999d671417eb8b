#include "core/metric.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "core/jet.hpp"

namespace fkm {

namespace {

template <class T>
T quadraticForm(const Eigen::MatrixXd& A, std::span<const T> c, int n) {
  // sum_ij A_ij y_i y_j over the fiber slots of the phase vector.
  T acc = c[n] * c[n] * A(0, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == 0 && j == 0) continue;
      if (A(i, j) != 0.0) acc += c[n + i] * c[n + j] * A(i, j);
    }
  return acc;
}

/// F^2 for expression-entry Riemannian metrics.
class RiemannF2 final : public ScalarField {
public:
  RiemannF2(int n, std::vector<std::vector<ExprPtr>> entries)
      : n_(n), entries_(std::move(entries)) {}

  int phaseDim() const override { return 2 * n_; }
  double eval(std::span<const double> c) const override { return evalT(c); }
  Taylor<double> eval(std::span<const Taylor<double>> c) const override {
    return evalT(c);
  }
  Taylor<Grad> eval(std::span<const Taylor<Grad>> c) const override {
    return evalT(c);
  }

private:
  template <class T>
  T evalT(std::span<const T> c) const {
    T acc = entries_[0][0]->eval(c) * c[n_] * c[n_];
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        if (i == 0 && j == 0) continue;
        acc += entries_[i][j]->eval(c) * c[n_ + i] * c[n_ + j];
      }
    return acc;
  }

  int n_;
  std::vector<std::vector<ExprPtr>> entries_;
};

}  // namespace

std::string metricKindName(MetricKind k) {
  switch (k) {
    case MetricKind::Euclidean:
      return "euclidean";
    case MetricKind::Riemannian:
      return "riemannian";
    case MetricKind::Randers:
      return "randers";
    case MetricKind::Quartic:
      return "quartic";
    case MetricKind::Custom:
      return "custom";
  }
  return "?";
}

FundamentalFunction FundamentalFunction::euclidean(int n) {
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  auto f2 = makeField(2 * n, [eye, n](auto c) {
    return quadraticForm(eye, c, n);
  });
  auto f = makeField(2 * n, [eye, n](auto c) {
    using std::sqrt;
    return sqrt(quadraticForm(eye, c, n));
  });
  return FundamentalFunction(n, MetricKind::Euclidean, std::move(f),
                             std::move(f2));
}

FundamentalFunction FundamentalFunction::riemannian(
    int n, const std::vector<std::vector<std::string>>& entries) {
  if (static_cast<int>(entries.size()) != n)
    raise(ErrorCode::Parameter, "riemannian entries must form an n x n grid");
  std::vector<std::vector<ExprPtr>> parsed(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(entries[i].size()) != n)
      raise(ErrorCode::Parameter, "riemannian entries must form an n x n grid");
    for (int j = 0; j < n; ++j) {
      auto e = Expression::parse(entries[i][j], n);
      if (!e->baseOnly())
        raise(ErrorCode::Parameter,
              "riemannian metric entries may depend on x only: '" +
                  entries[i][j] + "'");
      parsed[i].push_back(std::move(e));
    }
  }
  auto f2 = std::make_shared<RiemannF2>(n, parsed);
  auto f = makeField(2 * n, [f2](auto c) {
    using std::sqrt;
    return sqrt(f2->eval(c));
  });
  return FundamentalFunction(n, MetricKind::Riemannian, std::move(f), f2);
}

FundamentalFunction FundamentalFunction::polar() {
  return riemannian(2, {{"1", "0"}, {"0", "x1^2"}});
}

FundamentalFunction FundamentalFunction::randers(
    int n, const Eigen::VectorXd& b, std::optional<Eigen::MatrixXd> alphaOpt,
    bool allowInvalid) {
  if (b.size() != n)
    raise(ErrorCode::Parameter, "randers covector length must equal dimension");
  Eigen::MatrixXd alpha =
      alphaOpt ? *alphaOpt : Eigen::MatrixXd::Identity(n, n);
  if (alpha.rows() != n || alpha.cols() != n ||
      !alpha.isApprox(alpha.transpose(), 1e-12))
    raise(ErrorCode::Parameter, "randers alpha must be a symmetric n x n matrix");
  Eigen::LLT<Eigen::MatrixXd> llt(alpha);
  if (llt.info() != Eigen::Success)
    raise(ErrorCode::Parameter, "randers alpha must be positive definite");
  double bnorm2 = b.dot(llt.solve(b));
  if (!allowInvalid && bnorm2 >= 1.0)
    raise(ErrorCode::Parameter,
          "randers covector has alpha-norm " + std::to_string(std::sqrt(bnorm2)) +
              " >= 1; the metric is not positive definite");

  auto f = makeField(2 * n, [alpha, b, n](auto c) {
    using std::sqrt;
    auto a = sqrt(quadraticForm(alpha, c, n));
    for (int i = 0; i < n; ++i)
      if (b[i] != 0.0) a += c[n + i] * b[i];
    return a;
  });
  auto f2 = makeField(2 * n, [f](auto c) {
    auto v = f->eval(c);
    return v * v;
  });
  return FundamentalFunction(n, MetricKind::Randers, std::move(f),
                             std::move(f2));
}

FundamentalFunction FundamentalFunction::quartic(int n) {
  auto f2 = makeField(2 * n, [n](auto c) {
    using std::sqrt;
    auto q = c[n] * c[n] * c[n] * c[n];
    for (int i = 1; i < n; ++i) {
      auto y2 = c[n + i] * c[n + i];
      q += y2 * y2;
    }
    return sqrt(q);
  });
  auto f = makeField(2 * n, [n](auto c) {
    using std::pow;
    auto q = c[n] * c[n] * c[n] * c[n];
    for (int i = 1; i < n; ++i) {
      auto y2 = c[n + i] * c[n + i];
      q += y2 * y2;
    }
    return pow(q, 0.25);
  });
  return FundamentalFunction(n, MetricKind::Quartic, std::move(f),
                             std::move(f2));
}

FundamentalFunction FundamentalFunction::custom(int n,
                                                const std::string& fExpr) {
  auto f = Expression::parse(fExpr, n);
  auto f2 = makeField(2 * n, [f](auto c) {
    auto v = f->eval(c);
    return v * v;
  });
  return FundamentalFunction(n, MetricKind::Custom, std::move(f),
                             std::move(f2));
}

double FundamentalFunction::norm(const PhasePoint& p) const {
  Eigen::VectorXd u = p.flat();
  return f_->eval(std::span<const double>(u.data(), u.size()));
}

MetricTensor metricTensor(const FundamentalFunction& F, const PhasePoint& p) {
  const int n = F.dimension();
  Jet3 jet = evaluateJet(F.F2(), p, 2);
  Eigen::MatrixXd g = 0.5 * jet.hess.block(n, n, n, n);
  return MetricTensor{std::move(g), p};
}

Eigen::MatrixXd inverseMetric(const MetricTensor& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m.g);
  if (llt.info() != Eigen::Success)
    raise(ErrorCode::Regularity,
          "metric tensor is not positive definite; cannot invert");
  return llt.solve(Eigen::MatrixXd::Identity(m.g.rows(), m.g.cols()));
}

double energyDensity(const FundamentalFunction& F, const PhasePoint& p) {
  checkPhasePoint(p);
  double f = F.norm(p);
  return 0.5 * f * f;
}

Eigen::VectorXd lowerIndex(const FundamentalFunction& F, const PhasePoint& p) {
  const int n = F.dimension();
  Jet3 jet = evaluateJet(F.F2(), p, 1);
  return 0.5 * jet.grad.tail(n);
}

namespace {

constexpr double kUndefinedDefect = 9e99;  // non-finite evaluation sentinel

void recordFailure(ConditionReport& cond, double defect, int sample,
                   const std::string& note) {
  if (cond.pass) cond.note = note + " at sample " + std::to_string(sample);
  cond.pass = false;
  if (defect > cond.worstDefect) {
    cond.worstDefect = defect;
    cond.worstSample = sample;
  }
}

}  // namespace

ValidationReport validateFinsler(const FundamentalFunction& F,
                                 std::span<const PhasePoint> samples) {
  if (samples.empty())
    raise(ErrorCode::Parameter, "validation requires at least one sample");
  ValidationReport rep;
  rep.sampleCount = static_cast<int>(samples.size());
  const double lambdas[] = {0.5, 2.0, 10.0};
  const double homTol = 1e-9;

  for (int s = 0; s < rep.sampleCount; ++s) {
    const PhasePoint& p = samples[s];

    double f = F.norm(p);
    if (!std::isfinite(f))
      recordFailure(rep.positivity, kUndefinedDefect, s, "non-finite F");
    else if (f <= 0.0)
      recordFailure(rep.positivity, -f, s, "non-positive F");

    for (double l : lambdas) {
      PhasePoint q{p.x, l * p.y};
      double fl = F.norm(q);
      double defect = std::abs(fl - l * f) / std::max(1.0, std::abs(l * f));
      if (!std::isfinite(defect))
        recordFailure(rep.homogeneity, kUndefinedDefect, s,
                      "non-finite homogeneity defect");
      else if (defect > homTol)
        recordFailure(rep.homogeneity, defect, s, "homogeneity defect");
      else
        rep.homogeneity.worstDefect =
            std::max(rep.homogeneity.worstDefect, defect);
    }

    try {
      MetricTensor g = metricTensor(F, p);
      Eigen::LLT<Eigen::MatrixXd> llt(g.g);
      if (!g.g.allFinite() || llt.info() != Eigen::Success) {
        double defect = kUndefinedDefect;
        if (g.g.allFinite()) {
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.g);
          defect = std::max(0.0, -es.eigenvalues().minCoeff());
        }
        recordFailure(rep.definiteness, defect, s,
                      "Cholesky factorization failed");
      }
    } catch (const Error&) {
      recordFailure(rep.definiteness, kUndefinedDefect, s,
                    "non-finite fiber Hessian");
    }
  }

  rep.pass = rep.positivity.pass && rep.homogeneity.pass &&
             rep.definiteness.pass;
  return rep;
}

}  // namespace fkm
