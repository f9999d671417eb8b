#include "core/jet.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace fkm {

double Jet3::partial(std::span<const int> idx) const {
  if (static_cast<int>(idx.size()) > order)
    raise(ErrorCode::Order, "jet holds derivatives up to order " +
                                std::to_string(order) + ", requested order " +
                                std::to_string(idx.size()));
  for (int i : idx)
    if (i < 0 || i >= dim)
      raise(ErrorCode::Parameter, "derivative index out of range");
  switch (idx.size()) {
    case 0:
      return value;
    case 1:
      return grad[idx[0]];
    case 2:
      return hess(idx[0], idx[1]);
    default:
      return thirdAt(idx[0], idx[1], idx[2]);
  }
}

Jet3 evaluateJet(const ScalarField& f, const PhasePoint& p, int order) {
  if (order < 0 || order > 3)
    raise(ErrorCode::Order, "jet order must be in [0, 3]");
  checkPhasePoint(p);
  const int dim = f.phaseDim();
  if (dim != 2 * p.n())
    raise(ErrorCode::Parameter, "field/point dimension mismatch");

  auto lay = JetLayout::get(dim, order);
  std::vector<Taylor<double>> seeds;
  seeds.reserve(dim);
  const Eigen::VectorXd u = p.flat();
  for (int i = 0; i < dim; ++i)
    seeds.push_back(Taylor<double>::variable(lay, i, u[i]));
  Taylor<double> t = f.eval(std::span<const Taylor<double>>(seeds));

  Jet3 jet;
  jet.dim = dim;
  jet.order = order;
  jet.value = t.coeff(0);
  for (int idx = 0; idx < lay->count(); ++idx) {
    if (!std::isfinite(t.coeff(idx))) {
      std::string mono;
      const auto& e = lay->exponents(idx);
      for (int i = 0; i < dim; ++i)
        for (int k = 0; k < e[i]; ++k)
          mono += (i < dim / 2 ? " x" + std::to_string(i + 1)
                               : " y" + std::to_string(i - dim / 2 + 1));
      raise(ErrorCode::Domain,
            "non-finite jet coefficient for derivative w.r.t.{" + mono +
                " } -- field undefined near the evaluation point");
    }
  }

  if (order >= 1) {
    jet.grad.resize(dim);
    for (int i = 0; i < dim; ++i)
      jet.grad[i] = t.coeff(lay->variableIndex(i));
  }
  if (order >= 2) {
    jet.hess.setZero(dim, dim);
    for (int a = 0; a < dim; ++a)
      for (int b = a; b < dim; ++b) {
        int exp[JetLayout::kMaxDim] = {};
        exp[a] += 1;
        exp[b] += 1;
        int idx = lay->indexOf(std::span<const int>(exp, dim));
        double v = t.coeff(idx) * lay->factorial(idx);
        jet.hess(a, b) = v;
        jet.hess(b, a) = v;
      }
  }
  if (order >= 3) {
    jet.third.assign(static_cast<size_t>(dim) * dim * dim, 0.0);
    for (int a = 0; a < dim; ++a)
      for (int b = a; b < dim; ++b)
        for (int c = b; c < dim; ++c) {
          int exp[JetLayout::kMaxDim] = {};
          exp[a] += 1;
          exp[b] += 1;
          exp[c] += 1;
          int idx = lay->indexOf(std::span<const int>(exp, dim));
          double v = t.coeff(idx) * lay->factorial(idx);
          int perms[6][3] = {{a, b, c}, {a, c, b}, {b, a, c},
                             {b, c, a}, {c, a, b}, {c, b, a}};
          for (auto& q : perms)
            jet.third[(static_cast<size_t>(q[0]) * dim + q[1]) * dim + q[2]] =
                v;
        }
  }
  return jet;
}

namespace {

// Nested central differences: D_{i0} D_{i1} ... f, each level with its
// own coordinate step.
double nestedCentral(const ScalarField& f, Eigen::VectorXd& u,
                     std::span<const int> idx, std::span<const double> h) {
  if (idx.empty())
    return f.eval(std::span<const double>(u.data(), u.size()));
  int i = idx.front();
  auto rest = idx.subspan(1);
  u[i] += h[i];
  double fp = nestedCentral(f, u, rest, h);
  u[i] -= 2.0 * h[i];
  double fm = nestedCentral(f, u, rest, h);
  u[i] += h[i];
  return (fp - fm) / (2.0 * h[i]);
}

void walkIndices(int dim, int order, int start, std::vector<int>& idx,
                 const std::function<void(std::span<const int>)>& fn) {
  if (static_cast<int>(idx.size()) == order) {
    fn(std::span<const int>(idx));
    return;
  }
  for (int i = start; i < dim; ++i) {
    idx.push_back(i);
    walkIndices(dim, order, i, idx, fn);
    idx.pop_back();
  }
}

}  // namespace

double finiteDifferenceDefect(const ScalarField& f, const PhasePoint& p,
                              int order, double step) {
  if (step <= 0.0) raise(ErrorCode::Parameter, "finite difference step <= 0");
  Jet3 jet = evaluateJet(f, p, order);
  const int dim = jet.dim;
  const int n = dim / 2;

  std::vector<double> h(dim);
  double ynorm = p.y.norm();
  for (int i = 0; i < n; ++i) h[i] = step * std::max(1.0, std::abs(p.x[i]));
  for (int i = n; i < dim; ++i) h[i] = step * ynorm;

  double defect = 0.0;
  Eigen::VectorXd u = p.flat();
  std::vector<int> idx;
  walkIndices(dim, order, 0, idx, [&](std::span<const int> mi) {
    double ad = jet.partial(mi);
    double fd = nestedCentral(f, u, mi, h);
    double d = std::abs(ad - fd) / std::max({1.0, std::abs(ad), std::abs(fd)});
    defect = std::max(defect, d);
  });
  return defect;
}

}  // namespace fkm
