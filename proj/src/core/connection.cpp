#include "core/connection.hpp"

#include <cmath>

#include "core/jet.hpp"

namespace fkm {

namespace {

/// Dense Gauss-Jordan inverse over a generic scalar ring with partial
/// pivoting on |value|; row-major n x n.
template <class S>
std::vector<S> invertDense(std::vector<S> a, int n) {
  std::vector<S> inv(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i) inv[i * n + i] = S(1.0);

  double scale = 0.0;
  for (auto& v : a) scale = std::max(scale, std::abs(value_of(v)));
  const double tiny = scale * 1e-14 + 1e-300;

  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(value_of(a[r * n + col])) >
          std::abs(value_of(a[piv * n + col])))
        piv = r;
    if (std::abs(value_of(a[piv * n + col])) <= tiny)
      raise(ErrorCode::Regularity,
            "metric tensor is numerically singular (pivot " +
                std::to_string(col) + ")");
    if (piv != col)
      for (int c = 0; c < n; ++c) {
        std::swap(a[piv * n + c], a[col * n + c]);
        std::swap(inv[piv * n + c], inv[col * n + c]);
      }
    S d = a[col * n + col];
    for (int c = 0; c < n; ++c) {
      a[col * n + c] = a[col * n + c] / d;
      inv[col * n + c] = inv[col * n + c] / d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      S f = a[r * n + col];
      if (value_of(f) == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        a[r * n + c] = a[r * n + c] - f * a[col * n + c];
        inv[r * n + c] = inv[r * n + c] - f * inv[col * n + c];
      }
    }
  }
  return inv;
}

template <class S>
struct ConnectionCore {
  std::vector<S> g, gInv;  // n*n row-major
  std::vector<S> spray;    // n
  std::vector<S> N;        // n*n row-major
};

/// Everything below is a closed formula in the order-3 Taylor
/// coefficients of F^2 at p, valid over any coefficient ring:
///   G^i   = 1/4 g^il rhs_l,          rhs_l = y^k F2_{y_l x_k} - F2_{x_l}
///   N^i_j = dG^i/dy^j
///         = 1/4 [ -(g^-1 dg/dy_j g^-1)^il rhs_l + g^il drhs_l/dy^j ]
/// so tangent-mode coefficients (S = Grad) carry the fourth-order
/// information needed for derivatives of N without a wider jet.
template <class S>
ConnectionCore<S> connectionCore(const ScalarField& f2, int n,
                                 std::span<const S> coords) {
  const int dim = 2 * n;
  auto lay = JetLayout::get(dim, 3);
  std::vector<Taylor<S>> seeds;
  seeds.reserve(dim);
  for (int i = 0; i < dim; ++i)
    seeds.push_back(Taylor<S>::variable(lay, i, coords[i]));
  Taylor<S> t = f2.eval(std::span<const Taylor<S>>(seeds));

  auto P1 = [&](int a) {
    int e[JetLayout::kMaxDim] = {};
    e[a] += 1;
    return t.partial(lay->indexOf(std::span<const int>(e, dim)));
  };
  auto P2 = [&](int a, int b) {
    int e[JetLayout::kMaxDim] = {};
    e[a] += 1;
    e[b] += 1;
    return t.partial(lay->indexOf(std::span<const int>(e, dim)));
  };
  auto P3 = [&](int a, int b, int c) {
    int e[JetLayout::kMaxDim] = {};
    e[a] += 1;
    e[b] += 1;
    e[c] += 1;
    return t.partial(lay->indexOf(std::span<const int>(e, dim)));
  };
  auto xv = [&](int i) { return i; };
  auto yv = [&](int i) { return n + i; };

  ConnectionCore<S> out;
  out.g.resize(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out.g[a * n + b] = P2(yv(a), yv(b)) * 0.5;

  for (const S& v : out.g)
    if (!std::isfinite(value_of(v)))
      raise(ErrorCode::Domain,
            "fiber Hessian of F^2 is non-finite at the phase point");
  out.gInv = invertDense(out.g, n);

  // rhs_l and its fiber derivative
  std::vector<S> rhs(n);
  std::vector<S> drhs(static_cast<size_t>(n) * n);  // [l][j]
  for (int l = 0; l < n; ++l) {
    S acc = -P1(xv(l));
    for (int k = 0; k < n; ++k) acc += coords[yv(k)] * P2(yv(l), xv(k));
    rhs[l] = acc;
    for (int j = 0; j < n; ++j) {
      S d = P2(yv(l), xv(j)) - P2(yv(j), xv(l));
      for (int k = 0; k < n; ++k) d += coords[yv(k)] * P3(yv(j), yv(l), xv(k));
      drhs[l * n + j] = d;
    }
  }

  std::vector<S> gInvRhs(n);  // = 4 G^i
  out.spray.resize(n);
  for (int i = 0; i < n; ++i) {
    S acc = S(0.0);
    for (int l = 0; l < n; ++l) acc += out.gInv[i * n + l] * rhs[l];
    gInvRhs[i] = acc;
    out.spray[i] = acc * 0.25;
  }

  out.N.resize(static_cast<size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    // dgInv/dy^j = -gInv (dg/dy^j) gInv, with dg_ab/dy^j = 1/2 F2_{y_j y_a y_b}
    std::vector<S> dgTimes(n);
    for (int a = 0; a < n; ++a) {
      S acc = S(0.0);
      for (int b = 0; b < n; ++b)
        acc += P3(yv(j), yv(a), yv(b)) * 0.5 * gInvRhs[b];
      dgTimes[a] = acc;
    }
    for (int i = 0; i < n; ++i) {
      S acc = S(0.0);
      for (int l = 0; l < n; ++l) acc += out.gInv[i * n + l] * drhs[l * n + j];
      S corr = S(0.0);
      for (int a = 0; a < n; ++a) corr += out.gInv[i * n + a] * dgTimes[a];
      out.N[i * n + j] = (acc - corr) * 0.25;
    }
  }
  return out;
}

std::vector<double> doubleCoords(const PhasePoint& p) {
  Eigen::VectorXd u = p.flat();
  return std::vector<double>(u.data(), u.data() + u.size());
}

}  // namespace

ConnectionData connectionAt(const FundamentalFunction& F,
                            const PhasePoint& p) {
  checkPhasePoint(p);
  const int n = F.dimension();
  auto coords = doubleCoords(p);
  auto core = connectionCore<double>(F.F2(), n, coords);
  ConnectionData out;
  out.g = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>(core.g.data(), n, n);
  out.gInv = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                      Eigen::RowMajor>>(core.gInv.data(), n, n);
  out.spray = Eigen::Map<Eigen::VectorXd>(core.spray.data(), n);
  out.N = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>(core.N.data(), n, n);
  if (!out.N.allFinite() || !out.spray.allFinite())
    raise(ErrorCode::Domain, "non-finite connection at the phase point");
  return out;
}

Eigen::VectorXd sprayCoefficients(const FundamentalFunction& F,
                                  const PhasePoint& p) {
  return connectionAt(F, p).spray;
}

Eigen::MatrixXd nonlinearConnection(const FundamentalFunction& F,
                                    const PhasePoint& p) {
  return connectionAt(F, p).N;
}

ConnectionGradients connectionGradients(const FundamentalFunction& F,
                                        const PhasePoint& p) {
  checkPhasePoint(p);
  const int n = F.dimension();
  const int dim = 2 * n;
  Eigen::VectorXd u = p.flat();
  std::vector<Grad> coords;
  coords.reserve(dim);
  for (int i = 0; i < dim; ++i) coords.push_back(Grad::seed(u[i], dim, i));
  auto core = connectionCore<Grad>(F.F2(), n, coords);

  ConnectionGradients out;
  out.N.resize(n, n);
  out.dN.assign(n, std::vector<Eigen::VectorXd>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out.N(i, j) = core.N[i * n + j].value();
      out.dN[i][j] = core.N[i * n + j].grad(dim);
    }
  return out;
}

Eigen::MatrixXd AdaptedFrame::frame() const {
  const int n = static_cast<int>(N.rows());
  Eigen::MatrixXd E = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  E.block(n, 0, n, n) = -N;
  return E;
}

Eigen::MatrixXd AdaptedFrame::coframe() const {
  const int n = static_cast<int>(N.rows());
  Eigen::MatrixXd C = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  C.block(n, 0, n, n) = N;
  return C;
}

AdaptedFrame adaptedFrame(const FundamentalFunction& F, const PhasePoint& p) {
  return AdaptedFrame{nonlinearConnection(F, p)};
}

double adaptedPartialX(const FundamentalFunction& F, const ScalarField& f,
                       const PhasePoint& p, int i) {
  const int n = F.dimension();
  if (i < 0 || i >= n) raise(ErrorCode::Parameter, "direction out of range");
  Eigen::MatrixXd N = nonlinearConnection(F, p);
  Jet3 jet = evaluateJet(f, p, 1);
  double acc = jet.grad[i];
  for (int j = 0; j < n; ++j) acc -= N(j, i) * jet.grad[n + j];
  return acc;
}

}  // namespace fkm
