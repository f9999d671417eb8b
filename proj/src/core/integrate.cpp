#include "core/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace fkm {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Stepper {
  const FlowField& rhs;

  Eigen::VectorXd rk4(double t, const Eigen::VectorXd& u, double h) const {
    Eigen::VectorXd k1 = rhs(t, u);
    Eigen::VectorXd k2 = rhs(t + 0.5 * h, u + 0.5 * h * k1);
    Eigen::VectorXd k3 = rhs(t + 0.5 * h, u + 0.5 * h * k2);
    Eigen::VectorXd k4 = rhs(t + h, u + h * k3);
    return u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  /// One Dormand-Prince step; fills the 4th/5th order difference.
  Eigen::VectorXd dopri(double t, const Eigen::VectorXd& u, double h,
                        Eigen::VectorXd& errOut) const {
    Eigen::VectorXd k1 = rhs(t, u);
    Eigen::VectorXd k2 = rhs(t + c2 * h, u + h * (a21 * k1));
    Eigen::VectorXd k3 = rhs(t + c3 * h, u + h * (a31 * k1 + a32 * k2));
    Eigen::VectorXd k4 = rhs(t + c4 * h, u + h * (a41 * k1 + a42 * k2 + a43 * k3));
    Eigen::VectorXd k5 =
        rhs(t + c5 * h, u + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    Eigen::VectorXd k6 = rhs(
        t + h, u + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Eigen::VectorXd u5 =
        u + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    Eigen::VectorXd k7 = rhs(t + h, u5);
    errOut = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    return u5;
  }

  Eigen::VectorXd implicitMidpoint(double t, const Eigen::VectorXd& u,
                                   double h) const {
    // Fixed-point iteration on the midpoint stage.
    Eigen::VectorXd mid = u + 0.5 * h * rhs(t, u);
    for (int it = 0; it < 64; ++it) {
      Eigen::VectorXd next = u + 0.5 * h * rhs(t + 0.5 * h, mid);
      double delta = (next - mid).lpNorm<Eigen::Infinity>();
      mid = next;
      if (delta < 1e-14 * (1.0 + mid.lpNorm<Eigen::Infinity>())) break;
    }
    return 2.0 * mid - u;
  }
};

bool belowNull(const Eigen::VectorXd& u, double tol) {
  const int n = static_cast<int>(u.size()) / 2;
  return u.tail(n).norm() < tol;
}

}  // namespace

Trajectory integrate(const FlowField& rhs, const PhasePoint& p0, double t0,
                     double t1, const IntegratorConfig& cfg,
                     const DiagnosticFn& diag) {
  checkPhasePoint(p0);
  if (!(t1 > t0)) raise(ErrorCode::Parameter, "time span requires t1 > t0");
  if (cfg.method != IntegratorMethod::RK45Adaptive && !(cfg.step > 0.0))
    raise(ErrorCode::Parameter, "fixed-step methods require step > 0");
  if (!(cfg.tol > 0.0))
    raise(ErrorCode::Parameter, "adaptive method requires tol > 0");

  Stepper st{rhs};
  Trajectory tr;
  tr.config = cfg;

  Eigen::VectorXd u = p0.flat();
  double t = t0;

  auto record = [&](double time, const Eigen::VectorXd& state, double h) {
    PhasePoint p = PhasePoint::fromFlat(state);
    TrajectorySample s;
    s.t = time;
    s.p = p;
    s.stepSize = h;
    if (diag) s.diagnostics = diag(time, p);
    tr.samples.push_back(std::move(s));
  };
  record(t0, u, 0.0);

  auto abortNull = [&](double time) {
    tr.aborted = true;
    tr.abortReason =
        "flow reached the null section (|y| < nullTolerance) at t = " +
        formatDouble(time);
  };

  if (cfg.method == IntegratorMethod::RK4Fixed ||
      cfg.method == IntegratorMethod::ImplicitMidpoint) {
    const double h = cfg.step;
    const long steps = std::lround(std::ceil((t1 - t0) / h - 1e-12));
    for (long i = 0; i < steps; ++i) {
      double tNext = (i + 1 == steps) ? t1 : t0 + (i + 1) * h;
      double hEff = tNext - t;
      Eigen::VectorXd next = cfg.method == IntegratorMethod::RK4Fixed
                                 ? st.rk4(t, u, hEff)
                                 : st.implicitMidpoint(t, u, hEff);
      if (!next.allFinite())
        raise(ErrorCode::Domain,
              "flow produced a non-finite state at t = " + formatDouble(tNext));
      u = next;
      t = tNext;
      record(t, u, hEff);
      if (belowNull(u, cfg.nullTolerance)) {
        abortNull(t);
        return tr;
      }
    }
    return tr;
  }

  // Adaptive Dormand-Prince with local extrapolation.
  double h = std::min((t1 - t0) / 100.0, 0.1);
  const double hMin = (t1 - t0) * 1e-14;
  Eigen::VectorXd err;
  while (t < t1) {
    bool lastStep = t + h >= t1;
    double hTry = lastStep ? (t1 - t) : h;
    Eigen::VectorXd next = st.dopri(t, u, hTry, err);

    double errNorm = 0.0;
    bool finite = next.allFinite() && err.allFinite();
    if (finite) {
      for (int i = 0; i < u.size(); ++i) {
        double scale =
            cfg.tol + cfg.tol * std::max(std::abs(u[i]), std::abs(next[i]));
        errNorm = std::max(errNorm, std::abs(err[i]) / scale);
      }
    } else {
      errNorm = HUGE_VAL;
    }

    if (errNorm <= 1.0) {
      t = lastStep ? t1 : t + hTry;
      u = next;
      record(t, u, hTry);
      if (belowNull(u, cfg.nullTolerance)) {
        abortNull(t);
        return tr;
      }
      double grow = finite && errNorm > 0.0
                        ? 0.9 * std::pow(errNorm, -0.2)
                        : 5.0;
      h = hTry * std::clamp(grow, 0.2, 5.0);
    } else {
      double shrink = std::isfinite(errNorm) ? 0.9 * std::pow(errNorm, -0.2)
                                             : 0.1;
      h = hTry * std::clamp(shrink, 0.1, 0.9);
      if (h < hMin)
        raise(ErrorCode::Stiffness,
              "adaptive step underflow at t = " + formatDouble(t) +
                  " (step " + formatDouble(h) + "); system too stiff");
    }
  }
  return tr;
}

double conservedQuantityDrift(
    const Trajectory& tr, const std::function<double(const PhasePoint&)>& q) {
  if (tr.samples.empty())
    raise(ErrorCode::Parameter, "drift of an empty trajectory");
  double q0 = q(tr.samples.front().p);
  double drift = 0.0;
  for (const auto& s : tr.samples)
    drift = std::max(drift, std::abs(q(s.p) - q0));
  return drift;
}

std::string trajectoryCsv(const Trajectory& tr) {
  std::string out;
  const int n = tr.samples.empty() ? 0 : tr.samples.front().p.n();
  out += "t";
  for (int i = 1; i <= n; ++i) out += ",x" + std::to_string(i);
  for (int i = 1; i <= n; ++i) out += ",y" + std::to_string(i);
  out += ",norm_y,energy,res_family2,step_size\n";
  auto diagOr0 = [](const TrajectorySample& s, const char* key) {
    auto it = s.diagnostics.find(key);
    return it == s.diagnostics.end() ? 0.0 : it->second;
  };
  for (const auto& s : tr.samples) {
    out += formatDouble(s.t);
    for (int i = 0; i < n; ++i) out += "," + formatDouble(s.p.x[i]);
    for (int i = 0; i < n; ++i) out += "," + formatDouble(s.p.y[i]);
    out += "," + formatDouble(diagOr0(s, "norm_y"));
    out += "," + formatDouble(diagOr0(s, "energy"));
    out += "," + formatDouble(diagOr0(s, "res_family2"));
    out += "," + formatDouble(s.stepSize);
    out += "\n";
  }
  return out;
}

}  // namespace fkm
