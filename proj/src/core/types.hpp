#pragma once

#include <Eigen/Core>
#include <cmath>

#include "core/errors.hpp"

namespace fkm {

/// Point (x, y) on the slit tangent bundle; y must stay away from the
/// null section.
struct PhasePoint {
  Eigen::VectorXd x;
  Eigen::VectorXd y;

  int n() const { return static_cast<int>(x.size()); }

  Eigen::VectorXd flat() const {
    Eigen::VectorXd u(2 * n());
    u << x, y;
    return u;
  }

  static PhasePoint fromFlat(const Eigen::VectorXd& u) {
    int n = static_cast<int>(u.size()) / 2;
    return PhasePoint{u.head(n), u.tail(n)};
  }
};

inline void checkPhasePoint(const PhasePoint& p) {
  if (p.x.size() != p.y.size())
    raise(ErrorCode::Parameter, "phase point has mismatched x/y dimensions");
  if (!p.x.allFinite() || !p.y.allFinite())
    raise(ErrorCode::Domain, "phase point has non-finite coordinates");
  if (p.y.lpNorm<Eigen::Infinity>() == 0.0)
    raise(ErrorCode::Domain,
          "phase point lies on the null section (y = 0 is excluded)");
}

}  // namespace fkm
