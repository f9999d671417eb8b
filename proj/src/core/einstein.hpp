#pragma once

#include <string>
#include <vector>

#include "core/errors.hpp"

namespace fkm {

/// Parameters of the constant-curvature corollaries: amplitude A > 0,
/// sectional curvature c, energy density t >= 0.
struct EinsteinParams {
  double A;
  double c;
  double t;
};

/// u = A + sqrt(A^2 - 2ct); requires a nonnegative radicand.
double uFunction(const EinsteinParams& p);

/// v = (1/2t)(A - 4ct/A - sqrt(A^2 - 2ct)), evaluated in the equivalent
/// form c/(A + s) - 2c/A with s the radical (identical algebraically via
/// A - s = 2ct/(A + s); removes the t->0 cancellation and yields the
/// limit v(0) = -3c/(2A) directly).
double vFunction(const EinsteinParams& p);

/// du/dt = -c / sqrt(A^2 - 2ct) in closed form.
double uPrime(const EinsteinParams& p);

/// |v - (c - u u') / (2t u' - u)|; zero in exact arithmetic for the
/// corollary pair (u, v).
double integrabilityDefect(const EinsteinParams& p);

/// Domain report: the mathematical requirement is A^2 - 2ct >= 0; the
/// printed tube bound for c > 0 is t < A^2/c, which admits parameters
/// with a negative radicand -- such combinations are flagged
/// inconsistent rather than silently accepted.
struct DomainReport {
  bool radicandNonnegative;
  bool paperTubeBound;     // c <= 0: vacuously true
  bool uPositive;          // undefined radicand => false
  bool uPlus2tvPositive;   // undefined radicand => false
  bool consistent;         // paper bound satisfied but radicand negative => false
  bool allOk;              // radicand, u > 0, u + 2tv > 0
};

DomainReport domainCheck(const EinsteinParams& p);

struct SweepRow {
  double A, c, t;
  double u, v, defect;  // NaN outside the valid domain
  bool domainOk;
};

/// Cartesian sweep over A x c x [tMin, tMax] with the given step.
std::vector<SweepRow> einsteinSweep(const std::vector<double>& As,
                                    const std::vector<double>& cs, double tMin,
                                    double tMax, double tStep);

std::string einsteinCsv(const std::vector<SweepRow>& rows);

}  // namespace fkm
