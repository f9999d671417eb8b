#include "core/einstein.hpp"

#include <cmath>
#include <limits>

#include "core/text.hpp"

namespace fkm {

namespace {

void checkBasic(const EinsteinParams& p) {
  if (!(p.A > 0.0)) raise(ErrorCode::Parameter, "einstein A must be > 0");
  if (!(p.t >= 0.0)) raise(ErrorCode::Parameter, "einstein t must be >= 0");
}

double radicand(const EinsteinParams& p) { return p.A * p.A - 2.0 * p.c * p.t; }

void checkRadicand(const EinsteinParams& p) {
  checkBasic(p);
  if (radicand(p) < 0.0)
    raise(ErrorCode::Domain,
          "A^2 - 2ct = " + formatDouble(radicand(p)) +
              " < 0: u, v undefined here (the printed tube bound t < A^2/c "
              "admits such points; see domain_check)");
}

}  // namespace

double uFunction(const EinsteinParams& p) {
  checkRadicand(p);
  return p.A + std::sqrt(radicand(p));
}

double vFunction(const EinsteinParams& p) {
  checkRadicand(p);
  double s = std::sqrt(radicand(p));
  return p.c / (p.A + s) - 2.0 * p.c / p.A;
}

double uPrime(const EinsteinParams& p) {
  checkRadicand(p);
  double s = std::sqrt(radicand(p));
  if (s == 0.0)
    raise(ErrorCode::Domain, "u' diverges where the radicand vanishes");
  return -p.c / s;
}

double integrabilityDefect(const EinsteinParams& p) {
  double u = uFunction(p);
  double up = uPrime(p);
  double v = vFunction(p);
  double den = 2.0 * p.t * up - u;
  if (den == 0.0 || !std::isfinite(den))
    raise(ErrorCode::Domain, "degenerate parameters: 2 t u' - u vanishes");
  return std::abs(v - (p.c - u * up) / den);
}

DomainReport domainCheck(const EinsteinParams& p) {
  checkBasic(p);
  DomainReport r{};
  r.radicandNonnegative = radicand(p) >= 0.0;
  r.paperTubeBound = p.c <= 0.0 || p.t < p.A * p.A / p.c;
  if (r.radicandNonnegative) {
    double u = uFunction(p);
    double v = vFunction(p);
    r.uPositive = u > 0.0;
    r.uPlus2tvPositive = u + 2.0 * p.t * v > 0.0;
  }
  r.consistent = !(r.paperTubeBound && !r.radicandNonnegative);
  r.allOk = r.radicandNonnegative && r.uPositive && r.uPlus2tvPositive;
  return r;
}

std::vector<SweepRow> einsteinSweep(const std::vector<double>& As,
                                    const std::vector<double>& cs, double tMin,
                                    double tMax, double tStep) {
  if (!(tStep > 0.0) || !(tMax >= tMin) || tMin < 0.0)
    raise(ErrorCode::Parameter, "invalid einstein sweep grid");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<SweepRow> rows;
  const long steps = std::lround(std::floor((tMax - tMin) / tStep + 1e-9));
  for (double A : As)
    for (double c : cs)
      for (long k = 0; k <= steps; ++k) {
        double t = tMin + k * tStep;
        EinsteinParams p{A, c, t};
        SweepRow row{A, c, t, nan, nan, nan, false};
        DomainReport dom = domainCheck(p);
        row.domainOk = dom.allOk;
        if (dom.radicandNonnegative) {
          row.u = uFunction(p);
          row.v = vFunction(p);
          // u' (and with it the corollary ratio) diverges at a vanishing
          // radicand; leave the defect undefined there.
          if (radicand(p) > 0.0) row.defect = integrabilityDefect(p);
        }
        rows.push_back(row);
      }
  return rows;
}

std::string einsteinCsv(const std::vector<SweepRow>& rows) {
  std::string out = "A,c,t,u,v,defect,domain_ok\n";
  for (const auto& r : rows) {
    out += formatDouble(r.A) + "," + formatDouble(r.c) + "," +
           formatDouble(r.t) + "," + formatDouble(r.u) + "," +
           formatDouble(r.v) + "," + formatDouble(r.defect) + "," +
           (r.domainOk ? "true" : "false") + "\n";
  }
  return out;
}

}  // namespace fkm
