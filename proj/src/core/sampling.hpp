#pragma once

#include <cstdint>

#include "core/types.hpp"

namespace fkm {

/// xoshiro256** with splitmix64 seeding. Self-contained so that seeded
/// streams are identical across standard libraries (std distributions
/// are implementation-defined, which would break byte-identical verify
/// reports).
class Rng {
public:
  explicit Rng(uint64_t seed);

  uint64_t next();
  double uniform01();                       // [0, 1)
  double uniform(double lo, double hi);
  double logUniform(double lo, double hi);  // lo, hi > 0
  double gaussian();                        // Box-Muller, one at a time

private:
  uint64_t s_[4];
  bool haveSpare_ = false;
  double spare_ = 0.0;
};

/// Random phase points: base coordinates uniform in [boxLo, boxHi]^n,
/// fiber directions uniform on the sphere scaled by a log-uniform radius
/// in [0.1, 10] (exercises both homogeneity scaling regimes).
class PointSampler {
public:
  PointSampler(uint64_t seed, int n, double boxLo = 0.5, double boxHi = 2.0)
      : rng_(seed), n_(n), lo_(boxLo), hi_(boxHi) {}

  PhasePoint sample();
  Eigen::VectorXd direction();  // unit vector

private:
  Rng rng_;
  int n_;
  double lo_, hi_;
};

}  // namespace fkm
