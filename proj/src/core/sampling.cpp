#include "core/sampling.hpp"

#include <cmath>

namespace fkm {

namespace {

uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(uint64_t seed) {
  uint64_t sm = seed;
  for (auto& s : s_) s = splitmix64(sm);
}

uint64_t Rng::next() {
  uint64_t result = rotl(s_[1] * 5, 7) * 9;
  uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform01() { return double(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) {
  return lo + uniform01() * (hi - lo);
}

double Rng::logUniform(double lo, double hi) {
  return std::exp(uniform(std::log(lo), std::log(hi)));
}

double Rng::gaussian() {
  if (haveSpare_) {
    haveSpare_ = false;
    return spare_;
  }
  double u1 = uniform01(), u2 = uniform01();
  while (u1 == 0.0) u1 = uniform01();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  haveSpare_ = true;
  return r * std::cos(a);
}

Eigen::VectorXd PointSampler::direction() {
  Eigen::VectorXd d(n_);
  do {
    for (int i = 0; i < n_; ++i) d[i] = rng_.gaussian();
  } while (d.norm() < 1e-8);
  return d / d.norm();
}

PhasePoint PointSampler::sample() {
  PhasePoint p;
  p.x.resize(n_);
  for (int i = 0; i < n_; ++i) p.x[i] = rng_.uniform(lo_, hi_);
  p.y = direction() * rng_.logUniform(0.1, 10.0);
  return p;
}

}  // namespace fkm
