#pragma once

#include <cmath>
#include <cstdint>

#include "lsg/linalg.hpp"

namespace lsg {

// Deterministic generator (splitmix64 core, hand-rolled distributions) so
// suite residuals are bit-identical for a given seed on any platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform() {  // [0,1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double normal() {
    // Box-Muller; draws two uniforms per call, no caching (determinism over speed)
    double u1 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  cplx normal_c() { return {normal(), normal()}; }

  VecC spinor(int dim) {
    VecC v(dim);
    for (int i = 0; i < dim; ++i) v(i) = normal_c();
    return v;
  }

  VecR vector(int dim) {
    VecR v(dim);
    for (int i = 0; i < dim; ++i) v(i) = normal();
    return v;
  }

 private:
  uint64_t state_;
};

}  // namespace lsg
