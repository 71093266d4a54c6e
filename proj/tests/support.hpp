#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "s3sr/quaternion.hpp"

namespace s3sr::testing {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  Quat quat(double scale = 1.0) {
    return {uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale)};
  }

  // Uniform on S³ (normalized Gaussian).
  S3Point unit() {
    std::normal_distribution<double> n;
    return S3Point::normalized(Quat{n(rng_), n(rng_), n(rng_), n(rng_)});
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline double max_diff(const Quat& a, const Quat& b) {
  return std::max({std::abs(a.w - b.w), std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}

}  // namespace s3sr::testing
