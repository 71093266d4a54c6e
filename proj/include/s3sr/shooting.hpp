#pragma once

#include <cstdint>
#include <numbers>

#include "s3sr/curve.hpp"
#include "s3sr/geodesic.hpp"

namespace s3sr {

struct ShootConfig {
  double tol{1e-6};
  int theta_starts{8};
  int lambda_starts{9};
  int time_starts{6};
  double lambda_max{8.0};
  double time_max{2.0 * std::numbers::pi};
  int max_iterations{100};
  double fd_step{1e-6};
  // Extra seeded random starts, used only when no grid start converges.
  int random_starts{256};
  std::uint64_t seed{0};
  // Step of the integrator that produces the returned curve.
  double step{1e-3};
  int workers{1};
};

struct ShootingResult {
  GeodesicParams params;  // r = 1
  double T{0.0};
  double endpoint_error{0.0};
  SampledCurve curve;
  int starts_tried{0};
  bool converged{false};
};

// Unit-speed geodesic from P towards Q: multi-start Levenberg–Marquardt on
// |γ_{θ0,λ}(T) − Q|² over (θ0, λ, T). Among converged starts the shortest T wins
// (ties go to the lowest start index); otherwise the smallest residual. The returned
// endpoint_error is re-measured on the integrated curve. θ0 is reported in (−π, π].
// Throws std::domain_error for non-unit P or Q.
ShootingResult shoot(const S3Point& p, const S3Point& q, const ShootConfig& cfg = {});

}  // namespace s3sr
