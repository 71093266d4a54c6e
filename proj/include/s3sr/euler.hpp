#pragma once

#include "s3sr/quaternion.hpp"

namespace s3sr {

// Chart coordinates on S³:
//   x1 = cos α cos θ/2,  x2 = sin α cos θ/2,  y1 = cos β sin θ/2,  y2 = sin β sin θ/2
// with α = (φ + ψ)/2, β = (φ − ψ)/2 and θ ∈ [0, π]. φ and ψ are not normalized.
struct EulerAngles {
  double phi{0.0};
  double psi{0.0};
  double theta{0.0};

  double alpha() const { return 0.5 * (phi + psi); }
  double beta() const { return 0.5 * (phi - psi); }
};

// Time derivatives (φ̇, ψ̇, θ̇).
struct EulerRates {
  double phi{0.0};
  double psi{0.0};
  double theta{0.0};
};

// Throws std::domain_error when θ ∉ [0, π].
S3Point to_cartesian(const EulerAngles& e);

// Chain-rule pushforward of the rates to a Cartesian velocity at to_cartesian(e).
Quat pushforward(const EulerAngles& e, const EulerRates& rates);

enum class ChartSingularity {
  None,
  BetaUndefined,   // θ = 0: y = 0
  AlphaUndefined,  // θ = π: x = 0
};

struct ChartPoint {
  EulerAngles angles;
  ChartSingularity singularity{ChartSingularity::None};
};

// atan2-based inverse; the undefined angle at a pole is reported as 0.
ChartPoint from_cartesian(const S3Point& q);

// ½(sin θ sin ψ φ̇ + cos ψ θ̇), the restriction of ω to S³.
double omega_euler(const EulerAngles& e, const EulerRates& rates);

// |sin θ sin ψ φ̇ + cos ψ θ̇|.
double horizontality_residual_euler(const EulerAngles& e, const EulerRates& rates);

// Wraps an angle into (−π, π].
double wrap_angle(double a);

}  // namespace s3sr
