#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "s3sr/curve.hpp"
#include "s3sr/euler.hpp"

namespace s3sr {

// Boundary data for f on [0,1]: f(0) = 0, f(1) = alpha, f'(0) = beta, f'(1) = gamma.
struct HermiteSpec {
  double alpha{0.0};
  double beta{0.0};
  double gamma{0.0};
};

// Dense polynomial, coefficients in increasing degree.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {}

  double operator()(double t) const;
  Polynomial derivative() const;
  // Exact ∫_a^b.
  double integral(double a, double b) const;
  // max |p| over [a, b] by sampling the endpoints and stationary points (degree ≤ 3).
  double max_abs(double a, double b) const;

  const std::vector<double>& coefficients() const { return c_; }
  std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }

 private:
  std::vector<double> c_;
};

// The cubic (0, β, 3α − 2β − γ, β + γ − 2α).
Polynomial hermite_f(const HermiteSpec& spec);

// q = f' for f = hermite_f({I, q0, q1}): q(0) = q0, q(1) = q1, ∫₀¹ q = I.
Polynomial q_with_integral(double q0, double q1, double integral);

// Thrown when no construction meets the endpoint tolerance.
class ConstructionError : public std::runtime_error {
 public:
  ConstructionError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

struct ConnectOptions {
  std::size_t samples{256};
  // Absolute and relative tolerance of the adaptive θ integration.
  double ode_tolerance{1e-12};
  double endpoint_tolerance{1e-8};
};

// The single-formula construction φ = φ0 + ks, ψ = branch + arctan q(s), θ from
// θ' = −k q(s) sin θ (the sin θ form of p' = −k q p √(1 − p²)).
struct DirectPlan {
  EulerAngles start;
  EulerAngles end;    // end point rewritten onto the branch of start
  double k{0.0};
  double branch{0.0};  // multiple of π added to arctan q
  Polynomial q;
  double integral{0.0};
  // min over sin θ at the ends, |cos ψ| at the ends, min(|k|, 1) and 1/(1 + max|q|).
  double conditioning{0.0};
};

// nullopt when the endpoints cannot be joined by one construction in this chart:
// a pole endpoint, cos ψ vanishing or changing sign, |k| < 1e-6, or |q| > 1e6.
std::optional<DirectPlan> plan_direct(const EulerAngles& p, const EulerAngles& q);

// Samples the plan on a uniform s-grid. Velocities are analytic.
SampledCurve realize(const DirectPlan& plan, const ConnectOptions& opts = {});

// Construction that lets ψ cross cos ψ = 0 and tolerates φ1 = φ0:
//   ψ(s) = ψ0 + sweep·s + bump·sin(πs),  φ' = g cos ψ,  θ' = −g sin ψ sin θ,
// where g = c_cos cos ψ + c_sin sin ψ is the smallest-norm choice meeting
// ∫g cos ψ = Δφ and ∫g sin ψ = −[ln tan(θ1/2) − ln tan(θ0/2)]. With g = k sec ψ it
// reduces to the direct construction. Among a few sweeps and bumps the one with the
// least ∫(g² + ψ'²) is kept.
struct SweepPlan {
  EulerAngles start;
  EulerAngles end;  // end point rewritten onto the branch of start
  double sweep{0.0};
  double bump{0.0};
  double c_cos{0.0};
  double c_sin{0.0};
  // min(sin θ at the ends, smallest Gram eigenvalue of (cos ψ, sin ψ)).
  double conditioning{0.0};

  double psi(double s) const;
  double dpsi(double s) const;
  double g(double s) const;
};

// nullopt when an endpoint lies on a pole (sin θ < 1e-6).
std::optional<SweepPlan> plan_sweep(const EulerAngles& p, const EulerAngles& q);
SampledCurve realize(const SweepPlan& plan, const ConnectOptions& opts = {});

// Smooth horizontal curve from P to Q. Identical endpoints give a 2-sample constant
// curve. Of the direct construction (when well conditioned) and the ψ sweep the one
// with the smaller ∫|γ̇|² is returned; pole endpoints are joined in a left-translated copy of the chart and
// translated back. params["route"] is 0 (direct), 1 (translated), 2 (constant) or
// 3 (sweep). Throws ConstructionError if the endpoint mismatch exceeds tolerance.
SampledCurve connect(const EulerAngles& p, const EulerAngles& q, const ConnectOptions& opts = {});
SampledCurve connect(const S3Point& p, const S3Point& q, const ConnectOptions& opts = {});

// Horizontal curve with constant ψ between (φ0, ψ, θ0) and (φ1, ψ, θ1):
//   ψ = arctan( ln(tan(θ1/2) / tan(θ0/2)) / (φ0 − φ1) )
//   φ(θ) = φ0 − ln(tan(θ/2) / tan(θ0/2)) / tan ψ
struct ConstantPsiSolution {
  double phi0{0.0};
  double theta0{0.0};
  double phi1{0.0};
  double theta1{0.0};
  double psi{0.0};

  double phi_at(double theta) const;
  double dphi_dtheta(double theta) const;
};

// Throws std::domain_error for θ outside (0, π) or identical endpoints.
ConstantPsiSolution constant_psi_solution(double phi0, double theta0, double phi1, double theta1);

struct ConstantPsiCurve {
  double psi{0.0};
  SampledCurve curve;
};

// Samples θ uniformly over [θ0, θ1]; when θ0 = θ1 the curve is the φ-arc at fixed θ
// with ψ = 0.
ConstantPsiCurve connect_constant_psi(double phi0, double theta0, double phi1, double theta1,
                                      std::size_t samples = 256);

}  // namespace s3sr
