#pragma once

#include <vector>

#include "s3sr/curve.hpp"
#include "s3sr/frame.hpp"
#include "s3sr/quaternion.hpp"

namespace s3sr {

// Controls a(s) = r cos(2λs + θ0), b(s) = r sin(2λs + θ0) of a sub-Riemannian geodesic.
struct GeodesicParams {
  double r{1.0};
  double theta0{0.0};
  double lambda{0.0};

  // Throws std::domain_error when r < 0 or a field is not finite.
  void validate() const;
};

struct ControlPair {
  double a{0.0};
  double b{0.0};
};

ControlPair ab_profile(const GeodesicParams& p, double s);

// Pure-imaginary control with γ̇ = γ·u(s) = a X + b Y, i.e. u = −a i − b k.
Vec3 control(const GeodesicParams& p, double s);

// Uniform grid of ceil(T/h) steps (h shrunk to divide T). Each step is one group
// exponential (two-point Gauss Magnus, fourth order), so |q| = 1 is kept without
// renormalization. Velocities are a(s)X + b(s)Y. Throws std::domain_error for h ≤ 0 or T < 0.
SampledCurve integrate_geodesic(const S3Point& q0, const GeodesicParams& p, double T, double h);

// Exact flow: γ(s) = q0 · exp(s(u0 − λj)) · exp(λ s j).
S3Point geodesic_point(const S3Point& q0, const GeodesicParams& p, double s);

// Point and costate; |q| is not forced to one.
struct HamiltonianState {
  Quat q;
  Quat xi;
};

// H = ½(⟨qI1, ξ⟩² + ⟨qI3, ξ⟩²).
double hamiltonian(const HamiltonianState& st);

// q̇ = ⟨qI1,ξ⟩ qI1 + ⟨qI3,ξ⟩ qI3 and ξ̇ = ⟨qI1,ξ⟩ ξI1 + ⟨qI3,ξ⟩ ξI3.
HamiltonianState hamiltonian_rhs(const HamiltonianState& st);

struct HamiltonianTrajectory {
  std::vector<double> s;
  std::vector<HamiltonianState> states;
};

// Classical RK4 on the uniform grid of integrate_geodesic. Throws std::domain_error for h ≤ 0.
HamiltonianTrajectory integrate_hamiltonian(const HamiltonianState& start, double T, double h);

// Costate reproducing the geodesic with these parameters:
// ⟨q0I1,ξ⟩ = −a(0), ⟨q0I3,ξ⟩ = −b(0), ⟨q0I2,ξ⟩ = −λ, ⟨q0,ξ⟩ = 0.
HamiltonianState matched_initial_state(const S3Point& q0, const GeodesicParams& p);

// Projection to q with velocities q̇; points are normalized (drift is O(1e-13)).
SampledCurve project(const HamiltonianTrajectory& traj);

// Rows X, Y, T, N at q. Orthogonal with det = −1.
Mat4 energy_matrix(const Quat& q);
double det4(const Mat4& m);

struct VelocityEnergyReport {
  double energy_residual{0.0};         // max | |v|² − (a² + b²) |
  double orthogonality_residual{0.0};  // max |MᵀM − I|
  double determinant_residual{0.0};    // max | |det M| − 1 |
  double determinant{0.0};             // det M at the last sample
};

// Throws std::domain_error when the curve has no velocities.
VelocityEnergyReport verify_velocity_energy(const SampledCurve& curve);

enum class DifferenceOrder { Second, Fourth };

// Finite-difference velocity on a uniform grid, one-sided stencils of the same order
// at the ends. Throws std::domain_error for a non-uniform grid or fewer than 3
// (second order) or 5 (fourth order) samples.
std::vector<Quat> fd_velocity(const SampledCurve& curve, DifferenceOrder order = DifferenceOrder::Second);

// max |⟨γ̈, T⟩| over the samples where the central second-difference stencil fits.
double acceleration_T_residual(const SampledCurve& curve, DifferenceOrder order = DifferenceOrder::Second);

// Unwrapped atan2(⟨γ̇,Y⟩, ⟨γ̇,X⟩) from the stored velocities. Throws std::domain_error
// when velocities are missing or zero.
std::vector<double> angle_profile(const SampledCurve& curve);
std::vector<double> angle_profile(const std::vector<S3Point>& points, const std::vector<Quat>& velocities);

// Nearest-branch continuation of a sequence of angles.
std::vector<double> unwrap(std::vector<double> angles);

struct LineFit {
  double slope{0.0};
  double intercept{0.0};
  double max_deviation{0.0};
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace s3sr
