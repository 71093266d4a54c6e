#include "s3sr/euler.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace s3sr {

namespace {

// Below this the corresponding half of the point is treated as zero.
constexpr double kPoleRadius = 1e-12;

}  // namespace

S3Point to_cartesian(const EulerAngles& e) {
  if (!(e.theta >= 0.0 && e.theta <= std::numbers::pi)) {
    std::ostringstream msg;
    msg << "to_cartesian: theta = " << e.theta << " outside [0, pi]";
    throw std::domain_error(msg.str());
  }
  const double a = e.alpha();
  const double b = e.beta();
  const double ch = std::cos(0.5 * e.theta);
  const double sh = std::sin(0.5 * e.theta);
  return S3Point::normalized(
      Quat{std::cos(a) * ch, std::sin(a) * ch, std::cos(b) * sh, std::sin(b) * sh});
}

Quat pushforward(const EulerAngles& e, const EulerRates& r) {
  const double a = e.alpha();
  const double b = e.beta();
  const double ch = std::cos(0.5 * e.theta);
  const double sh = std::sin(0.5 * e.theta);
  const double da = 0.5 * (r.phi + r.psi);
  const double db = 0.5 * (r.phi - r.psi);
  const double dt = 0.5 * r.theta;
  return {-std::sin(a) * ch * da - std::cos(a) * sh * dt,
          std::cos(a) * ch * da - std::sin(a) * sh * dt,
          -std::sin(b) * sh * db + std::cos(b) * ch * dt,
          std::cos(b) * sh * db + std::sin(b) * ch * dt};
}

ChartPoint from_cartesian(const S3Point& p) {
  const Quat& q = p.quat();
  const double rx = std::hypot(q.w, q.x);
  const double ry = std::hypot(q.y, q.z);
  ChartPoint out;
  const double theta = 2.0 * std::atan2(ry, rx);
  double alpha = std::atan2(q.x, q.w);
  double beta = std::atan2(q.z, q.y);
  if (ry <= kPoleRadius) {
    beta = 0.0;
    out.singularity = ChartSingularity::BetaUndefined;
  } else if (rx <= kPoleRadius) {
    alpha = 0.0;
    out.singularity = ChartSingularity::AlphaUndefined;
  }
  out.angles = EulerAngles{alpha + beta, alpha - beta, theta};
  return out;
}

double omega_euler(const EulerAngles& e, const EulerRates& r) {
  return 0.5 * (std::sin(e.theta) * std::sin(e.psi) * r.phi + std::cos(e.psi) * r.theta);
}

double horizontality_residual_euler(const EulerAngles& e, const EulerRates& r) {
  return std::abs(std::sin(e.theta) * std::sin(e.psi) * r.phi + std::cos(e.psi) * r.theta);
}

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::remainder(a, two_pi);
  if (w <= -std::numbers::pi) w += two_pi;
  return w;
}

}  // namespace s3sr
