#include "s3sr/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace s3sr {

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 scale(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Number of uniform steps covering [0, T] with spacing at most h.
std::size_t step_count(double T, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    std::ostringstream msg;
    msg << "step must be positive, got " << h;
    throw std::domain_error(msg.str());
  }
  if (!(T >= 0.0) || !std::isfinite(T)) {
    std::ostringstream msg;
    msg << "final time must be finite and non-negative, got " << T;
    throw std::domain_error(msg.str());
  }
  if (T == 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(T / h - 1e-9));
}

double grid_point(std::size_t i, std::size_t steps, double T) {
  return i == steps ? T : T * static_cast<double>(i) / static_cast<double>(steps);
}

double uniform_spacing(const SampledCurve& c, std::size_t min_samples) {
  if (c.size() < min_samples) {
    std::ostringstream msg;
    msg << "finite differences need at least " << min_samples << " samples, got " << c.size();
    throw std::domain_error(msg.str());
  }
  const double h = c.s[1] - c.s[0];
  if (!(h > 0.0)) throw std::domain_error("finite differences need an increasing grid");
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (std::abs((c.s[i] - c.s[i - 1]) - h) > 1e-9 * std::max(1.0, std::abs(c.s[i]))) {
      throw std::domain_error("finite differences need a uniform grid");
    }
  }
  return h;
}

}  // namespace

void GeodesicParams::validate() const {
  if (!std::isfinite(r) || !std::isfinite(theta0) || !std::isfinite(lambda)) {
    throw std::domain_error("GeodesicParams: non-finite field");
  }
  if (r < 0.0) throw std::domain_error("GeodesicParams: negative speed r");
}

ControlPair ab_profile(const GeodesicParams& p, double s) {
  const double angle = 2.0 * p.lambda * s + p.theta0;
  return {p.r * std::cos(angle), p.r * std::sin(angle)};
}

Vec3 control(const GeodesicParams& p, double s) {
  const auto [a, b] = ab_profile(p, s);
  return {-a, 0.0, -b};
}

SampledCurve integrate_geodesic(const S3Point& q0, const GeodesicParams& p, double T, double h) {
  p.validate();
  const std::size_t steps = step_count(T, h);

  SampledCurve c;
  c.tag = "geodesic";
  c.params = {{"r", p.r}, {"theta0", p.theta0}, {"lambda", p.lambda}, {"T", T}};
  c.s.reserve(steps + 1);
  c.points.reserve(steps + 1);
  std::vector<Quat> vel;
  vel.reserve(steps + 1);

  auto record = [&](double s, const Quat& q) {
    const auto [a, b] = ab_profile(p, s);
    const auto f = frame_vectors(q);
    c.s.push_back(s);
    c.points.push_back(S3Point(q, 1e-10));
    vel.push_back(a * f[0] + b * f[1]);
  };

  // Gauss nodes of the fourth-order Magnus step.
  const double offset = std::sqrt(3.0) / 6.0;
  Quat q = q0.quat();
  record(0.0, q);
  for (std::size_t i = 0; i < steps; ++i) {
    const double s0 = grid_point(i, steps, T);
    const double s1 = grid_point(i + 1, steps, T);
    const double dt = s1 - s0;
    const Vec3 u1 = control(p, s0 + (0.5 - offset) * dt);
    const Vec3 u2 = control(p, s0 + (0.5 + offset) * dt);
    // For q' = q u: Ω = h/2 (u1 + u2) + (√3/12) h² [u1, u2], with [u1, u2] = 2 u1 × u2.
    const Vec3 omega = add(scale(0.5 * dt, add(u1, u2)), scale(std::sqrt(3.0) / 6.0 * dt * dt, cross(u1, u2)));
    q = qmul(q, qexp_pure(omega));
    record(s1, q);
  }
  c.velocities = std::move(vel);
  return c;
}

S3Point geodesic_point(const S3Point& q0, const GeodesicParams& p, double s) {
  const auto [a0, b0] = ab_profile(p, 0.0);
  const Quat body = qexp_pure({-a0 * s, -p.lambda * s, -b0 * s});
  const Quat spin = qexp_pure({0.0, p.lambda * s, 0.0});
  return S3Point::normalized(qmul(q0.quat(), qmul(body, spin)));
}

namespace {

struct Pairings {
  Quat qi1, qi3;
  double a1, a3;
};

Pairings pairings(const HamiltonianState& st) {
  const Quat qi1 = qmul(st.q, Quat::unit_i());
  const Quat qi3 = qmul(st.q, Quat::unit_k());
  return {qi1, qi3, dot(qi1, st.xi), dot(qi3, st.xi)};
}

HamiltonianState axpy(const HamiltonianState& x, double a, const HamiltonianState& y) {
  return {x.q + a * y.q, x.xi + a * y.xi};
}

}  // namespace

double hamiltonian(const HamiltonianState& st) {
  const auto p = pairings(st);
  return 0.5 * (p.a1 * p.a1 + p.a3 * p.a3);
}

HamiltonianState hamiltonian_rhs(const HamiltonianState& st) {
  const auto p = pairings(st);
  const Quat xi1 = qmul(st.xi, Quat::unit_i());
  const Quat xi3 = qmul(st.xi, Quat::unit_k());
  return {p.a1 * p.qi1 + p.a3 * p.qi3, p.a1 * xi1 + p.a3 * xi3};
}

HamiltonianTrajectory integrate_hamiltonian(const HamiltonianState& start, double T, double h) {
  const std::size_t steps = step_count(T, h);
  HamiltonianTrajectory traj;
  traj.s.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  HamiltonianState x = start;
  traj.s.push_back(0.0);
  traj.states.push_back(x);
  for (std::size_t i = 0; i < steps; ++i) {
    const double dt = grid_point(i + 1, steps, T) - grid_point(i, steps, T);
    const HamiltonianState k1 = hamiltonian_rhs(x);
    const HamiltonianState k2 = hamiltonian_rhs(axpy(x, 0.5 * dt, k1));
    const HamiltonianState k3 = hamiltonian_rhs(axpy(x, 0.5 * dt, k2));
    const HamiltonianState k4 = hamiltonian_rhs(axpy(x, dt, k3));
    x.q = x.q + (dt / 6.0) * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q);
    x.xi = x.xi + (dt / 6.0) * (k1.xi + 2.0 * k2.xi + 2.0 * k3.xi + k4.xi);
    traj.s.push_back(grid_point(i + 1, steps, T));
    traj.states.push_back(x);
  }
  return traj;
}

HamiltonianState matched_initial_state(const S3Point& q0, const GeodesicParams& p) {
  p.validate();
  const Quat& q = q0.quat();
  const auto [a, b] = ab_profile(p, 0.0);
  const Quat xi = -a * qmul(q, Quat::unit_i()) - b * qmul(q, Quat::unit_k()) -
                  p.lambda * qmul(q, Quat::unit_j());
  return {q, xi};
}

SampledCurve project(const HamiltonianTrajectory& traj) {
  SampledCurve c;
  c.tag = "hamiltonian";
  c.s = traj.s;
  std::vector<Quat> vel;
  vel.reserve(traj.states.size());
  for (const auto& st : traj.states) {
    c.points.push_back(S3Point::normalized(st.q));
    vel.push_back(hamiltonian_rhs(st).q);
  }
  c.velocities = std::move(vel);
  return c;
}

Mat4 energy_matrix(const Quat& q) {
  const auto f = frame_vectors(q);
  Mat4 m{};
  for (int r = 0; r < 4; ++r) m[r] = f[r].components();
  return m;
}

double det4(const Mat4& m) {
  // Laplace expansion along the first row.
  auto det3 = [&](int skip) {
    int cols[3];
    int k = 0;
    for (int c = 0; c < 4; ++c)
      if (c != skip) cols[k++] = c;
    const auto& r1 = m[1];
    const auto& r2 = m[2];
    const auto& r3 = m[3];
    return r1[cols[0]] * (r2[cols[1]] * r3[cols[2]] - r2[cols[2]] * r3[cols[1]]) -
           r1[cols[1]] * (r2[cols[0]] * r3[cols[2]] - r2[cols[2]] * r3[cols[0]]) +
           r1[cols[2]] * (r2[cols[0]] * r3[cols[1]] - r2[cols[1]] * r3[cols[0]]);
  };
  double d = 0.0;
  for (int c = 0; c < 4; ++c) d += (c % 2 == 0 ? 1.0 : -1.0) * m[0][c] * det3(c);
  return d;
}

VelocityEnergyReport verify_velocity_energy(const SampledCurve& curve) {
  if (!curve.velocities) {
    throw std::domain_error("verify_velocity_energy: curve has no velocities");
  }
  VelocityEnergyReport rep;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const Quat& q = curve.points[i].quat();
    const Quat& v = (*curve.velocities)[i];
    const Mat4 m = energy_matrix(q);
    const Mat4 mtm = matmul(transpose(m), m);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        rep.orthogonality_residual =
            std::max(rep.orthogonality_residual, std::abs(mtm[r][c] - (r == c ? 1.0 : 0.0)));
      }
    rep.determinant = det4(m);
    rep.determinant_residual = std::max(rep.determinant_residual, std::abs(std::abs(rep.determinant) - 1.0));

    const auto f = frame_vectors(q);
    const double a = dot(v, f[0]);
    const double b = dot(v, f[1]);
    rep.energy_residual = std::max(rep.energy_residual, std::abs(v.modulus2() - (a * a + b * b)));
  }
  return rep;
}

std::vector<Quat> fd_velocity(const SampledCurve& c, DifferenceOrder order) {
  const std::size_t n = c.size();
  auto p = [&](std::size_t i) -> const Quat& { return c.points[i].quat(); };
  std::vector<Quat> v(n);
  if (order == DifferenceOrder::Second) {
    const double h = uniform_spacing(c, 3);
    for (std::size_t i = 1; i + 1 < n; ++i) v[i] = (p(i + 1) - p(i - 1)) / (2.0 * h);
    v[0] = (-3.0 * p(0) + 4.0 * p(1) - p(2)) / (2.0 * h);
    v[n - 1] = (3.0 * p(n - 1) - 4.0 * p(n - 2) + p(n - 3)) / (2.0 * h);
    return v;
  }
  const double h = uniform_spacing(c, 5);
  for (std::size_t i = 2; i + 2 < n; ++i) {
    v[i] = (p(i - 2) - 8.0 * p(i - 1) + 8.0 * p(i + 1) - p(i + 2)) / (12.0 * h);
  }
  v[0] = (-25.0 * p(0) + 48.0 * p(1) - 36.0 * p(2) + 16.0 * p(3) - 3.0 * p(4)) / (12.0 * h);
  v[1] = (-3.0 * p(0) - 10.0 * p(1) + 18.0 * p(2) - 6.0 * p(3) + p(4)) / (12.0 * h);
  v[n - 1] = (25.0 * p(n - 1) - 48.0 * p(n - 2) + 36.0 * p(n - 3) - 16.0 * p(n - 4) + 3.0 * p(n - 5)) /
             (12.0 * h);
  v[n - 2] = (3.0 * p(n - 1) + 10.0 * p(n - 2) - 18.0 * p(n - 3) + 6.0 * p(n - 4) - p(n - 5)) /
             (12.0 * h);
  return v;
}

double acceleration_T_residual(const SampledCurve& c, DifferenceOrder order) {
  const std::size_t n = c.size();
  auto p = [&](std::size_t i) -> const Quat& { return c.points[i].quat(); };
  double worst = 0.0;
  if (order == DifferenceOrder::Second) {
    const double h = uniform_spacing(c, 3);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const Quat acc = (p(i + 1) - 2.0 * p(i) + p(i - 1)) / (h * h);
      worst = std::max(worst, std::abs(dot(acc, frame_vectors(p(i))[2])));
    }
    return worst;
  }
  const double h = uniform_spacing(c, 5);
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const Quat acc =
        (-p(i + 2) + 16.0 * p(i + 1) - 30.0 * p(i) + 16.0 * p(i - 1) - p(i - 2)) / (12.0 * h * h);
    worst = std::max(worst, std::abs(dot(acc, frame_vectors(p(i))[2])));
  }
  return worst;
}

std::vector<double> unwrap(std::vector<double> angles) {
  for (std::size_t i = 1; i < angles.size(); ++i) {
    const double d = angles[i] - angles[i - 1];
    angles[i] -= 2.0 * kPi * std::round(d / (2.0 * kPi));
  }
  return angles;
}

std::vector<double> angle_profile(const std::vector<S3Point>& points, const std::vector<Quat>& vel) {
  if (points.size() != vel.size()) throw std::domain_error("angle_profile: size mismatch");
  std::vector<double> out;
  out.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto f = frame_vectors(points[i].quat());
    const double a = dot(vel[i], f[0]);
    const double b = dot(vel[i], f[1]);
    if (std::hypot(a, b) == 0.0) {
      std::ostringstream msg;
      msg << "angle_profile: zero horizontal velocity at sample " << i;
      throw std::domain_error(msg.str());
    }
    out.push_back(std::atan2(b, a));
  }
  return unwrap(std::move(out));
}

std::vector<double> angle_profile(const SampledCurve& curve) {
  if (!curve.velocities) throw std::domain_error("angle_profile: curve has no velocities");
  return angle_profile(curve.points, *curve.velocities);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::domain_error("fit_line: need two or more points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    fit.max_deviation = std::max(fit.max_deviation, std::abs(y[i] - (fit.intercept + fit.slope * x[i])));
  }
  return fit;
}

}  // namespace s3sr
