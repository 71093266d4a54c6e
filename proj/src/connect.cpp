#include "s3sr/connect.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/numeric/odeint.hpp>

#include "s3sr/frame.hpp"

namespace s3sr {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr double kMinSinTheta = 1e-6;
constexpr double kMinCosPsi = 1e-6;
constexpr double kMinK = 1e-6;
constexpr double kMaxQ = 1e6;

// Direct plans conditioned worse than this give way to the ψ sweep.
constexpr double kMinConditioning = 0.05;

double log_tan_half(double theta) { return std::log(std::tan(0.5 * theta)); }

}  // namespace

double Polynomial::operator()(double t) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return Polynomial{{0.0}};
  std::vector<double> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = static_cast<double>(i) * c_[i];
  return Polynomial{std::move(d)};
}

double Polynomial::integral(double a, double b) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    acc += c_[i] * (std::pow(b, n) - std::pow(a, n)) / n;
  }
  return acc;
}

double Polynomial::max_abs(double a, double b) const {
  if (degree() > 3) throw std::domain_error("Polynomial::max_abs: degree above 3");
  std::vector<double> ts{a, b};
  const Polynomial dp = derivative();
  const auto& d = dp.coefficients();
  const double c0 = d.size() > 0 ? d[0] : 0.0;
  const double c1 = d.size() > 1 ? d[1] : 0.0;
  const double c2 = d.size() > 2 ? d[2] : 0.0;
  if (c2 != 0.0) {
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc >= 0.0) {
      const double r = std::sqrt(disc);
      ts.push_back((-c1 + r) / (2.0 * c2));
      ts.push_back((-c1 - r) / (2.0 * c2));
    }
  } else if (c1 != 0.0) {
    ts.push_back(-c0 / c1);
  }
  double m = 0.0;
  for (double t : ts) {
    if (t >= a && t <= b) m = std::max(m, std::abs((*this)(t)));
  }
  return m;
}

Polynomial hermite_f(const HermiteSpec& h) {
  return Polynomial{{0.0, h.beta, 3.0 * h.alpha - 2.0 * h.beta - h.gamma,
                     h.beta + h.gamma - 2.0 * h.alpha}};
}

Polynomial q_with_integral(double q0, double q1, double integral) {
  return hermite_f({integral, q0, q1}).derivative();
}

std::optional<DirectPlan> plan_direct(const EulerAngles& p, const EulerAngles& q) {
  const double s0 = std::sin(p.theta);
  const double s1 = std::sin(q.theta);
  if (!(p.theta > 0.0 && p.theta < kPi && q.theta > 0.0 && q.theta < kPi)) return std::nullopt;
  if (s0 < kMinSinTheta || s1 < kMinSinTheta) return std::nullopt;

  DirectPlan plan;
  plan.start = p;
  plan.branch = kPi * std::round(p.psi / kPi);
  const double psi0 = p.psi - plan.branch;

  // (φ + 2πm, ψ + 2πm, θ) is the same point; pick m putting ψ1 on the branch of ψ0.
  const double m = std::round((q.psi - plan.branch) / (2.0 * kPi));
  plan.end = EulerAngles{q.phi - 2.0 * kPi * m, q.psi - 2.0 * kPi * m, q.theta};
  const double psi1 = plan.end.psi - plan.branch;

  const double c0 = std::cos(psi0);
  const double c1 = std::cos(psi1);
  if (c0 < kMinCosPsi || c1 < kMinCosPsi) return std::nullopt;

  plan.k = plan.end.phi - p.phi;
  if (std::abs(plan.k) < kMinK) return std::nullopt;

  // θ' = −k q sin θ integrates to ln tan(θ/2) = ln tan(θ0/2) − k ∫q.
  plan.integral = -(log_tan_half(q.theta) - log_tan_half(p.theta)) / plan.k;
  plan.q = q_with_integral(std::tan(psi0), std::tan(psi1), plan.integral);
  const double qmax = plan.q.max_abs(0.0, 1.0);
  if (!(qmax <= kMaxQ)) return std::nullopt;

  plan.conditioning =
      std::min({s0, s1, c0, c1, std::min(std::abs(plan.k), 1.0), 1.0 / (1.0 + qmax)});
  return plan;
}

SampledCurve realize(const DirectPlan& plan, const ConnectOptions& opts) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 1>;

  const std::size_t n = std::max<std::size_t>(opts.samples, 2);
  SampledCurve curve;
  curve.tag = "connect";
  curve.s.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    curve.s[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  }
  curve.s.back() = 1.0;

  const double k = plan.k;
  const Polynomial& qpoly = plan.q;
  const Polynomial dq = qpoly.derivative();
  auto rhs = [&](const State& x, State& dxdt, double s) {
    dxdt[0] = -k * qpoly(s) * std::sin(x[0]);
  };

  std::vector<double> theta(n);
  std::size_t idx = 0;
  State x{plan.start.theta};
  auto stepper = odeint::make_controlled(opts.ode_tolerance, opts.ode_tolerance,
                                         odeint::runge_kutta_dopri5<State>());
  odeint::integrate_times(stepper, rhs, x, curve.s.begin(), curve.s.end(), 1e-3,
                          [&](const State& st, double) { theta[idx++] = st[0]; });

  curve.points.reserve(n);
  std::vector<Quat> vel;
  vel.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = curve.s[i];
    const double qs = qpoly(s);
    const EulerAngles e{plan.start.phi + k * s, plan.branch + std::atan(qs), theta[i]};
    const EulerRates r{k, dq(s) / (1.0 + qs * qs), -k * qs * std::sin(theta[i])};
    curve.points.push_back(to_cartesian(e));
    vel.push_back(pushforward(e, r));
  }
  curve.velocities = std::move(vel);
  curve.params = {{"route", 0.0},
                  {"k", k},
                  {"q0", qpoly(0.0)},
                  {"q1", qpoly(1.0)},
                  {"q_integral", plan.integral},
                  {"psi_branch", plan.branch}};
  return curve;
}

double SweepPlan::psi(double s) const { return start.psi + sweep * s + bump * std::sin(kPi * s); }

double SweepPlan::dpsi(double s) const { return sweep + bump * kPi * std::cos(kPi * s); }

double SweepPlan::g(double s) const {
  const double p = psi(s);
  return c_cos * std::cos(p) + c_sin * std::sin(p);
}

std::optional<SweepPlan> plan_sweep(const EulerAngles& p, const EulerAngles& q) {
  using Quadrature = boost::math::quadrature::gauss<double, 30>;
  if (!(p.theta > 0.0 && p.theta < kPi && q.theta > 0.0 && q.theta < kPi)) return std::nullopt;
  const double s0 = std::sin(p.theta);
  const double s1 = std::sin(q.theta);
  if (s0 < kMinSinTheta || s1 < kMinSinTheta) return std::nullopt;

  const double dlog = -(log_tan_half(q.theta) - log_tan_half(p.theta));
  const double m0 = std::round((q.psi - p.psi) / (2.0 * kPi));

  std::optional<SweepPlan> best;
  double best_cost = std::numeric_limits<double>::infinity();
  for (double m : {m0, m0 - 1.0, m0 + 1.0}) {
    EulerAngles end{q.phi - 2.0 * kPi * m, q.psi - 2.0 * kPi * m, q.theta};
    // (φ + 4πj, ψ, θ) is the same point.
    end.phi -= 4.0 * kPi * std::round((end.phi - p.phi) / (4.0 * kPi));
    const double dphi = end.phi - p.phi;
    for (double bump : {0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0}) {
      SweepPlan plan;
      plan.start = p;
      plan.end = end;
      plan.sweep = end.psi - p.psi;
      plan.bump = bump;
      const double gcc = Quadrature::integrate([&](double s) { return std::pow(std::cos(plan.psi(s)), 2); }, 0.0, 1.0);
      const double gss = Quadrature::integrate([&](double s) { return std::pow(std::sin(plan.psi(s)), 2); }, 0.0, 1.0);
      const double gcs = Quadrature::integrate(
          [&](double s) { return std::cos(plan.psi(s)) * std::sin(plan.psi(s)); }, 0.0, 1.0);
      const double det = gcc * gss - gcs * gcs;
      const double tr = gcc + gss;
      const double lmin = 0.5 * (tr - std::sqrt(std::max(tr * tr - 4.0 * det, 0.0)));
      if (!(lmin > 1e-9)) continue;
      plan.c_cos = (gss * dphi - gcs * dlog) / det;
      plan.c_sin = (gcc * dlog - gcs * dphi) / det;
      const double energy = plan.c_cos * (gcc * plan.c_cos + gcs * plan.c_sin) +
                            plan.c_sin * (gcs * plan.c_cos + gss * plan.c_sin);
      const double cost = energy + plan.sweep * plan.sweep + 0.5 * kPi * kPi * bump * bump;
      plan.conditioning = std::min({s0, s1, lmin});
      if (cost < best_cost) {
        best_cost = cost;
        best = plan;
      }
    }
  }
  return best;
}

SampledCurve realize(const SweepPlan& plan, const ConnectOptions& opts) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 2>;  // θ, φ

  const std::size_t n = std::max<std::size_t>(opts.samples, 2);
  SampledCurve curve;
  curve.tag = "connect";
  curve.s.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    curve.s[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  }
  curve.s.back() = 1.0;

  auto rhs = [&](const State& x, State& dxdt, double s) {
    const double ps = plan.psi(s);
    const double g = plan.g(s);
    dxdt[0] = -g * std::sin(ps) * std::sin(x[0]);
    dxdt[1] = g * std::cos(ps);
  };

  std::vector<State> states(n);
  std::size_t idx = 0;
  State x{plan.start.theta, plan.start.phi};
  auto stepper = odeint::make_controlled(opts.ode_tolerance, opts.ode_tolerance,
                                         odeint::runge_kutta_dopri5<State>());
  odeint::integrate_times(stepper, rhs, x, curve.s.begin(), curve.s.end(), 1e-3,
                          [&](const State& st, double) { states[idx++] = st; });

  curve.points.reserve(n);
  std::vector<Quat> vel;
  vel.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = curve.s[i];
    const double ps = plan.psi(s);
    const double g = plan.g(s);
    const EulerAngles e{states[i][1], ps, states[i][0]};
    const EulerRates r{g * std::cos(ps), plan.dpsi(s), -g * std::sin(ps) * std::sin(states[i][0])};
    curve.points.push_back(to_cartesian(e));
    vel.push_back(pushforward(e, r));
  }
  curve.velocities = std::move(vel);
  curve.params = {{"route", 3.0},
                  {"psi_sweep", plan.sweep},
                  {"psi_bump", plan.bump},
                  {"g_cos", plan.c_cos},
                  {"g_sin", plan.c_sin}};
  return curve;
}

namespace {

SampledCurve constant_curve(const S3Point& p) {
  SampledCurve c;
  c.tag = "connect";
  c.s = {0.0, 1.0};
  c.points = {p, p};
  c.velocities = std::vector<Quat>{Quat{}, Quat{}};
  c.params = {{"route", 2.0}};
  return c;
}

// Deterministic left translations tried when an endpoint sits on a pole of the chart.
std::vector<S3Point> recentering_candidates() {
  std::vector<S3Point> out;
  const std::array<Vec3, 7> axes{{{1, 0, 0},
                                  {0, 1, 0},
                                  {0, 0, 1},
                                  {1, 1, 0},
                                  {1, 0, 1},
                                  {0, 1, 1},
                                  {1, -1, 1}}};
  for (double angle : {0.5, 1.0, 0.25, 1.3}) {
    for (const auto& a : axes) {
      const double n = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
      for (double sign : {1.0, -1.0}) {
        const double f = sign * angle / n;
        out.push_back(S3Point::normalized(qexp_pure({f * a[0], f * a[1], f * a[2]})));
      }
    }
  }
  return out;
}

// ∫|γ̇|² ds by the trapezoid rule on the analytic velocities.
double energy(const SampledCurve& c) {
  double e = 0.0;
  const auto& v = *c.velocities;
  for (std::size_t i = 1; i < c.size(); ++i) {
    e += 0.5 * (c.s[i] - c.s[i - 1]) * (v[i].modulus2() + v[i - 1].modulus2());
  }
  return e;
}

// The lower-energy curve of the direct construction (when well conditioned) and the ψ sweep.
std::optional<SampledCurve> join_in_chart(const EulerAngles& a, const EulerAngles& b,
                                          const ConnectOptions& opts) {
  std::optional<SampledCurve> best;
  if (auto d = plan_direct(a, b); d && d->conditioning >= kMinConditioning) best = realize(*d, opts);
  if (auto w = plan_sweep(a, b)) {
    SampledCurve c = realize(*w, opts);
    if (!best || energy(c) < energy(*best)) best = std::move(c);
  }
  return best;
}

double endpoint_mismatch(const SampledCurve& c, const S3Point& p, const S3Point& q) {
  return std::max(distance(c.points.front(), p), distance(c.points.back(), q));
}

double pole_margin(const S3Point& p) {
  const Quat& q = p.quat();
  return std::min(std::hypot(q.w, q.x), std::hypot(q.y, q.z));
}

SampledCurve connect_cartesian(const S3Point& pc, const S3Point& qc,
                               const std::optional<SampledCurve>& in_chart,
                               const ConnectOptions& opts) {
  double best_residual = std::numeric_limits<double>::infinity();
  if (in_chart) {
    const double err = endpoint_mismatch(*in_chart, pc, qc);
    if (err <= opts.endpoint_tolerance) return *in_chart;
    best_residual = err;
  }

  // Translate both ends away from the poles, join there, translate back.
  S3Point best_g;
  double best_margin = -1.0;
  for (const S3Point& g : recentering_candidates()) {
    const double margin = std::min(pole_margin(g * pc), pole_margin(g * qc));
    if (margin > best_margin) {
      best_margin = margin;
      best_g = g;
    }
  }
  const ChartPoint cp = from_cartesian(best_g * pc);
  const ChartPoint cq = from_cartesian(best_g * qc);
  if (cp.singularity == ChartSingularity::None && cq.singularity == ChartSingularity::None) {
    if (auto inner = join_in_chart(cp.angles, cq.angles, opts)) {
      SampledCurve c = inner->left_translated(best_g.inverse());
      const double err = endpoint_mismatch(c, pc, qc);
      if (err <= opts.endpoint_tolerance) {
        c.params["chart_route"] = c.params["route"];
        c.params["route"] = 1.0;
        const Quat& gq = best_g.quat();
        c.params["recenter_w"] = gq.w;
        c.params["recenter_x"] = gq.x;
        c.params["recenter_y"] = gq.y;
        c.params["recenter_z"] = gq.z;
        return c;
      }
      best_residual = std::min(best_residual, err);
    }
  }
  std::ostringstream msg;
  msg << "connect: endpoint mismatch " << best_residual << " exceeds tolerance "
      << opts.endpoint_tolerance;
  throw ConstructionError(msg.str(), best_residual);
}

}  // namespace

SampledCurve connect(const EulerAngles& p, const EulerAngles& q, const ConnectOptions& opts) {
  const S3Point pc = to_cartesian(p);
  const S3Point qc = to_cartesian(q);
  if (distance(pc, qc) < 1e-14) return constant_curve(pc);
  return connect_cartesian(pc, qc, join_in_chart(p, q, opts), opts);
}

SampledCurve connect(const S3Point& p, const S3Point& q, const ConnectOptions& opts) {
  if (distance(p, q) < 1e-14) return constant_curve(p);
  const ChartPoint cp = from_cartesian(p);
  const ChartPoint cq = from_cartesian(q);
  std::optional<SampledCurve> in_chart;
  if (cp.singularity == ChartSingularity::None && cq.singularity == ChartSingularity::None) {
    in_chart = join_in_chart(cp.angles, cq.angles, opts);
  }
  return connect_cartesian(p, q, in_chart, opts);
}

double ConstantPsiSolution::phi_at(double theta) const {
  if (theta0 == theta1) return phi0;
  return phi0 - (log_tan_half(theta) - log_tan_half(theta0)) / std::tan(psi);
}

double ConstantPsiSolution::dphi_dtheta(double theta) const {
  if (theta0 == theta1) return 0.0;
  return -1.0 / (std::sin(theta) * std::tan(psi));
}

ConstantPsiSolution constant_psi_solution(double phi0, double theta0, double phi1, double theta1) {
  for (double t : {theta0, theta1}) {
    if (!(t > 0.0 && t < kPi)) {
      std::ostringstream msg;
      msg << "connect_constant_psi: theta = " << t << " outside (0, pi)";
      throw std::domain_error(msg.str());
    }
  }
  if (phi0 == phi1 && theta0 == theta1) {
    throw std::domain_error("connect_constant_psi: endpoints coincide");
  }
  ConstantPsiSolution sol{phi0, theta0, phi1, theta1, 0.0};
  if (theta0 != theta1) {
    sol.psi = std::atan(std::log(std::tan(theta1 / 2.0) / std::tan(theta0 / 2.0)) / (phi0 - phi1));
  }
  return sol;
}

ConstantPsiCurve connect_constant_psi(double phi0, double theta0, double phi1, double theta1,
                                      std::size_t samples) {
  const ConstantPsiSolution sol = constant_psi_solution(phi0, theta0, phi1, theta1);
  const std::size_t n = std::max<std::size_t>(samples, 2);

  ConstantPsiCurve out;
  out.psi = sol.psi;
  SampledCurve& c = out.curve;
  c.tag = "connect_constant_psi";
  c.params = {{"psi", sol.psi}};
  std::vector<Quat> vel;
  const double dtheta = theta1 - theta0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(n - 1);
    EulerAngles e;
    EulerRates r;
    if (theta0 == theta1) {
      e = {phi0 + s * (phi1 - phi0), sol.psi, theta0};
      r = {phi1 - phi0, 0.0, 0.0};
    } else {
      const double theta = i + 1 == n ? theta1 : theta0 + s * dtheta;
      e = {sol.phi_at(theta), sol.psi, theta};
      r = {sol.dphi_dtheta(theta) * dtheta, 0.0, dtheta};
    }
    c.s.push_back(s);
    c.points.push_back(to_cartesian(e));
    vel.push_back(pushforward(e, r));
  }
  c.velocities = std::move(vel);
  return out;
}

}  // namespace s3sr
