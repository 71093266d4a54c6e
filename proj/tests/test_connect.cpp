#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "s3sr/connect.hpp"
#include "s3sr/frame.hpp"
#include "s3sr/geodesic.hpp"
#include "support.hpp"

using namespace s3sr;
using s3sr::testing::max_diff;
using s3sr::testing::Sampler;

namespace {

constexpr double kPi = std::numbers::pi;

double fd_horizontality(const SampledCurve& c, DifferenceOrder order) {
  const auto v = fd_velocity(c, order);
  double m = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) m = std::max(m, std::abs(omega_eval(c.points[i].quat(), v[i])));
  return m;
}

double analytic_horizontality(const SampledCurve& c) {
  double m = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    m = std::max(m, std::abs(omega_eval(c.points[i].quat(), (*c.velocities)[i])));
  return m;
}

double endpoint_error(const SampledCurve& c, const S3Point& p, const S3Point& q) {
  return std::max(distance(c.points.front(), p), distance(c.points.back(), q));
}

EulerAngles random_angles(Sampler& rng) {
  return {rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi), rng.uniform(0.2, kPi - 0.2)};
}

}  // namespace

TEST_CASE("Hermite cubic") {
  CHECK(hermite_f({0, 0, 0}).coefficients() == std::vector<double>{0, 0, 0, 0});
  CHECK(hermite_f({1, 0, 0}).coefficients() == std::vector<double>{0, 0, 3, -2});
  const Polynomial f = hermite_f({2, 1, 1});
  const Polynomial df = f.derivative();
  CHECK(std::abs(f(0.0)) <= 1e-14);
  CHECK(std::abs(f(1.0) - 2.0) <= 1e-14);
  CHECK(std::abs(df(0.0) - 1.0) <= 1e-14);
  CHECK(std::abs(df(1.0) - 1.0) <= 1e-14);
}

TEST_CASE("quadratic with prescribed ends and integral") {
  const Polynomial zero = q_with_integral(0, 0, 0);
  for (double t : {0.0, 0.3, 1.0}) CHECK(zero(t) == 0.0);

  const Polynomial one = q_with_integral(1, 1, 1);
  CHECK(one.coefficients() == std::vector<double>{1, 0, 0});

  const Polynomial bump = q_with_integral(0, 0, 1);
  CHECK(bump.coefficients() == std::vector<double>{0, 6, -6});
  CHECK(bump.integral(0, 1) == doctest::Approx(1.0).epsilon(1e-15));

  Sampler rng(31);
  for (int n = 0; n < 100; ++n) {
    const double q0 = rng.uniform(-5, 5), q1 = rng.uniform(-5, 5), I = rng.uniform(-5, 5);
    const Polynomial q = q_with_integral(q0, q1, I);
    CHECK(std::abs(q(0) - q0) <= 1e-13);
    CHECK(std::abs(q(1) - q1) <= 1e-13);
    CHECK(std::abs(q.integral(0, 1) - I) <= 1e-13);
  }
}

TEST_CASE("polynomial helpers") {
  const Polynomial p{{1.0, -3.0, 0.0, 1.0}};  // 1 − 3t + t³
  CHECK(p.derivative().coefficients() == std::vector<double>{-3, 0, 3});
  CHECK(p.integral(0, 2) == doctest::Approx(2.0 - 6.0 + 4.0));
  CHECK(p.max_abs(0, 1) == doctest::Approx(1.0));           // endpoint t = 0
  CHECK(p.max_abs(-2, 0) == doctest::Approx(3.0));          // stationary point t = −1
  CHECK(Polynomial{}.degree() == 0);
  CHECK_THROWS_AS(Polynomial({0, 0, 0, 0, 1}).max_abs(0, 1), std::domain_error);
}

TEST_CASE("connect: worked example") {
  const EulerAngles p{0, kPi / 6, kPi / 3}, q{1, kPi / 4, kPi / 2};
  const SampledCurve c = connect(p, q);
  CHECK(c.size() == 256);
  CHECK_NOTHROW(c.validate());
  CHECK(endpoint_error(c, to_cartesian(p), to_cartesian(q)) <= 1e-8);
  CHECK(fd_horizontality(c, DifferenceOrder::Fourth) <= 1e-6);
  CHECK(analytic_horizontality(c) <= 1e-12);

  const auto plan = plan_direct(p, q);
  REQUIRE(plan);
  const SampledCurve d = realize(*plan);
  CHECK(endpoint_error(d, to_cartesian(p), to_cartesian(q)) <= 1e-8);
  CHECK(fd_horizontality(d, DifferenceOrder::Fourth) <= 1e-6);
  CHECK(d.params.at("k") == 1.0);
}

TEST_CASE("connect: identical endpoints give a constant curve") {
  const EulerAngles p{0.3, -0.2, 1.0};
  const SampledCurve c = connect(p, p);
  CHECK(c.size() == 2);
  CHECK(c.points[0] == c.points[1]);
  CHECK(analytic_horizontality(c) == 0.0);
  CHECK(c.params.at("route") == 2.0);
  // Same point written with shifted angles.
  CHECK(connect(p, EulerAngles{p.phi + 4 * kPi, p.psi, p.theta}).size() == 2);
}

TEST_CASE("connect: direct plan satisfies the boundary-integral identity") {
  Sampler rng(32);
  int planned = 0;
  for (int n = 0; n < 200; ++n) {
    const EulerAngles p = random_angles(rng), q = random_angles(rng);
    const auto plan = plan_direct(p, q);
    if (!plan) continue;
    ++planned;
    const double expected = (std::atanh(std::cos(q.theta)) - std::atanh(std::cos(p.theta))) / plan->k;
    CHECK(std::abs(plan->integral - expected) <= 1e-10);
    CHECK(std::abs(plan->q.integral(0, 1) - expected) <= 1e-10);
    if (std::cos(p.theta) >= 0 && std::cos(q.theta) >= 0) {
      const double abs_form =
          (std::atanh(std::abs(std::cos(q.theta))) - std::atanh(std::abs(std::cos(p.theta)))) / plan->k;
      CHECK(std::abs(plan->integral - abs_form) <= 1e-10);
    }
    const double t0 = std::tan(p.psi - plan->branch), t1 = std::tan(plan->end.psi - plan->branch);
    CHECK(std::abs(plan->q(0) - t0) <= 1e-13 * std::max({1.0, std::abs(t0), std::abs(plan->integral)}));
    CHECK(std::abs(plan->q(1) - t1) <= 1e-13 * std::max({1.0, std::abs(t1), std::abs(plan->integral)}));
  }
  CHECK(planned > 50);
}

TEST_CASE("connect: integrated θ follows the closed form") {
  const EulerAngles p{0.2, 0.4, 1.2}, q{1.5, -0.3, 2.0};
  const auto plan = plan_direct(p, q);
  REQUIRE(plan);
  const SampledCurve c = realize(*plan);
  const Polynomial& qp = plan->q;
  double worst = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double theta = from_cartesian(c.points[i]).angles.theta;
    const double expected = std::log(std::tan(p.theta / 2)) - plan->k * qp.integral(0, c.s[i]);
    worst = std::max(worst, std::abs(std::log(std::tan(theta / 2)) - expected));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("connect: random pairs") {
  Sampler rng(33);
  double worst_end = 0.0, worst_fd4 = 0.0, worst_analytic = 0.0, worst_ratio = 1e300, worst_accel = 0.0;
  for (int n = 0; n < 100; ++n) {
    const EulerAngles p = random_angles(rng), q = random_angles(rng);
    ConnectOptions coarse, fine;
    fine.samples = 512;
    const SampledCurve c = connect(p, q, coarse);
    const SampledCurve f = connect(p, q, fine);
    CHECK_NOTHROW(c.validate());
    worst_end = std::max(worst_end, endpoint_error(c, to_cartesian(p), to_cartesian(q)));
    worst_fd4 = std::max(worst_fd4, fd_horizontality(c, DifferenceOrder::Fourth));
    worst_analytic = std::max(worst_analytic, analytic_horizontality(c));
    worst_ratio = std::min(worst_ratio, fd_horizontality(c, DifferenceOrder::Second) /
                                            fd_horizontality(f, DifferenceOrder::Second));
    // No corners: bounded second differences.
    for (std::size_t i = 1; i + 1 < c.size(); ++i) {
      const double h = c.s[i] - c.s[i - 1];
      const Quat acc = (c.points[i + 1].quat() - 2.0 * c.points[i].quat() + c.points[i - 1].quat()) / (h * h);
      worst_accel = std::max(worst_accel, acc.modulus());
    }
  }
  CHECK(worst_end <= 1e-8);
  CHECK(worst_fd4 <= 1e-5);
  CHECK(worst_analytic <= 1e-12);
  CHECK(worst_ratio >= 3.5);
  CHECK(worst_accel < 1e3);
}

TEST_CASE("connect: endpoints on the poles") {
  for (double t0 : {0.0, kPi}) {
    const EulerAngles p{0.0, 0.0, t0}, q{1.0, 0.3, 1.0};
    const SampledCurve c = connect(p, q);
    CHECK(c.params.at("route") == 1.0);
    CHECK(endpoint_error(c, to_cartesian(p), to_cartesian(q)) <= 1e-8);
    CHECK(analytic_horizontality(c) <= 1e-12);
    CHECK(fd_horizontality(c, DifferenceOrder::Fourth) <= 1e-5);
    CHECK_FALSE(plan_direct(p, q));
    CHECK_FALSE(plan_sweep(p, q));
  }
  const SampledCurve both = connect(S3Point::identity(), S3Point(Quat{0, 0, 1, 0}));
  CHECK(endpoint_error(both, S3Point::identity(), S3Point(Quat{0, 0, 1, 0})) <= 1e-8);
}

TEST_CASE("connect: equal φ and cos ψ changing sign") {
  SUBCASE("k = 0") {
    const EulerAngles p{0.3, 0.2, 1.0}, q{0.3, 0.2 + 1e-9, 1.3};
    CHECK_FALSE(plan_direct(p, q));
    const SampledCurve c = connect(p, q);
    CHECK(c.params.at("route") == 3.0);
    CHECK(endpoint_error(c, to_cartesian(p), to_cartesian(q)) <= 1e-8);
    CHECK(fd_horizontality(c, DifferenceOrder::Fourth) <= 1e-6);
  }
  SUBCASE("ψ crosses π/2") {
    const EulerAngles p{0.0, 0.2, 1.0}, q{0.8, 2.5, 1.8};
    CHECK_FALSE(plan_direct(p, q));
    const SampledCurve c = connect(p, q);
    CHECK(endpoint_error(c, to_cartesian(p), to_cartesian(q)) <= 1e-8);
    CHECK(fd_horizontality(c, DifferenceOrder::Fourth) <= 1e-6);
  }
}

TEST_CASE("connect: Cartesian endpoints") {
  Sampler rng(34);
  for (int n = 0; n < 20; ++n) {
    const S3Point p = rng.unit(), q = rng.unit();
    const SampledCurve c = connect(p, q);
    CHECK(endpoint_error(c, p, q) <= 1e-8);
    CHECK(analytic_horizontality(c) <= 1e-12);
  }
}

TEST_CASE("sweep construction reaches its end point") {
  Sampler rng(35);
  for (int n = 0; n < 50; ++n) {
    const EulerAngles p = random_angles(rng), q = random_angles(rng);
    const auto plan = plan_sweep(p, q);
    REQUIRE(plan);
    CHECK(plan->conditioning > 0.0);
    const SampledCurve c = realize(*plan);
    CHECK(endpoint_error(c, to_cartesian(p), to_cartesian(q)) <= 1e-8);
    CHECK(std::abs(plan->psi(1.0) - plan->end.psi) <= 1e-12);
  }
}

TEST_CASE("left translation keeps curves horizontal") {
  const SampledCurve c = connect(EulerAngles{0, 0.1, 1}, EulerAngles{1, 0.2, 2});
  Sampler rng(36);
  const S3Point g = rng.unit();
  const SampledCurve t = c.left_translated(g);
  CHECK(analytic_horizontality(t) <= 1e-12);
  CHECK(max_diff(t.points.back().quat(), g.quat() * c.points.back().quat()) <= 1e-14);
}

TEST_CASE("constant-ψ closed form") {
  SUBCASE("worked value") {
    const ConstantPsiSolution sol = constant_psi_solution(0, kPi / 3, 1, kPi / 2);
    CHECK(sol.psi == doctest::Approx(std::atan(-std::log(std::sqrt(3.0)))).epsilon(1e-15));
    CHECK(sol.psi == doctest::Approx(-0.502).epsilon(1e-3));
    CHECK(sol.phi_at(kPi / 2) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sol.phi_at(kPi / 3) == 0.0);
  }
  SUBCASE("formula evaluated as written") {
    Sampler rng(37);
    for (int n = 0; n < 100; ++n) {
      const double p0 = rng.uniform(-3, 3), t0 = rng.uniform(0.1, 3.0), p1 = rng.uniform(-3, 3),
                   t1 = rng.uniform(0.1, 3.0);
      const double expected = std::atan(std::log(std::tan(t1 / 2.0) / std::tan(t0 / 2.0)) / (p0 - p1));
      CHECK(constant_psi_solution(p0, t0, p1, t1).psi == expected);
    }
  }
  SUBCASE("equal θ gives the φ-arc with ψ = 0") {
    const ConstantPsiCurve c = connect_constant_psi(0, kPi / 2, 1, kPi / 2);
    CHECK(c.psi == 0.0);
    for (const S3Point& p : c.curve.points) CHECK(from_cartesian(p).angles.theta == doctest::Approx(kPi / 2));
    CHECK(distance(c.curve.points.back(), to_cartesian({1, 0, kPi / 2})) <= 1e-14);
    CHECK(analytic_horizontality(c.curve) <= 1e-15);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(constant_psi_solution(0, 0, 1, 1), std::domain_error);
    CHECK_THROWS_AS(constant_psi_solution(0, 1, 1, kPi), std::domain_error);
    CHECK_THROWS_AS(constant_psi_solution(0.5, 1, 0.5, 1), std::domain_error);
  }
  SUBCASE("curves are horizontal and stay on their ψ-slice") {
    Sampler rng(38);
    for (int n = 0; n < 20; ++n) {
      const double p0 = rng.uniform(-3, 3), t0 = rng.uniform(0.2, 2.9), p1 = rng.uniform(-3, 3),
                   t1 = rng.uniform(0.2, 2.9);
      const ConstantPsiCurve c = connect_constant_psi(p0, t0, p1, t1, 1000);
      const ConstantPsiSolution sol = constant_psi_solution(p0, t0, p1, t1);
      CHECK(distance(c.curve.points.front(), to_cartesian({p0, c.psi, t0})) <= 1e-14);
      CHECK(distance(c.curve.points.back(), to_cartesian({p1, c.psi, t1})) <= 1e-12);
      CHECK(analytic_horizontality(c.curve) <= 1e-12);
      for (std::size_t i = 0; i + 1 < c.curve.size(); ++i) {
        const double theta = t0 + (t1 - t0) * (c.curve.s[i] + c.curve.s[i + 1]) / 2;
        const EulerAngles e{sol.phi_at(theta), c.psi, theta};
        CHECK(horizontality_residual_euler(e, {sol.dphi_dtheta(theta), 0, 1}) <= 1e-12);
      }
      for (const S3Point& p : c.curve.points) {
        const double psi = from_cartesian(p).angles.psi;
        CHECK(std::abs(std::remainder(psi - c.psi, 2 * kPi)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("constant-ψ data through the general construction") {
  const double p0 = 0.0, t0 = 1.0, p1 = 1.2, t1 = 1.9;
  const double psi = constant_psi_solution(p0, t0, p1, t1).psi;
  const auto plan = plan_direct({p0, psi, t0}, {p1, psi, t1});
  REQUIRE(plan);
  CHECK(plan->q.max_abs(0, 1) == doctest::Approx(std::abs(std::tan(psi))).epsilon(1e-12));
  const SampledCurve c = realize(*plan);
  const ConstantPsiSolution sol = constant_psi_solution(p0, t0, p1, t1);
  double worst = 0.0;
  for (const S3Point& p : c.points) {
    const double theta = from_cartesian(p).angles.theta;
    worst = std::max(worst, distance(p, to_cartesian({sol.phi_at(theta), psi, theta})));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("construction error carries the residual") {
  const ConstructionError e("missed", 3e-7);
  CHECK(e.residual() == 3e-7);
  CHECK(std::string(e.what()) == "missed");
}

TEST_CASE("sampled curve validation") {
  SampledCurve c = connect(EulerAngles{0, 0.1, 1}, EulerAngles{1, 0.2, 2});
  CHECK_NOTHROW(c.validate());
  SampledCurve bad_grid = c;
  bad_grid.s[3] = bad_grid.s[1];
  CHECK_THROWS_AS(bad_grid.validate(), std::domain_error);
  SampledCurve bad_velocity = c;
  (*bad_velocity.velocities)[5] = bad_velocity.points[5].quat();
  CHECK_THROWS_AS(bad_velocity.validate(), std::domain_error);
  SampledCurve short_s = c;
  short_s.s.pop_back();
  CHECK_THROWS_AS(short_s.validate(), std::domain_error);
}
