#include <numbers>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "s3sr/quaternion.hpp"
#include "support.hpp"

using namespace s3sr;
using s3sr::testing::max_diff;
using s3sr::testing::Sampler;

namespace {
constexpr Quat I = Quat::identity();
constexpr Quat i = Quat::unit_i();
constexpr Quat j = Quat::unit_j();
constexpr Quat k = Quat::unit_k();
}  // namespace

TEST_CASE("basis table holds exactly") {
  CHECK(i * i == -I);
  CHECK(j * j == -I);
  CHECK(k * k == -I);
  CHECK(i * j == k);
  CHECK(j * k == i);
  CHECK(k * i == j);
  CHECK(j * i == -k);
  CHECK(k * j == -i);
  CHECK(i * k == -j);
  static_assert(qmul(i, j) == k);
}

TEST_CASE("identity is neutral and conjugation gives the modulus") {
  Sampler rng(1);
  for (int n = 0; n < 100; ++n) {
    const Quat q = rng.quat(3.0);
    CHECK(I * q == q);
    CHECK(q * I == q);
    const Quat p = q * conj(q);
    CHECK(p.w == doctest::Approx(q.modulus2()).epsilon(1e-15));
    CHECK(std::abs(p.x) <= 1e-14);
    CHECK(std::abs(p.y) <= 1e-14);
    CHECK(std::abs(p.z) <= 1e-14);
  }
}

TEST_CASE("conjugate") {
  CHECK(conj(I) == I);
  CHECK(conj(Quat{1, 2, 3, 4}) == Quat{1, -2, -3, -4});
  Sampler rng(2);
  const Quat q = rng.quat();
  CHECK(conj(conj(q)) == q);
}

TEST_CASE("inverse") {
  CHECK(inverse(Quat{2, 0, 0, 0}) == Quat{0.5, 0, 0, 0});
  const S3Point u = S3Point::normalized(Quat{1, 2, 3, 4});
  CHECK(max_diff(inverse(u.quat()), conj(u.quat())) <= 1e-15);
  CHECK(max_diff(u.inverse().quat(), conj(u.quat())) == 0.0);

  Sampler rng(3);
  for (int n = 0; n < 100; ++n) {
    const Quat q = 2.0 * rng.unit().quat();  // Δ = 4
    CHECK(max_diff(inverse(q), conj(q) / 4.0) <= 1e-15);
    CHECK(max_diff(q * inverse(q), I) <= 1e-14);
    CHECK(max_diff(inverse(q) * q, I) <= 1e-14);
  }
  CHECK_THROWS_AS(inverse(Quat{}), std::domain_error);
}

TEST_CASE("pure exponential") {
  CHECK(qexp_pure({0, 0, 0}) == I);
  CHECK(max_diff(qexp_pure({std::numbers::pi, 0, 0}), -I) <= 1e-15);
  CHECK(max_diff(qexp_pure({0, 0, std::numbers::pi / 2}), k) <= 1e-15);

  SUBCASE("agrees with integrating q' = q i") {
    // RK4 on q' = q·i from the identity up to s = π.
    Quat q = I;
    const int steps = 2000;
    const double h = std::numbers::pi / steps;
    auto f = [](const Quat& x) { return x * i; };
    for (int n = 0; n < steps; ++n) {
      const Quat k1 = f(q), k2 = f(q + 0.5 * h * k1), k3 = f(q + 0.5 * h * k2), k4 = f(q + h * k3);
      q = q + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    CHECK(max_diff(q, qexp_pure({std::numbers::pi, 0, 0})) <= 1e-12);
  }

  SUBCASE("tiny arguments use the series and stay unit") {
    for (double t : {1e-300, 1e-20, 1e-9, 3e-8, 1e-4}) {
      const Quat q = qexp_pure({t, -2 * t, 0.5 * t});
      CHECK(std::abs(q.modulus2() - 1.0) <= 1e-14);
      CHECK(q.x == doctest::Approx(t).epsilon(1e-8));
      CHECK(q.y == doctest::Approx(-2 * t).epsilon(1e-8));
    }
  }

  SUBCASE("random arguments have unit modulus") {
    Sampler rng(4);
    for (int n = 0; n < 1000; ++n) {
      const Quat q = qexp_pure({rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)});
      CHECK(std::abs(q.modulus2() - 1.0) <= 1e-14);
    }
  }
}

TEST_CASE("associativity and multiplicative modulus on random inputs") {
  Sampler rng(5);
  double assoc = 0.0, modulus = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const Quat p = rng.quat(10.0 / 2.0), q = rng.quat(10.0 / 2.0), r = rng.quat(10.0 / 2.0);
    assoc = std::max(assoc, max_diff((p * q) * r, p * (q * r)) / std::max(1.0, (p * q * r).modulus()));
    modulus = std::max(modulus, std::abs((p * q).modulus2() - p.modulus2() * q.modulus2()) /
                                    std::max(1.0, p.modulus2() * q.modulus2()));
  }
  CHECK(assoc <= 1e-12);
  CHECK(modulus <= 1e-12);
}

TEST_CASE("bilinearity of the product") {
  Sampler rng(6);
  const Quat p = rng.quat(), q = rng.quat(), r = rng.quat();
  const double a = 1.7, b = -0.3;
  CHECK(max_diff((a * p + b * q) * r, a * (p * r) + b * (q * r)) <= 1e-15);
  CHECK(max_diff(r * (a * p + b * q), a * (r * p) + b * (r * q)) <= 1e-15);
}

TEST_CASE("S3Point enforces the unit invariant") {
  CHECK_NOTHROW(S3Point(Quat{0, 1, 0, 0}));
  CHECK_THROWS_AS(S3Point(Quat{1.01, 0, 0, 0}), std::domain_error);
  CHECK_THROWS_AS(S3Point(Quat{1.0 + 1e-11, 0, 0, 0}), std::domain_error);
  CHECK_NOTHROW(S3Point(Quat{1.0 + 1e-11, 0, 0, 0}, 1e-10));
  CHECK_THROWS_AS(S3Point::normalized(Quat{}), std::domain_error);
  CHECK(S3Point::identity().quat() == I);

  Sampler rng(7);
  for (int n = 0; n < 1000; ++n) {
    const S3Point p = rng.unit(), q = rng.unit();
    const S3Point pq = p * q;
    CHECK(std::abs(pq.quat().modulus2() - 1.0) <= 1e-14);
    CHECK(max_diff(pq.quat(), p.quat() * q.quat()) <= 1e-14);
  }
}

TEST_CASE("distance and printing") {
  CHECK(distance(I, -I) == 2.0);
  std::ostringstream os;
  os << Quat{1, -2, 0.5, 0};
  CHECK_FALSE(os.str().empty());
}
