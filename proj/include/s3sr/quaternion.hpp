#pragma once

#include <array>
#include <cmath>
#include <iosfwd>

namespace s3sr {

using Vec3 = std::array<double, 3>;

// q = w I + x i + y j + z k. On S³ the components are read as (x1, x2, y1, y2).
struct Quat {
  double w{0.0};
  double x{0.0};
  double y{0.0};
  double z{0.0};

  static constexpr Quat identity() { return {1.0, 0.0, 0.0, 0.0}; }
  static constexpr Quat unit_i() { return {0.0, 1.0, 0.0, 0.0}; }
  static constexpr Quat unit_j() { return {0.0, 0.0, 1.0, 0.0}; }
  static constexpr Quat unit_k() { return {0.0, 0.0, 0.0, 1.0}; }

  constexpr double modulus2() const { return w * w + x * x + y * y + z * z; }
  double modulus() const { return std::sqrt(modulus2()); }

  constexpr std::array<double, 4> components() const { return {w, x, y, z}; }
  static constexpr Quat from_components(const std::array<double, 4>& c) {
    return {c[0], c[1], c[2], c[3]};
  }
  constexpr Vec3 imaginary() const { return {x, y, z}; }

  friend constexpr bool operator==(const Quat&, const Quat&) = default;
};

constexpr Quat operator+(const Quat& p, const Quat& q) {
  return {p.w + q.w, p.x + q.x, p.y + q.y, p.z + q.z};
}
constexpr Quat operator-(const Quat& p, const Quat& q) {
  return {p.w - q.w, p.x - q.x, p.y - q.y, p.z - q.z};
}
constexpr Quat operator-(const Quat& q) { return {-q.w, -q.x, -q.y, -q.z}; }
constexpr Quat operator*(double s, const Quat& q) {
  return {s * q.w, s * q.x, s * q.y, s * q.z};
}
constexpr Quat operator*(const Quat& q, double s) { return s * q; }
constexpr Quat operator/(const Quat& q, double s) {
  return {q.w / s, q.x / s, q.y / s, q.z / s};
}

// Hamilton product with the basis table i² = j² = k² = −1, ij = k, jk = i, ki = j.
constexpr Quat qmul(const Quat& p, const Quat& q) {
  return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
          p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
          p.w * q.y + p.y * q.w + p.z * q.x - p.x * q.z,
          p.w * q.z + p.z * q.w + p.x * q.y - p.y * q.x};
}
constexpr Quat operator*(const Quat& p, const Quat& q) { return qmul(p, q); }

constexpr Quat conj(const Quat& q) { return {q.w, -q.x, -q.y, -q.z}; }

// Euclidean inner product on R⁴.
constexpr double dot(const Quat& p, const Quat& q) {
  return p.w * q.w + p.x * q.x + p.y * q.y + p.z * q.z;
}

double distance(const Quat& p, const Quat& q);

// Throws std::domain_error for the zero quaternion.
Quat inverse(const Quat& q);

// exp(v1 i + v2 j + v3 k) = cos|v| + sin|v| v/|v|.
Quat qexp_pure(const Vec3& v);

std::ostream& operator<<(std::ostream& os, const Quat& q);

inline constexpr double kUnitTolerance = 1e-12;

// Element of the group S³ = {q : |q| = 1}.
class S3Point {
 public:
  S3Point() = default;
  // Throws std::domain_error if | |q|² − 1 | > tol.
  explicit S3Point(const Quat& q, double tol = kUnitTolerance);

  static S3Point normalized(const Quat& q);
  static S3Point identity() { return S3Point{}; }

  const Quat& quat() const { return q_; }
  operator const Quat&() const { return q_; }

  S3Point inverse() const;

  friend bool operator==(const S3Point&, const S3Point&) = default;

 private:
  struct Unchecked {};
  S3Point(const Quat& q, Unchecked) : q_(q) {}

  Quat q_{Quat::identity()};

  friend S3Point operator*(const S3Point& p, const S3Point& q);
};

// Group law; the product is renormalized once.
S3Point operator*(const S3Point& p, const S3Point& q);

}  // namespace s3sr
