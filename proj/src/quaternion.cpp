#include "s3sr/quaternion.hpp"

#include <ostream>
#include <sstream>
#include <stdexcept>

namespace s3sr {

double distance(const Quat& p, const Quat& q) { return (p - q).modulus(); }

Quat inverse(const Quat& q) {
  const double delta = q.modulus2();
  if (!(delta > 0.0)) {
    throw std::domain_error("inverse: zero quaternion has no inverse");
  }
  return conj(q) / delta;
}

Quat qexp_pure(const Vec3& v) {
  const double n2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
  const double n = std::sqrt(n2);
  // sin(n)/n, with the series below 1e-8 where the quotient loses digits.
  const double sinc = n < 1e-8 ? 1.0 - n2 / 6.0 : std::sin(n) / n;
  return {std::cos(n), sinc * v[0], sinc * v[1], sinc * v[2]};
}

std::ostream& operator<<(std::ostream& os, const Quat& q) {
  return os << '(' << q.w << ", " << q.x << ", " << q.y << ", " << q.z << ')';
}

S3Point::S3Point(const Quat& q, double tol) : q_(q) {
  const double dev = std::abs(q.modulus2() - 1.0);
  if (!(dev <= tol)) {
    std::ostringstream msg;
    msg << "S3Point: |q|^2 deviates from 1 by " << dev << " (tolerance " << tol << ")";
    throw std::domain_error(msg.str());
  }
}

S3Point S3Point::normalized(const Quat& q) {
  const double n = q.modulus();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::domain_error("S3Point::normalized: cannot normalize a zero or non-finite quaternion");
  }
  return S3Point(q / n, Unchecked{});
}

S3Point S3Point::inverse() const { return S3Point(conj(q_), Unchecked{}); }

S3Point operator*(const S3Point& p, const S3Point& q) {
  const Quat r = qmul(p.q_, q.q_);
  return S3Point(r / r.modulus(), S3Point::Unchecked{});
}

}  // namespace s3sr
