#include "s3sr/curve.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace s3sr {

void SampledCurve::validate() const {
  auto fail = [](const std::string& what, std::size_t i) {
    std::ostringstream msg;
    msg << "SampledCurve: " << what << " at sample " << i;
    throw std::domain_error(msg.str());
  };
  if (s.size() != points.size()) fail("grid/point count mismatch", 0);
  if (velocities && velocities->size() != points.size()) fail("velocity count mismatch", 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0 && s[i] < s[i - 1]) fail("decreasing parameter", i);
    if (std::abs(points[i].quat().modulus2() - 1.0) > 1e-10) fail("non-unit point", i);
    if (velocities && std::abs(dot(points[i].quat(), (*velocities)[i])) > 1e-8) {
      fail("non-tangent velocity", i);
    }
  }
}

SampledCurve SampledCurve::left_translated(const S3Point& p) const {
  SampledCurve out = *this;
  for (auto& q : out.points) q = p * q;
  if (out.velocities) {
    for (auto& v : *out.velocities) v = qmul(p.quat(), v);
  }
  return out;
}

}  // namespace s3sr
