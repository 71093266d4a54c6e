#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "s3sr/quaternion.hpp"

namespace s3sr {

// Discretized path on S³. Velocities, when present, are d/ds of the points.
struct SampledCurve {
  std::vector<double> s;
  std::vector<S3Point> points;
  std::optional<std::vector<Quat>> velocities;
  std::string tag;
  std::map<std::string, double> params;

  std::size_t size() const { return points.size(); }
  bool has_velocities() const { return velocities.has_value(); }

  // Grid non-decreasing, sizes consistent, points unit to 1e-10, velocities tangent to 1e-8.
  // Throws std::domain_error describing the first violation.
  void validate() const;

  // Left translation p·γ(s); velocities transform the same way.
  SampledCurve left_translated(const S3Point& p) const;
};

}  // namespace s3sr
