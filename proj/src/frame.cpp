#include "s3sr/frame.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace s3sr {

TangentVec TangentVec::make(const S3Point& base, const Quat& v, double tol) {
  const double normal = dot(base.quat(), v);
  if (!(std::abs(normal) <= tol)) {
    std::ostringstream msg;
    msg << "TangentVec: normal component " << normal << " exceeds tolerance " << tol;
    throw std::domain_error(msg.str());
  }
  return TangentVec{base, v};
}

std::array<Quat, 4> frame_vectors(const Quat& q) {
  const double x1 = q.w, x2 = q.x, y1 = q.y, y2 = q.z;
  return {Quat{x2, -x1, -y2, y1}, Quat{y2, -y1, x2, -x1}, Quat{y1, y2, -x1, -x2}, q};
}

Frame frame_at(const S3Point& q) {
  const auto [x, y, t, n] = frame_vectors(q.quat());
  return Frame{{q, x}, {q, y}, {q, t}, {q, n}};
}

FrameComponents components(const S3Point& q, const Quat& v, double tangency_tol) {
  const auto tv = TangentVec::make(q, v, tangency_tol);
  return components(tv);
}

FrameComponents components(const TangentVec& v) {
  const auto f = frame_vectors(v.base.quat());
  return {dot(v.v, f[0]), dot(v.v, f[1]), dot(v.v, f[2])};
}

double omega_eval(const Quat& q, const Quat& v) {
  return q.w * v.y - q.y * v.w + q.x * v.z - q.z * v.x;
}

double horizontality_residual(const Quat& q, const Quat& v) {
  return (v.w * q.y + v.x * q.z) - (q.w * v.y + q.x * v.z);
}

bool is_horizontal(const Quat& q, const Quat& v, double tol) {
  return std::abs(horizontality_residual(q, v)) <= tol;
}

Quat row_times(const Quat& q, const Mat4& m) {
  const auto c = q.components();
  std::array<double, 4> r{};
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) r[j] += c[i] * m[i][j];
  }
  return Quat::from_components(r);
}

Mat4 matmul(const Mat4& a, const Mat4& b) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

Mat4 transpose(const Mat4& m) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i][j] = m[j][i];
  return r;
}

Mat4 structure_matrix(Structure which) {
  switch (which) {
    case Structure::U:
      return Mat4{{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}};
    case Structure::I1:
      return Mat4{{{0, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, -1}, {0, 0, 1, 0}}};
    case Structure::I2:
      return Mat4{{{0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 0, 0, 0}, {0, -1, 0, 0}}};
    case Structure::I3:
      return Mat4{{{0, 0, 0, 1}, {0, 0, -1, 0}, {0, 1, 0, 0}, {-1, 0, 0, 0}}};
  }
  throw std::domain_error("structure_matrix: unknown matrix");
}

namespace {

Mat4 scaled_sum(double a, const Mat4& ma, double b, const Mat4& mb, double c, const Mat4& mc) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i][j] = a * ma[i][j] + b * mb[i][j] + c * mc[i][j];
  return r;
}

}  // namespace

Mat4 LeftInvariantField::matrix() const {
  // X = −q·I1, Y = −q·I3, T = −q·I2.
  return scaled_sum(-x, structure_matrix(Structure::I1), -y, structure_matrix(Structure::I3), -t,
                    structure_matrix(Structure::I2));
}

Mat4 bracket_matrix(const Mat4& a, const Mat4& b) {
  const Mat4 ab = matmul(a, b);
  const Mat4 ba = matmul(b, a);
  Mat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i][j] = ab[i][j] - ba[i][j];
  return r;
}

LeftInvariantField field_from_matrix(const Mat4& a, double tol) {
  // Row 0 of −(xI1 + yI3 + tI2) is (0, −x, −t, −y): the field at the identity.
  const LeftInvariantField f{-a[0][1], -a[0][3], -a[0][2]};
  const Mat4 m = f.matrix();
  double dev = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) dev = std::max(dev, std::abs(m[i][j] - a[i][j]));
  if (dev > tol) {
    throw std::domain_error("field_from_matrix: matrix is not a left-invariant field tangent to S3");
  }
  return f;
}

LeftInvariantField bracket(const LeftInvariantField& u, const LeftInvariantField& v) {
  return field_from_matrix(bracket_matrix(u.matrix(), v.matrix()));
}

LeftInvariantField bracket(const Mat4& u, const Mat4& v) {
  return bracket(field_from_matrix(u), field_from_matrix(v));
}

}  // namespace s3sr
