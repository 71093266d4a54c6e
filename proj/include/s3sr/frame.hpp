#pragma once

#include <array>

#include "s3sr/quaternion.hpp"

namespace s3sr {

inline constexpr double kTangencyTolerance = 1e-10;

// A 4-vector (components along ∂x1, ∂x2, ∂y1, ∂y2) attached to a point of S³.
struct TangentVec {
  S3Point base;
  Quat v;

  // Throws std::domain_error if |⟨v, base⟩| > tol.
  static TangentVec make(const S3Point& base, const Quat& v, double tol = kTangencyTolerance);
};

struct Frame {
  TangentVec x;
  TangentVec y;
  TangentVec t;
  TangentVec n;
};

// Raw coordinate formulas for (X, Y, T, N) at an arbitrary 4-vector, no unit check:
//   X = ( x2, −x1, −y2,  y1) = −q i
//   Y = ( y2, −y1,  x2, −x1) = −q k
//   T = ( y1,  y2, −x1, −x2) = −q j
//   N = q
std::array<Quat, 4> frame_vectors(const Quat& q);

Frame frame_at(const S3Point& q);

struct FrameComponents {
  double a{0.0};  // along X
  double b{0.0};  // along Y
  double c{0.0};  // along T
};

// (⟨v,X⟩, ⟨v,Y⟩, ⟨v,T⟩). Throws std::domain_error when v is not tangent at q.
FrameComponents components(const S3Point& q, const Quat& v, double tangency_tol = kTangencyTolerance);
FrameComponents components(const TangentVec& v);

// ω = x1 dy1 − y1 dx1 + x2 dy2 − y2 dx2 evaluated on v at q. Equals −c.
double omega_eval(const Quat& q, const Quat& v);

// ⟨v_x, y⟩ − ⟨x, v_y⟩, where (x, y) and (v_x, v_y) split base and vector in halves.
double horizontality_residual(const Quat& q, const Quat& v);

bool is_horizontal(const Quat& q, const Quat& v, double tol);

using Mat4 = std::array<std::array<double, 4>, 4>;

// Row-vector action q·M.
Quat row_times(const Quat& q, const Mat4& m);
Mat4 matmul(const Mat4& a, const Mat4& b);
Mat4 transpose(const Mat4& m);

enum class Structure { U, I1, I2, I3 };

// The 4×4 matrices with q·I1 = q i, q·I2 = q j, q·I3 = q k; U is the identity.
Mat4 structure_matrix(Structure which);

// Left-invariant field xX + yY + tT, represented as v(q) = q·A.
struct LeftInvariantField {
  double x{0.0};
  double y{0.0};
  double t{0.0};

  Mat4 matrix() const;
  Quat at(const Quat& q) const { return row_times(q, matrix()); }

  static constexpr LeftInvariantField X() { return {1.0, 0.0, 0.0}; }
  static constexpr LeftInvariantField Y() { return {0.0, 1.0, 0.0}; }
  static constexpr LeftInvariantField T() { return {0.0, 0.0, 1.0}; }

  friend constexpr bool operator==(const LeftInvariantField&, const LeftInvariantField&) = default;
};

// Bracket of linear fields q·A and q·B with [U,V]f = U(Vf) − V(Uf): q·(AB − BA).
Mat4 bracket_matrix(const Mat4& a, const Mat4& b);

// Reads off coefficients in span{X, Y, T}; throws std::domain_error otherwise
// (for example the normal field N, A = U).
LeftInvariantField field_from_matrix(const Mat4& a, double tol = 1e-12);

// Exact commutator; [X, Y] = 2T, [X, T] = −2Y, [Y, T] = 2X.
LeftInvariantField bracket(const LeftInvariantField& u, const LeftInvariantField& v);
// Throws std::domain_error unless both matrices represent fields in span{X, Y, T}.
LeftInvariantField bracket(const Mat4& u, const Mat4& v);

}  // namespace s3sr
