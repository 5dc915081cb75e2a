#pragma once

// Lines tangent to the unit sphere and the distances between them.
//
// Everything here is templated on the scalar type so that the same code runs
// in double and in long double (the "extended" precision mode of the CLI).
// All types are immutable values.

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cylcert {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Mat3 = Eigen::Matrix<Scalar, 3, 3>;

using Vec3d = Vec3<double>;
using Mat3d = Mat3<double>;

/// Tolerance on |x| = 1, |xi| = 1 and x . xi = 0 for tangent lines.
inline constexpr double kUnitTolerance = 1e-12;
/// Coordinates below this magnitude are skipped when fixing the direction sign.
inline constexpr double kSignThreshold = 1e-12;
/// Lines with |xi' . xi''| >= 1 - kParallelThreshold are treated as parallel.
inline constexpr double kParallelThreshold = 1e-10;

/// Flips `d` so that its first coordinate with magnitude above
/// kSignThreshold is positive.
template <typename Scalar>
Vec3<Scalar> canonical_direction(const Vec3<Scalar>& d) {
  for (int i = 0; i < 3; ++i) {
    if (std::abs(d[i]) > Scalar(kSignThreshold)) {
      return d[i] < Scalar(0) ? Vec3<Scalar>(-d) : d;
    }
  }
  return d;
}

/// An unoriented line tangent to the unit sphere, stored as the touch point
/// x and a unit direction xi with x . xi = 0. The pairs (x, xi) and (x, -xi)
/// describe the same line; the stored direction is the canonical one.
template <typename Scalar = double>
class TangentLine {
 public:
  using Vector = Vec3<Scalar>;

  TangentLine(const Vector& touch_point, const Vector& direction)
      : touch_(touch_point), dir_(canonical_direction<Scalar>(direction)) {
    const Scalar tol(kUnitTolerance);
    if (!(std::abs(touch_.norm() - Scalar(1)) <= tol)) {
      throw std::invalid_argument("TangentLine: touch point is not on the unit sphere");
    }
    if (!(std::abs(dir_.norm() - Scalar(1)) <= tol)) {
      throw std::invalid_argument("TangentLine: direction is not a unit vector");
    }
    if (!(std::abs(touch_.dot(dir_)) <= tol)) {
      throw std::invalid_argument("TangentLine: direction is not tangent at the touch point");
    }
  }

  /// Projects arbitrary nonzero input onto a valid tangent line: the touch
  /// point is normalized and the direction is orthogonalized against it.
  static TangentLine projected(const Vector& touch_point, const Vector& direction) {
    if (touch_point.norm() == Scalar(0)) {
      throw std::invalid_argument("TangentLine: zero touch point");
    }
    const Vector x = touch_point.normalized();
    const Vector d = direction - x.dot(direction) * x;
    if (d.norm() == Scalar(0)) {
      throw std::invalid_argument("TangentLine: direction is parallel to the touch point");
    }
    return TangentLine(x, d.normalized());
  }

  const Vector& touch_point() const { return touch_; }
  const Vector& direction() const { return dir_; }

  template <typename Other>
  TangentLine<Other> cast() const {
    return TangentLine<Other>::projected(touch_.template cast<Other>(), dir_.template cast<Other>());
  }

 private:
  Vector touch_;
  Vector dir_;
};

/// A line with a meaningful orientation, stored as any point on it and a
/// unit direction. The constructor normalizes the direction.
template <typename Scalar = double>
class OrientedLine {
 public:
  using Vector = Vec3<Scalar>;

  OrientedLine(const Vector& point, const Vector& direction) : point_(point) {
    const Scalar n = direction.norm();
    if (!(n > Scalar(0)) || !std::isfinite(static_cast<double>(n))) {
      throw std::invalid_argument("OrientedLine: zero or non-finite direction");
    }
    dir_ = direction / n;
  }

  explicit OrientedLine(const TangentLine<Scalar>& l)
      : point_(l.touch_point()), dir_(l.direction()) {}

  const Vector& point() const { return point_; }
  const Vector& direction() const { return dir_; }

  OrientedLine reversed() const { return OrientedLine(point_, -dir_); }

 private:
  Vector point_;
  Vector dir_;
};

/// Counterclockwise rotation about `axis` as seen from the axis tip.
template <typename Scalar = double>
class Rotation {
 public:
  using Vector = Vec3<Scalar>;
  using Matrix = Mat3<Scalar>;

  Rotation(const Vector& axis, Scalar angle) : angle_(angle) {
    const Scalar n = axis.norm();
    if (!(n > Scalar(0))) {
      throw std::invalid_argument("Rotation: zero axis");
    }
    axis_ = axis / n;
  }

  static Rotation identity() { return Rotation(Vector::UnitZ(), Scalar(0)); }

  /// Recovers axis and angle from an orthogonal matrix with det = +1.
  static Rotation from_matrix(const Matrix& m) {
    const Eigen::AngleAxis<Scalar> aa(m);
    return Rotation(aa.axis(), aa.angle());
  }

  const Vector& axis() const { return axis_; }
  Scalar angle() const { return angle_; }

  Matrix matrix() const { return Eigen::AngleAxis<Scalar>(angle_, axis_).toRotationMatrix(); }
  Vector apply(const Vector& v) const { return matrix() * v; }
  Rotation inverse() const { return Rotation(axis_, -angle_); }

 private:
  Vector axis_;
  Scalar angle_;
};

/// `compose(a, b)` is the rotation v -> a(b(v)): b is applied first.
template <typename Scalar>
Rotation<Scalar> compose(const Rotation<Scalar>& a, const Rotation<Scalar>& b) {
  return Rotation<Scalar>::from_matrix(a.matrix() * b.matrix());
}

namespace detail {

template <typename Scalar>
bool lex_less(const Vec3<Scalar>& a, const Vec3<Scalar>& b) {
  return std::lexicographical_compare(a.data(), a.data() + 3, b.data(), b.data() + 3);
}

template <typename Scalar>
Scalar distance_sq(const Vec3<Scalar>& x1, const Vec3<Scalar>& d1,
                   const Vec3<Scalar>& x2, const Vec3<Scalar>& d2) {
  const Vec3<Scalar> w = x2 - x1;
  if (std::abs(d1.dot(d2)) >= Scalar(1) - Scalar(kParallelThreshold)) {
    const Vec3<Scalar> perp = w - w.dot(d1) * d1;
    return perp.squaredNorm();
  }
  // |d1 x d2|^2 equals 1 - (d1 . d2)^2 for unit vectors and keeps full
  // relative accuracy for nearly parallel lines.
  const Vec3<Scalar> c = d1.cross(d2);
  const Scalar det = c.dot(w);
  return det * det / c.squaredNorm();
}

// Orders the two lines so that evaluation is symmetric bit for bit.
template <typename Scalar>
Scalar ordered_distance_sq(const Vec3<Scalar>& x1, const Vec3<Scalar>& d1,
                           const Vec3<Scalar>& x2, const Vec3<Scalar>& d2) {
  const bool swap = lex_less(x2, x1) || (x1 == x2 && lex_less(d2, d1));
  return swap ? distance_sq(x2, d2, x1, d1) : distance_sq(x1, d1, x2, d2);
}

}  // namespace detail

/// Squared distance between two lines. Parallel and nearly parallel lines
/// use the point-to-line distance from the second touch point to the first
/// line.
template <typename Scalar>
Scalar line_distance_sq(const TangentLine<Scalar>& u, const TangentLine<Scalar>& v) {
  return detail::ordered_distance_sq(u.touch_point(), u.direction(), v.touch_point(), v.direction());
}

template <typename Scalar>
Scalar line_distance_sq(const OrientedLine<Scalar>& u, const OrientedLine<Scalar>& v) {
  return detail::ordered_distance_sq(u.point(), canonical_direction<Scalar>(u.direction()),
                                     v.point(), canonical_direction<Scalar>(v.direction()));
}

template <typename Line>
auto line_distance(const Line& u, const Line& v) {
  using std::sqrt;
  return sqrt(line_distance_sq(u, v));
}

/// |x' - x''| + min(|xi' - xi''|, |xi' + xi''|), the metric on the manifold
/// of unoriented tangent lines.
template <typename Scalar>
Scalar config_norm_distance(const TangentLine<Scalar>& u, const TangentLine<Scalar>& v) {
  const Scalar dx = (u.touch_point() - v.touch_point()).norm();
  const Scalar dm = (u.direction() - v.direction()).norm();
  const Scalar dp = (u.direction() + v.direction()).norm();
  return dx + std::min(dm, dp);
}

template <typename Scalar>
TangentLine<Scalar> rotate_line(const Mat3<Scalar>& m, const TangentLine<Scalar>& l) {
  return TangentLine<Scalar>(m * l.touch_point(), m * l.direction());
}

template <typename Scalar>
TangentLine<Scalar> rotate_line(const Rotation<Scalar>& r, const TangentLine<Scalar>& l) {
  return rotate_line<Scalar>(r.matrix(), l);
}

template <typename Scalar>
OrientedLine<Scalar> transform_line(const Mat3<Scalar>& m, const OrientedLine<Scalar>& l) {
  return OrientedLine<Scalar>(m * l.point(), m * l.direction());
}

/// Cross-product matrix: skew(k) * v == k.cross(v).
template <typename Scalar>
Mat3<Scalar> skew(const Vec3<Scalar>& k) {
  Mat3<Scalar> m;
  m << Scalar(0), -k.z(), k.y(),
       k.z(), Scalar(0), -k.x(),
       -k.y(), k.x(), Scalar(0);
  return m;
}

}  // namespace cylcert
