#pragma once

// Exact plane isometries on PlanePoint. Only the transformations the
// construction needs are representable: the two axis reflections, rotation
// by multiples of pi/3 about the origin, and rotation by arccos(49/50)
// (sine 3*sqrt11/50) about an arbitrary PlanePoint. Rotations are
// counterclockwise.

#include <variant>
#include <vector>

#include "chromplane/exact_field.hpp"

namespace chromplane {

PlanePoint reflect_x(const PlanePoint& p);  // (x, y) -> (x, -y)
PlanePoint reflect_y(const PlanePoint& p);  // (x, y) -> (-x, y)
PlanePoint rotate60(const PlanePoint& p);
PlanePoint rotate60_k(const PlanePoint& p, int k);

// Rotation about `center` by +arccos(49/50) (direction = +1) or its inverse
// (direction = -1).
PlanePoint rotate_special(const PlanePoint& p, const PlanePoint& center,
                          int direction = 1);

struct ReflectX {};
struct ReflectY {};
struct Rotate60 {
  int k = 1;  // 0..5
};
struct RotateSpecial {
  PlanePoint center;
  int direction = 1;
};

using Isometry = std::variant<ReflectX, ReflectY, Rotate60, RotateSpecial>;

PlanePoint apply(const Isometry& iso, const PlanePoint& p);

// All twelve elements of the dihedral group generated by the axis
// reflections and rotate60, as functions of a point: rotations r^k followed
// by r^k composed with reflect_x.
std::vector<PlanePoint> dihedral_images(const PlanePoint& p);

// Deduplicated orbit under the order-12 dihedral group, in
// coefficient_less order.
std::vector<PlanePoint> orbit(const PlanePoint& p);

// Strict order by polar angle in [0, 2*pi), decided exactly. The origin has
// no angle and sorts before every other point.
bool polar_angle_less(const PlanePoint& p, const PlanePoint& q);

}  // namespace chromplane
