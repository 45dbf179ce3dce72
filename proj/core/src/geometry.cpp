#include "chromplane/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace chromplane {

PlanePoint reflect_x(const PlanePoint& p) { return {p.xa, p.xb, -p.yc, -p.yd}; }

PlanePoint reflect_y(const PlanePoint& p) { return {-p.xa, -p.xb, p.yc, p.yd}; }

PlanePoint rotate60(const PlanePoint& p) {
  // x' = x/2 - y*sqrt3/2, y' = x*sqrt3/2 + y/2, with
  // sqrt3*sqrt33 = 3*sqrt11 and sqrt3*sqrt11 = sqrt33.
  PlanePoint out;
  out.xa = (p.xa - p.yc) / 2;
  out.xb = (p.xb - 3 * p.yd) / 2;
  out.yc = (3 * p.xa + p.yc) / 2;
  out.yd = (p.xb + p.yd) / 2;
  return out;
}

PlanePoint rotate60_k(const PlanePoint& p, int k) {
  k %= 6;
  if (k < 0) k += 6;
  PlanePoint out = p;
  for (int i = 0; i < k; ++i) out = rotate60(out);
  return out;
}

PlanePoint rotate_special(const PlanePoint& p, const PlanePoint& center,
                          int direction) {
  if (direction != 1 && direction != -1)
    throw std::invalid_argument("rotate_special: direction must be +1 or -1");
  // cos = 49/50, sin = direction * 3*sqrt11/50.
  //   y*sqrt11 = yc*sqrt11 + 11*yd*sqrt3
  //   x*sqrt11 = 11*xb + xa*sqrt33
  PlanePoint d = p - center;
  Rat s(3 * direction, 50);
  Rat c(49, 50);
  s.canonicalize();
  c.canonicalize();
  PlanePoint r;
  r.xa = c * d.xa - s * 11 * d.yd;
  r.xb = c * d.xb - s * d.yc;
  r.yc = c * d.yc + s * 11 * d.xb;
  r.yd = c * d.yd + s * d.xa;
  return r + center;
}

PlanePoint apply(const Isometry& iso, const PlanePoint& p) {
  struct Visitor {
    const PlanePoint& p;
    PlanePoint operator()(const ReflectX&) const { return reflect_x(p); }
    PlanePoint operator()(const ReflectY&) const { return reflect_y(p); }
    PlanePoint operator()(const Rotate60& r) const { return rotate60_k(p, r.k); }
    PlanePoint operator()(const RotateSpecial& r) const {
      return rotate_special(p, r.center, r.direction);
    }
  };
  return std::visit(Visitor{p}, iso);
}

std::vector<PlanePoint> dihedral_images(const PlanePoint& p) {
  std::vector<PlanePoint> out;
  out.reserve(12);
  PlanePoint r = p;
  for (int k = 0; k < 6; ++k) {
    out.push_back(r);
    r = rotate60(r);
  }
  r = reflect_x(p);
  for (int k = 0; k < 6; ++k) {
    out.push_back(r);
    r = rotate60(r);
  }
  return out;
}

std::vector<PlanePoint> orbit(const PlanePoint& p) {
  auto images = dihedral_images(p);
  std::sort(images.begin(), images.end(), coefficient_less);
  images.erase(std::unique(images.begin(), images.end()), images.end());
  return images;
}

namespace {

// 0 for angles in [0, pi), 1 for [pi, 2*pi).
int half_plane(const PlanePoint& p) {
  int sy = field_sign(p.y());
  if (sy > 0) return 0;
  if (sy < 0) return 1;
  return field_sign(p.x()) > 0 ? 0 : 1;
}

}  // namespace

bool polar_angle_less(const PlanePoint& p, const PlanePoint& q) {
  bool po = p.is_origin(), qo = q.is_origin();
  if (po || qo) return po && !qo;
  int hp = half_plane(p), hq = half_plane(q);
  if (hp != hq) return hp < hq;
  // Same half plane: p comes first iff cross(p, q) > 0.
  FieldElem cross = p.x() * q.y() - q.x() * p.y();
  return field_sign(cross) > 0;
}

}  // namespace chromplane
