#pragma once

// Exact arithmetic over Q, Q[sqrt 33] and Q[sqrt 3, sqrt 11].
//
// Every vertex used by the construction lives at
//   (xa*sqrt3 + xb*sqrt11, yc + yd*sqrt33)
// with rational coefficients. That set is closed under the axis
// reflections, the rotation by pi/3 and the rotation by arccos(49/50),
// and squared distances between two such points land in Q[sqrt 33].

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>

#include <gmpxx.h>

namespace chromplane {

// Canonical arbitrary-precision rational (gcd(num, den) = 1, den > 0).
using Rat = mpq_class;

// Parses "p" or "p/q". Throws std::invalid_argument on malformed input or a
// zero denominator.
Rat parse_rat(const std::string& text);
std::string to_string(const Rat& r);

// r + s*sqrt(33)
struct Q33 {
  Rat r;
  Rat s;

  bool is_zero() const { return sgn(r) == 0 && sgn(s) == 0; }
  friend bool operator==(const Q33& a, const Q33& b) {
    return a.r == b.r && a.s == b.s;
  }
  friend Q33 operator+(const Q33& a, const Q33& b) {
    return {a.r + b.r, a.s + b.s};
  }
  friend Q33 operator-(const Q33& a, const Q33& b) {
    return {a.r - b.r, a.s - b.s};
  }
  friend Q33 operator*(const Q33& a, const Q33& b) {
    return {a.r * b.r + 33 * a.s * b.s, a.r * b.s + a.s * b.r};
  }
};

std::ostream& operator<<(std::ostream& os, const Q33& v);

// q0 + q1*sqrt3 + q2*sqrt11 + q3*sqrt33
struct FieldElem {
  Rat q0, q1, q2, q3;

  friend bool operator==(const FieldElem&, const FieldElem&) = default;
  bool is_zero() const {
    return sgn(q0) == 0 && sgn(q1) == 0 && sgn(q2) == 0 && sgn(q3) == 0;
  }
  friend FieldElem operator+(const FieldElem& a, const FieldElem& b) {
    return {a.q0 + b.q0, a.q1 + b.q1, a.q2 + b.q2, a.q3 + b.q3};
  }
  friend FieldElem operator-(const FieldElem& a, const FieldElem& b) {
    return {a.q0 - b.q0, a.q1 - b.q1, a.q2 - b.q2, a.q3 - b.q3};
  }
  friend FieldElem operator*(const FieldElem& a, const FieldElem& b);
};

// Exact sign of a field element: -1, 0 or +1. Zero only for the zero
// element. Uses interval evaluation with doubling precision until the
// enclosure excludes zero.
int field_sign(const FieldElem& v);

// Floating approximation, for diagnostics and cross-checks only.
long double to_long_double(const FieldElem& v);

// Integer lattice coordinates [a, b, c, d] meaning
//   (a*sqrt3/12 + b*sqrt11/12, c/12 + d*sqrt33/12).
struct QuadCoord {
  std::int64_t a = 0, b = 0, c = 0, d = 0;
  friend bool operator==(const QuadCoord&, const QuadCoord&) = default;
};

std::ostream& operator<<(std::ostream& os, const QuadCoord& q);

// (xa*sqrt3 + xb*sqrt11, yc + yd*sqrt33). All coefficients canonical, so
// structural equality is point equality.
struct PlanePoint {
  Rat xa, xb, yc, yd;

  friend bool operator==(const PlanePoint&, const PlanePoint&) = default;

  bool is_origin() const {
    return sgn(xa) == 0 && sgn(xb) == 0 && sgn(yc) == 0 && sgn(yd) == 0;
  }
  FieldElem x() const { return {0, xa, xb, 0}; }
  FieldElem y() const { return {yc, 0, 0, yd}; }

  friend PlanePoint operator+(const PlanePoint& p, const PlanePoint& q) {
    return {p.xa + q.xa, p.xb + q.xb, p.yc + q.yc, p.yd + q.yd};
  }
  friend PlanePoint operator-(const PlanePoint& p, const PlanePoint& q) {
    return {p.xa - q.xa, p.xb - q.xb, p.yc - q.yc, p.yd - q.yd};
  }
};

std::ostream& operator<<(std::ostream& os, const PlanePoint& p);

// Lexicographic order on the coefficient tuple; a storage order only, not a
// geometric one.
bool coefficient_less(const PlanePoint& p, const PlanePoint& q);

struct PlanePointHash {
  std::size_t operator()(const PlanePoint& p) const noexcept;
};

PlanePoint embed_quad(const QuadCoord& q);

// Inverse of embed_quad when every coefficient is a multiple of 1/12.
bool to_quad(const PlanePoint& p, QuadCoord& out);

Q33 sq_distance(const PlanePoint& p, const PlanePoint& q);

bool q33_equals_int(const Q33& v, long n);

// Approximate Cartesian coordinates.
std::array<double, 2> to_double(const PlanePoint& p);

}  // namespace chromplane
