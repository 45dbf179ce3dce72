#include "chromplane/exact_field.hpp"

#include <mpfr.h>

#include <cmath>
#include <stdexcept>

namespace chromplane {

Rat parse_rat(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') i = 1;
  bool seen_slash = false;
  bool digit_before = false, digit_after = false;
  for (std::size_t j = i; j < text.size(); ++j) {
    char ch = text[j];
    if (ch == '/' && !seen_slash) {
      seen_slash = true;
    } else if (ch >= '0' && ch <= '9') {
      (seen_slash ? digit_after : digit_before) = true;
    } else {
      throw std::invalid_argument("malformed rational: " + text);
    }
  }
  if (!digit_before || (seen_slash && !digit_after))
    throw std::invalid_argument("malformed rational: " + text);
  std::string body = text[0] == '+' ? text.substr(1) : text;
  Rat r;
  if (seen_slash) {
    auto slash = body.find('/');
    mpz_class num(body.substr(0, slash), 10);
    mpz_class den(body.substr(slash + 1), 10);
    if (den == 0) throw std::invalid_argument("zero denominator: " + text);
    r = Rat(num, den);
  } else {
    r = Rat(mpz_class(body, 10));
  }
  r.canonicalize();
  return r;
}

std::string to_string(const Rat& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Q33& v) {
  return os << v.r << " + " << v.s << "*sqrt33";
}

FieldElem operator*(const FieldElem& a, const FieldElem& b) {
  FieldElem out;
  out.q0 = a.q0 * b.q0 + 3 * a.q1 * b.q1 + 11 * a.q2 * b.q2 +
           33 * a.q3 * b.q3;
  out.q1 = a.q0 * b.q1 + a.q1 * b.q0 + 11 * (a.q2 * b.q3 + a.q3 * b.q2);
  out.q2 = a.q0 * b.q2 + a.q2 * b.q0 + 3 * (a.q1 * b.q3 + a.q3 * b.q1);
  out.q3 = a.q0 * b.q3 + a.q3 * b.q0 + a.q1 * b.q2 + a.q2 * b.q1;
  return out;
}

namespace {

// Closed interval [lo, hi] of MPFR numbers at a fixed precision.
class Interval {
 public:
  explicit Interval(mpfr_prec_t prec) {
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
  }
  ~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
  }
  Interval(const Interval&) = delete;
  Interval& operator=(const Interval&) = delete;

  // this += q * sqrt(m), m > 0
  void add_scaled_sqrt(const Rat& q, unsigned long m, mpfr_prec_t prec) {
    int s = sgn(q);
    if (s == 0) return;
    mpfr_t ql, qh, rl, rh, tl, th;
    for (auto* t : {&ql, &qh, &rl, &rh, &tl, &th}) mpfr_init2(*t, prec);
    mpfr_set_q(ql, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(qh, q.get_mpq_t(), MPFR_RNDU);
    if (m == 1) {
      mpfr_set_ui(rl, 1, MPFR_RNDN);
      mpfr_set_ui(rh, 1, MPFR_RNDN);
    } else {
      mpfr_sqrt_ui(rl, m, MPFR_RNDD);
      mpfr_sqrt_ui(rh, m, MPFR_RNDU);
    }
    if (s > 0) {
      mpfr_mul(tl, ql, rl, MPFR_RNDD);
      mpfr_mul(th, qh, rh, MPFR_RNDU);
    } else {
      mpfr_mul(tl, ql, rh, MPFR_RNDD);
      mpfr_mul(th, qh, rl, MPFR_RNDU);
    }
    mpfr_add(lo_, lo_, tl, MPFR_RNDD);
    mpfr_add(hi_, hi_, th, MPFR_RNDU);
    for (auto* t : {&ql, &qh, &rl, &rh, &tl, &th}) mpfr_clear(*t);
  }

  int sign() const {
    if (mpfr_sgn(lo_) > 0) return 1;
    if (mpfr_sgn(hi_) < 0) return -1;
    return 0;  // undecided
  }

 private:
  mpfr_t lo_, hi_;
};

}  // namespace

int field_sign(const FieldElem& v) {
  if (v.is_zero()) return 0;
  // {1, sqrt3, sqrt11, sqrt33} is linearly independent over Q, so a nonzero
  // element has a nonzero value and the loop terminates.
  for (mpfr_prec_t prec = 64;; prec *= 2) {
    Interval acc(prec);
    acc.add_scaled_sqrt(v.q0, 1, prec);
    acc.add_scaled_sqrt(v.q1, 3, prec);
    acc.add_scaled_sqrt(v.q2, 11, prec);
    acc.add_scaled_sqrt(v.q3, 33, prec);
    if (int s = acc.sign(); s != 0) return s;
  }
}

long double to_long_double(const FieldElem& v) {
  auto ld = [](const Rat& r) {
    return static_cast<long double>(r.get_d());
  };
  return ld(v.q0) + ld(v.q1) * std::sqrt(3.0L) + ld(v.q2) * std::sqrt(11.0L) +
         ld(v.q3) * std::sqrt(33.0L);
}

std::ostream& operator<<(std::ostream& os, const QuadCoord& q) {
  return os << '[' << q.a << ", " << q.b << ", " << q.c << ", " << q.d << ']';
}

std::ostream& operator<<(std::ostream& os, const PlanePoint& p) {
  return os << '(' << p.xa << ", " << p.xb << ", " << p.yc << ", " << p.yd
            << ')';
}

bool coefficient_less(const PlanePoint& p, const PlanePoint& q) {
  if (p.xa != q.xa) return p.xa < q.xa;
  if (p.xb != q.xb) return p.xb < q.xb;
  if (p.yc != q.yc) return p.yc < q.yc;
  return p.yd < q.yd;
}

namespace {

std::size_t hash_mpz(mpz_srcptr z, std::size_t seed) {
  auto mix = [&seed](std::size_t v) {
    seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
  };
  mix(static_cast<std::size_t>(mpz_sgn(z) + 1));
  std::size_t limbs = mpz_size(z);
  for (std::size_t i = 0; i < limbs; ++i)
    mix(static_cast<std::size_t>(mpz_getlimbn(z, i)));
  return seed;
}

std::size_t hash_rat(const Rat& r, std::size_t seed) {
  seed = hash_mpz(r.get_num_mpz_t(), seed);
  return hash_mpz(r.get_den_mpz_t(), seed);
}

}  // namespace

std::size_t PlanePointHash::operator()(const PlanePoint& p) const noexcept {
  std::size_t h = 0;
  h = hash_rat(p.xa, h);
  h = hash_rat(p.xb, h);
  h = hash_rat(p.yc, h);
  h = hash_rat(p.yd, h);
  return h;
}

PlanePoint embed_quad(const QuadCoord& q) {
  auto twelfth = [](std::int64_t v) {
    Rat r(mpz_class(static_cast<long>(v)), mpz_class(12));
    r.canonicalize();
    return r;
  };
  return {twelfth(q.a), twelfth(q.b), twelfth(q.c), twelfth(q.d)};
}

bool to_quad(const PlanePoint& p, QuadCoord& out) {
  auto scaled = [](const Rat& r, std::int64_t& dst) {
    Rat s = r * 12;
    if (s.get_den() != 1 || !s.get_num().fits_slong_p()) return false;
    dst = s.get_num().get_si();
    return true;
  };
  QuadCoord q;
  if (!scaled(p.xa, q.a) || !scaled(p.xb, q.b) || !scaled(p.yc, q.c) ||
      !scaled(p.yd, q.d))
    return false;
  out = q;
  return true;
}

Q33 sq_distance(const PlanePoint& p, const PlanePoint& q) {
  Rat da = p.xa - q.xa;
  Rat db = p.xb - q.xb;
  Rat dc = p.yc - q.yc;
  Rat dd = p.yd - q.yd;
  // (da*sqrt3 + db*sqrt11)^2 + (dc + dd*sqrt33)^2
  Q33 out;
  out.r = 3 * da * da + 11 * db * db + dc * dc + 33 * dd * dd;
  out.s = 2 * (da * db + dc * dd);
  return out;
}

bool q33_equals_int(const Q33& v, long n) {
  return sgn(v.s) == 0 && v.r == n;
}

std::array<double, 2> to_double(const PlanePoint& p) {
  return {static_cast<double>(to_long_double(p.x())),
          static_cast<double>(to_long_double(p.y()))};
}

}  // namespace chromplane
