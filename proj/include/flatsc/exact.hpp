#pragma once

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <string>

#include "flatsc/error.hpp"

namespace flatsc {

/// Element a + b*sqrt(d) of a real quadratic field Q(sqrt d), d square-free.
///
/// Rationals are carried with d = 1 and b = 0. Two scalars that both have a
/// non-zero irrational part must agree on d; anything else is a
/// FieldMismatch. Every comparison is decided exactly.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : a_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(const mpq_class& a) : a_(a) { a_.canonicalize(); }  // NOLINT
  Scalar(const mpq_class& a, const mpq_class& b, int d);

  const mpq_class& rational() const { return a_; }
  const mpq_class& irrational() const { return b_; }
  /// Field discriminant; 1 for plain rationals.
  int field() const { return d_; }
  bool is_rational() const { return sgn(b_) == 0; }

  /// Exact sign: rational comparisons plus one squaring when the two parts
  /// have opposite signs.
  int sign() const;
  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  friend Scalar operator+(Scalar l, const Scalar& r) { return l += r; }
  friend Scalar operator-(Scalar l, const Scalar& r) { return l -= r; }
  friend Scalar operator*(Scalar l, const Scalar& r) { return l *= r; }
  friend Scalar operator/(Scalar l, const Scalar& r) { return l /= r; }

  Scalar inverse() const;
  Scalar abs() const { return sign() < 0 ? -*this : *this; }
  /// a - b*sqrt(d).
  Scalar conjugate() const;

  friend bool operator==(const Scalar& l, const Scalar& r);
  friend std::strong_ordering operator<=>(const Scalar& l, const Scalar& r);

  /// "p/q+p/qr": rational part, then the coefficient of r = sqrt(d).
  std::string str() const;
  /// Rational as "p/q" (always with a denominator).
  static std::string rational_str(const mpq_class& q);
  /// Parses "p/q" or "p"; throws ParseError.
  static mpq_class parse_rational(const std::string& text);
  /// Inverse of str(); d must be supplied by the caller.
  static Scalar parse(const std::string& text, int d);

  /// Rough value for display purposes only; never used to branch.
  double approx() const;

 private:
  mpq_class a_{0};
  mpq_class b_{0};
  int d_ = 1;

  void normalize();
  static int merge_field(const Scalar& l, const Scalar& r);
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

/// Throws FieldMismatch unless d is 1 or square-free and >= 2.
void check_field(int d);
bool is_square_free(long d);

struct Vec2 {
  Scalar x;
  Scalar y;

  Vec2() = default;
  Vec2(Scalar x_, Scalar y_) : x(std::move(x_)), y(std::move(y_)) {}

  Vec2 operator-() const { return {-x, -y}; }
  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  friend Vec2 operator+(Vec2 l, const Vec2& r) { return l += r; }
  friend Vec2 operator-(Vec2 l, const Vec2& r) { return l -= r; }
  friend Vec2 operator*(const Scalar& s, const Vec2& v) { return {s * v.x, s * v.y}; }
  friend bool operator==(const Vec2& l, const Vec2& r) { return l.x == r.x && l.y == r.y; }
  friend std::strong_ordering operator<=>(const Vec2& l, const Vec2& r) {
    if (auto c = l.x <=> r.x; c != 0) return c;
    return l.y <=> r.y;
  }

  bool is_zero() const { return x.is_zero() && y.is_zero(); }
  Scalar norm2() const { return x * x + y * y; }
  /// Rotation by +90 degrees; stays in the field.
  Vec2 rot90() const { return {-y, x}; }
  /// Representative of the class {v, -v}: y > 0, or y = 0 and x > 0.
  Vec2 canonical() const;
  std::string str() const;
};

inline Scalar wedge(const Vec2& u, const Vec2& v) { return u.x * v.y - u.y * v.x; }
inline Scalar dot(const Vec2& u, const Vec2& v) { return u.x * v.x + u.y * v.y; }
inline Vec2 operator*(int s, const Vec2& v) { return s < 0 ? -v : v; }

/// Row-major 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
  Scalar a{1}, b{0}, c{0}, d{1};

  static Mat2 identity() { return {}; }
  Scalar det() const { return a * d - b * c; }
  Vec2 apply(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  Mat2 operator*(const Mat2& o) const;
  Mat2 operator-() const { return {-a, -b, -c, -d}; }
  friend bool operator==(const Mat2& l, const Mat2& r) {
    return l.a == r.a && l.b == r.b && l.c == r.c && l.d == r.d;
  }
  /// Throws SingularMatrix when det = 0.
  Mat2 inverse() const;
  /// Largest field discriminant among entries (1 if all rational).
  int field() const;
  std::string str() const;
  /// Parses "a,b;c,d" where each entry is a scalar in str() form or "p/q".
  static Mat2 parse(const std::string& text, int d);
};

inline Vec2 mat_apply(const Mat2& m, const Vec2& v) { return m.apply(v); }
inline Mat2 mat_inverse(const Mat2& m) { return m.inverse(); }

/// Sign of (q - p) ^ (r - p); +1 is counterclockwise.
int orient(const Vec2& p, const Vec2& q, const Vec2& r);

enum class SegRelation { Disjoint, EndpointTouch, InteriorCross, CollinearOverlap };
const char* seg_relation_name(SegRelation r);

struct Segment {
  Vec2 a;
  Vec2 b;
};

/// Exact classification of two non-degenerate closed segments.
/// EndpointTouch: they meet in exactly one point which is an endpoint of at
/// least one of them. InteriorCross: a single point interior to both.
SegRelation seg_relation(const Segment& s1, const Segment& s2);

/// p on the closed segment [a, b].
bool on_segment(const Vec2& p, const Vec2& a, const Vec2& b);

}  // namespace flatsc
