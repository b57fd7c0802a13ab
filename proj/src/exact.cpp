#include "flatsc/exact.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <vector>

namespace flatsc {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::GluingMismatch: return "GluingMismatch";
    case ErrorCode::NonConvexPolygon: return "NonConvexPolygon";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::BadConeAngle: return "BadConeAngle";
    case ErrorCode::StratumError: return "StratumError";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::DirectionLeavesField: return "DirectionLeavesField";
    case ErrorCode::NoHitWithinBudget: return "NoHitWithinBudget";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::NotPairwiseDisjoint: return "NotPairwiseDisjoint";
    case ErrorCode::UnknownFormat: return "UnknownFormat";
    case ErrorCode::SeedNotDisjoint: return "SeedNotDisjoint";
    case ErrorCode::UnknownEdge: return "UnknownEdge";
    case ErrorCode::AnchorInvalid: return "AnchorInvalid";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::UnknownCylinderStatus: return "UnknownCylinderStatus";
    case ErrorCode::NotAnEdge: return "NotAnEdge";
    case ErrorCode::BadGenerator: return "BadGenerator";
    case ErrorCode::NoTriangleInTruncation: return "NoTriangleInTruncation";
    case ErrorCode::NotFlippable: return "NotFlippable";
    case ErrorCode::UnreachableInTruncation: return "UnreachableInTruncation";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

bool is_square_free(long d) {
  if (d < 1) return false;
  for (long p = 2; p * p <= d; ++p) {
    if (d % (p * p) == 0) return false;
  }
  return true;
}

void check_field(int d) {
  if (!is_square_free(d)) {
    throw Error(ErrorCode::FieldMismatch,
                "field discriminant " + std::to_string(d) + " is not square-free");
  }
}

Scalar::Scalar(const mpq_class& a, const mpq_class& b, int d) : a_(a), b_(b), d_(d) {
  check_field(d);
  a_.canonicalize();
  b_.canonicalize();
  normalize();
}

void Scalar::normalize() {
  if (d_ == 1) {
    a_ += b_;
    b_ = 0;
  }
  if (sgn(b_) == 0) d_ = 1;
}

int Scalar::merge_field(const Scalar& l, const Scalar& r) {
  if (l.d_ == 1) return r.d_;
  if (r.d_ == 1 || r.d_ == l.d_) return l.d_;
  throw Error(ErrorCode::FieldMismatch, "mixing Q(sqrt " + std::to_string(l.d_) +
                                            ") with Q(sqrt " + std::to_string(r.d_) + ")");
}

int Scalar::sign() const {
  const int sa = sgn(a_);
  const int sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  const mpq_class lhs = a_ * a_;
  const mpq_class rhs = b_ * b_ * d_;
  if (lhs > rhs) return sa;
  if (lhs < rhs) return sb;
  return 0;
}

Scalar Scalar::operator-() const {
  Scalar r;
  r.a_ = -a_;
  r.b_ = -b_;
  r.d_ = d_;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  const int d = merge_field(*this, o);
  a_ += o.a_;
  if (sgn(o.b_) != 0) b_ += o.b_;
  d_ = d;
  normalize();
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  const int d = merge_field(*this, o);
  a_ -= o.a_;
  if (sgn(o.b_) != 0) b_ -= o.b_;
  d_ = d;
  normalize();
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  const int d = merge_field(*this, o);
  if (sgn(b_) == 0 && sgn(o.b_) == 0) {
    a_ *= o.a_;
    return *this;
  }
  const mpq_class na = a_ * o.a_ + b_ * o.b_ * d;
  const mpq_class nb = a_ * o.b_ + b_ * o.a_;
  a_ = na;
  b_ = nb;
  d_ = d;
  normalize();
  return *this;
}

Scalar Scalar::conjugate() const {
  Scalar r = *this;
  r.b_ = -r.b_;
  return r;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw Error(ErrorCode::SingularMatrix, "division by zero scalar");
  if (sgn(b_) == 0) return Scalar(mpq_class(1) / a_);
  const mpq_class norm = a_ * a_ - b_ * b_ * d_;
  Scalar r;
  r.a_ = a_ / norm;
  r.b_ = -b_ / norm;
  r.d_ = d_;
  r.normalize();
  return r;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (sgn(o.b_) == 0) {
    if (sgn(o.a_) == 0) throw Error(ErrorCode::SingularMatrix, "division by zero scalar");
    a_ /= o.a_;
    b_ /= o.a_;
    return *this;
  }
  return *this *= o.inverse();
}

bool operator==(const Scalar& l, const Scalar& r) {
  if (l.d_ != r.d_) {
    Scalar::merge_field(l, r);
    return false;
  }
  return l.a_ == r.a_ && l.b_ == r.b_;
}

std::strong_ordering operator<=>(const Scalar& l, const Scalar& r) {
  const int s = (l - r).sign();
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Scalar::rational_str(const mpq_class& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string Scalar::str() const { return rational_str(a_) + "+" + rational_str(b_) + "r"; }

mpq_class Scalar::parse_rational(const std::string& text) {
  auto bad = [&]() { return Error(ErrorCode::ParseError, "bad rational \"" + text + "\""); };
  if (text.empty()) throw bad();
  const auto slash = text.find('/');
  auto valid_int = [](const std::string& s, bool allow_sign) {
    if (s.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') return false;
    }
    return true;
  };
  std::string num = slash == std::string::npos ? text : text.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (!valid_int(num, true) || !valid_int(den, false)) throw bad();
  if (num[0] == '+') num = num.substr(1);
  mpz_class n(num, 10);
  mpz_class q(den, 10);
  if (q == 0) throw bad();
  mpq_class r(n, q);
  r.canonicalize();
  return r;
}

Scalar Scalar::parse(const std::string& text, int d) {
  // Accepts "a+br" (as produced by str()) or a bare rational "a".
  if (!text.empty() && text.back() == 'r') {
    // Split at the '+' that separates the two parts; the rational part may
    // itself start with a sign, so search after the first character.
    const auto plus = text.find('+', 1);
    if (plus == std::string::npos) {
      throw Error(ErrorCode::ParseError, "bad field scalar \"" + text + "\"");
    }
    const mpq_class a = parse_rational(text.substr(0, plus));
    const mpq_class b = parse_rational(text.substr(plus + 1, text.size() - plus - 2));
    if (sgn(b) != 0 && d == 1) {
      throw Error(ErrorCode::FieldMismatch, "irrational part given but field is Q");
    }
    return Scalar(a, b, sgn(b) == 0 ? 1 : d);
  }
  return Scalar(parse_rational(text));
}

double Scalar::approx() const {
  return a_.get_d() + b_.get_d() * std::sqrt(static_cast<double>(d_));
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

Vec2 Vec2::canonical() const {
  const int sy = y.sign();
  if (sy > 0 || (sy == 0 && x.sign() > 0)) return *this;
  return -*this;
}

std::string Vec2::str() const { return "(" + x.str() + ", " + y.str() + ")"; }

Mat2 Mat2::operator*(const Mat2& o) const {
  return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

Mat2 Mat2::inverse() const {
  const Scalar det_ = det();
  if (det_.is_zero()) throw Error(ErrorCode::SingularMatrix, "matrix " + str() + " is singular");
  const Scalar inv = det_.inverse();
  return {d * inv, -b * inv, -c * inv, a * inv};
}

int Mat2::field() const {
  int f = 1;
  for (const Scalar* s : {&a, &b, &c, &d}) {
    if (s->field() != 1) {
      if (f != 1 && f != s->field()) throw Error(ErrorCode::FieldMismatch, "mixed-field matrix");
      f = s->field();
    }
  }
  return f;
}

std::string Mat2::str() const {
  return a.str() + "," + b.str() + ";" + c.str() + "," + d.str();
}

Mat2 Mat2::parse(const std::string& text, int d) {
  std::vector<std::string> parts;
  std::string cur;
  int semis = 0;
  for (char ch : text) {
    if (ch == ' ') continue;
    if (ch == ',' || ch == ';') {
      if (ch == ';') {
        ++semis;
        if (parts.size() != 1) throw Error(ErrorCode::ParseError, "matrix must be \"a,b;c,d\"");
      }
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 4 || semis != 1) {
    throw Error(ErrorCode::ParseError, "matrix must be \"a,b;c,d\", got \"" + text + "\"");
  }
  return {Scalar::parse(parts[0], d), Scalar::parse(parts[1], d), Scalar::parse(parts[2], d),
          Scalar::parse(parts[3], d)};
}

int orient(const Vec2& p, const Vec2& q, const Vec2& r) { return wedge(q - p, r - p).sign(); }

const char* seg_relation_name(SegRelation r) {
  switch (r) {
    case SegRelation::Disjoint: return "disjoint";
    case SegRelation::EndpointTouch: return "endpoint_touch";
    case SegRelation::InteriorCross: return "interior_cross";
    case SegRelation::CollinearOverlap: return "collinear_overlap";
  }
  return "?";
}

bool on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  if (orient(a, b, p) != 0) return false;
  return dot(p - a, p - b).sign() <= 0;
}

SegRelation seg_relation(const Segment& s1, const Segment& s2) {
  const int o1 = orient(s1.a, s1.b, s2.a);
  const int o2 = orient(s1.a, s1.b, s2.b);
  if (o1 == 0 && o2 == 0) {
    // Collinear: project onto the direction of s1.
    const Vec2 dir = s1.b - s1.a;
    Scalar lo1 = dot(s1.a, dir), hi1 = dot(s1.b, dir);
    Scalar lo2 = dot(s2.a, dir), hi2 = dot(s2.b, dir);
    if (hi1 < lo1) std::swap(lo1, hi1);
    if (hi2 < lo2) std::swap(lo2, hi2);
    const Scalar lo = lo1 < lo2 ? lo2 : lo1;
    const Scalar hi = hi1 < hi2 ? hi1 : hi2;
    const int s = (hi - lo).sign();
    if (s > 0) return SegRelation::CollinearOverlap;
    if (s == 0) return SegRelation::EndpointTouch;
    return SegRelation::Disjoint;
  }
  const int o3 = orient(s2.a, s2.b, s1.a);
  const int o4 = orient(s2.a, s2.b, s1.b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return SegRelation::InteriorCross;
  if ((o1 == 0 && on_segment(s2.a, s1.a, s1.b)) || (o2 == 0 && on_segment(s2.b, s1.a, s1.b)) ||
      (o3 == 0 && on_segment(s1.a, s2.a, s2.b)) || (o4 == 0 && on_segment(s1.b, s2.a, s2.b))) {
    return SegRelation::EndpointTouch;
  }
  return SegRelation::Disjoint;
}

}  // namespace flatsc
