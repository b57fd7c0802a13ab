#include <random>

#include "doctest.h"
#include "flatsc/exact.hpp"

using namespace flatsc;

namespace {

Scalar q2(long a, long b) { return Scalar(mpq_class(a), mpq_class(b), 2); }

// Sign of a + b sqrt(d) for small integers from an integer square root
// bracket: |b| sqrt(d) lies in [r, r + 1) with r = isqrt(b^2 d).
int bracket_sign(long a, long b, long d) {
  auto sgn = [](long v) { return (v > 0) - (v < 0); };
  if (b == 0) return sgn(a);
  const long n = b * b * d;
  long r = 0;
  while ((r + 1) * (r + 1) <= n) ++r;
  const bool exact = r * r == n;
  if (b > 0) return exact ? sgn(a + r) : (a + r >= 0 ? 1 : -1);
  return exact ? sgn(a - r) : (a - r - 1 >= 0 ? 1 : -1);
}

}  // namespace

TEST_CASE("scalar sign examples") {
  CHECK(Scalar().sign() == 0);
  CHECK(q2(1, -1).sign() == -1);
  CHECK(q2(3, -2).sign() == 1);
  CHECK(q2(-3, 2).sign() == -1);
  CHECK(q2(0, 5).sign() == 1);
}

TEST_CASE("scalar sign agrees with the norm oracle") {
  // s * conj(s) = a^2 - d b^2 is rational; its sign is the product of signs.
  std::mt19937 rng(7);
  std::uniform_int_distribution<long> dist(-40, 40);
  for (int d : {2, 3, 5, 7}) {
    for (int i = 0; i < 500; ++i) {
      const long a = dist(rng), b = dist(rng);
      const Scalar s(mpq_class(a), mpq_class(b), d);
      const long norm = a * a - d * b * b;
      CHECK(s.sign() * s.conjugate().sign() == (norm > 0) - (norm < 0));
      CHECK(s.sign() == bracket_sign(a, b, d));
    }
  }
}

TEST_CASE("field arithmetic round trips") {
  const Scalar r = q2(0, 1);
  CHECK(r * r == Scalar(2));
  const Scalar x = q2(3, -2);
  CHECK(x * x.inverse() == Scalar(1));
  CHECK((x / q2(1, 1)) * q2(1, 1) == x);
  CHECK(Scalar::parse(x.str(), 2) == x);
  CHECK(Scalar::parse("-7/3", 2) == Scalar(mpq_class(-7, 3)));
  CHECK(x.str() == "3/1+-2/1r");
  CHECK_THROWS_AS(Scalar::parse("1/0", 1), Error);
  CHECK_THROWS_AS(q2(0, 1) + Scalar(mpq_class(0), mpq_class(1), 3), Error);
  // Rational operands mix freely with any field.
  CHECK(Scalar(mpq_class(1), mpq_class(1), 3) + Scalar(1) == Scalar(mpq_class(2), mpq_class(1), 3));
  CHECK(q2(1, -1) < Scalar(0));
  CHECK(q2(0, 1) > Scalar(mpq_class(141, 100)));
  CHECK(q2(0, 1) < Scalar(mpq_class(142, 100)));
}

TEST_CASE("orient examples and antisymmetry") {
  const Vec2 o(0, 0), e1(1, 0), e2(0, 1);
  CHECK(orient(o, e1, e2) == 1);
  CHECK(orient(o, Vec2(1, 1), Vec2(2, 2)) == 0);
  CHECK(orient(o, e1, Vec2(Scalar(1), -q2(0, 1))) == -1);
  std::mt19937 rng(3);
  std::uniform_int_distribution<long> dist(-5, 5);
  auto rv = [&]() { return Vec2(q2(dist(rng), dist(rng)), q2(dist(rng), dist(rng))); };
  for (int i = 0; i < 200; ++i) {
    const Vec2 p = rv(), q = rv(), r = rv();
    const int s = orient(p, q, r);
    CHECK(orient(q, p, r) == -s);
    CHECK(orient(p, r, q) == -s);
    CHECK(orient(r, q, p) == -s);
  }
}

TEST_CASE("seg_relation examples and symmetry") {
  auto rel = [](Vec2 a, Vec2 b, Vec2 c, Vec2 d) { return seg_relation({a, b}, {c, d}); };
  CHECK(rel(Vec2(0, 0), Vec2(1, 0), Vec2(0, 1), Vec2(1, 1)) == SegRelation::Disjoint);
  CHECK(rel(Vec2(0, 0), Vec2(1, 1), Vec2(1, 0), Vec2(0, 1)) == SegRelation::InteriorCross);
  CHECK(rel(Vec2(0, 0), Vec2(1, 0), Vec2(1, 0), Vec2(1, 1)) == SegRelation::EndpointTouch);
  CHECK(rel(Vec2(0, 0), Vec2(2, 0), Vec2(1, 0), Vec2(3, 0)) == SegRelation::CollinearOverlap);
  CHECK(rel(Vec2(0, 0), Vec2(1, 0), Vec2(1, 0), Vec2(3, 0)) == SegRelation::EndpointTouch);
  CHECK(rel(Vec2(0, 0), Vec2(1, 0), Vec2(2, 0), Vec2(3, 0)) == SegRelation::Disjoint);
  CHECK(rel(Vec2(0, 0), Vec2(2, 0), Vec2(1, 0), Vec2(1, 5)) == SegRelation::EndpointTouch);
  std::mt19937 rng(11);
  std::uniform_int_distribution<long> dist(-3, 3);
  auto rv = [&]() { return Vec2(dist(rng), dist(rng)); };
  for (int i = 0; i < 2000; ++i) {
    const Vec2 a = rv(), b = rv(), c = rv(), d = rv();
    if (a == b || c == d) continue;
    const SegRelation r = rel(a, b, c, d);
    CHECK(r == rel(c, d, a, b));
    CHECK(r == rel(b, a, d, c));
  }
}

TEST_CASE("matrix action") {
  const Mat2 shear{1, 1, 0, 1};
  CHECK(mat_apply(shear, Vec2(0, 1)) == Vec2(1, 1));
  CHECK(mat_apply(Mat2{2, 0, 0, 1}, Vec2(1, 1)) == Vec2(2, 1));
  CHECK(mat_inverse(Mat2{0, -1, 1, 0}) == Mat2{0, 1, -1, 0});
  const Mat2 m{q2(1, 1), 1, 1, q2(1, -1)};
  CHECK(m * mat_inverse(m) == Mat2::identity());
  CHECK_THROWS_AS(mat_inverse(Mat2{1, 2, 2, 4}), Error);
  CHECK(Mat2::parse(m.str(), 2) == m);
  CHECK(Mat2::parse("1,1;0,1", 1) == shear);
  // wedge equivariance: (Av)^(Aw) = det A * v^w
  const Vec2 v(q2(1, 2), Scalar(3)), w(Scalar(-1), q2(0, 1));
  CHECK(wedge(m.apply(v), m.apply(w)) == m.det() * wedge(v, w));
}
