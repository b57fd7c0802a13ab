#include <optional>

#include "doctest.h"
#include "flatsc/cylinder.hpp"
#include "flatsc/flow.hpp"
#include "oracles.hpp"

using namespace flatsc;

namespace {

Transversal straight(const Vec2& A, const Vec2& B) {
  return {A, B, {DevelopedPiece{0, Placement{}, A, B}}};
}

// Unfolding oracle on the unit-square torus: the first lattice point met
// by the rays A + u (B - A) + t f, u in [0, 1], t > 0 (integer data).
struct LatticeHit {
  mpq_class t, u;
};

LatticeHit lattice_first_hit(long ax, long ay, long bx, long by, long fx, long fy) {
  const long dx = bx - ax, dy = by - ay;
  const long den = dx * fy - dy * fx;
  std::optional<LatticeHit> best;
  for (long x = -20; x <= 20; ++x) {
    for (long y = -20; y <= 20; ++y) {
      // V - A = u D + t f
      mpq_class u((x - ax) * fy - (y - ay) * fx, den);
      mpq_class t(dx * (y - ay) - dy * (x - ax), den);
      u.canonicalize();
      t.canonicalize();
      if (t <= 0 || u < 0 || u > 1) continue;
      if (!best || t < best->t || (t == best->t && u < best->u)) best = LatticeHit{t, u};
    }
  }
  REQUIRE(best);
  return *best;
}

Surface torus_over(int d) {
  SurfaceData data;
  data.field_d = d;
  data.polygons.push_back({"sq", {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)}});
  data.gluings = {{{0, 0}, {0, 2}, 1}, {{0, 1}, {0, 3}, 1}};
  return Surface(data);
}

}  // namespace

TEST_CASE("trace_ray on the square torus") {
  const Surface s = builtin("square_torus");
  TraceBudget b;
  b.max_len2 = Scalar(9);
  const Trajectory t1 = trace_ray(s, Germ{{0, 0}, Vec2(1, 1)}, b);
  CHECK(t1.terminal == Terminal::HitMarked);
  CHECK(t1.len2 == Scalar(2));
  const Trajectory t2 = trace_ray(s, Germ{{0, 0}, Vec2(2, 1)}, b);
  CHECK(t2.terminal == Terminal::HitMarked);
  CHECK(t2.len2 == Scalar(5));
  CHECK(t2.crossings.size() == 1);
  b.max_len2 = Scalar(mpq_class(1, 4));
  CHECK(trace_ray(s, Germ{{0, 0}, Vec2(1, 0)}, b).terminal == Terminal::BudgetExceeded);

  // Lattice oracle: the first hit is the primitive multiple.
  b.max_len2 = Scalar(1000);
  for (long p = 1; p <= 6; ++p) {
    for (long q = 1; q <= 6; ++q) {
      const long g = std::gcd(p, q);
      const Trajectory t = trace_ray(s, Germ{{0, 0}, Vec2(p, q)}, b);
      CHECK(t.terminal == Terminal::HitMarked);
      CHECK(t.len2 == Scalar((p * p + q * q) / (g * g)));
    }
  }
  CHECK_THROWS_AS(trace_ray(s, Germ{{0, 0}, Vec2(Scalar(1), Scalar(mpq_class(0), mpq_class(1), 2))}, b),
                  Error);
}

TEST_CASE("trace pieces glue up") {
  const Surface s = builtin("regular_octagon");
  TraceBudget b;
  b.max_crossings = 40;
  const Vec2 d(Scalar(3), Scalar(mpq_class(1), mpq_class(1), 2));
  const Trajectory t = trace_ray(s, SurfacePoint{0, Vec2(0, 0)}, d, b);
  for (std::size_t k = 0; k + 1 < t.pieces.size(); ++k) {
    const EdgeRef e = t.crossings[k];
    CHECK(s.transition(e).apply(t.pieces[k + 1].a) == t.pieces[k].b);
  }
}

TEST_CASE("interval first hit") {
  const Surface s = builtin("square_torus");
  const FirstHit h = flow_interval_first_hit(s, straight(Vec2(0, 0), Vec2(0, 1)), Side::Right);
  CHECK(h.t == Scalar(1));
  CHECK(h.foot == Scalar(0));
  CHECK(h.dist2 == Scalar(1));
  CHECK(h.hit_class == 0);

  const FirstHit d = flow_interval_first_hit(s, straight(Vec2(0, 0), Vec2(1, 1)), Side::Right);
  const LatticeHit o = lattice_first_hit(0, 0, 1, 1, 1, -1);
  CHECK(d.t == Scalar(o.t));
  CHECK(d.foot == Scalar(o.u));
  CHECK(d.dist2 == Scalar(mpq_class(1, 2)));

  // Against the oracle for a spread of flow directions from the edge.
  for (long fx = 1; fx <= 4; ++fx) {
    for (long fy = -4; fy <= 4; ++fy) {
      const FirstHit r = flow_interval_first_hit(s, straight(Vec2(0, 0), Vec2(0, 1)), Vec2(fx, fy));
      INFO("f = ", fx, ",", fy);
      const LatticeHit lo = lattice_first_hit(0, 0, 0, 1, fx, fy);
      CHECK(r.t == Scalar(lo.t));
      CHECK(r.foot == Scalar(lo.u));
    }
  }
  CHECK_THROWS_AS(flow_interval_first_hit(s, straight(Vec2(0, 0), Vec2(0, 0)), Side::Left), Error);

  // Subdividing the transversal and taking the minimum changes nothing.
  const Transversal whole = straight(Vec2(0, 0), Vec2(1, 1));
  const Vec2 f(2, -1);
  const FirstHit full = flow_interval_first_hit(s, whole, f);
  const FirstHit lower = flow_interval_first_hit(
      s, {Vec2(0, 0), Vec2(1, 1), {DevelopedPiece{0, {}, Vec2(0, 0), Vec2(mpq_class(1, 3), mpq_class(1, 3))}}}, f);
  const FirstHit upper = flow_interval_first_hit(
      s, {Vec2(0, 0), Vec2(1, 1), {DevelopedPiece{0, {}, Vec2(mpq_class(1, 3), mpq_class(1, 3)), Vec2(1, 1)}}}, f);
  CHECK(full.t == std::min(lower.t, upper.t));

  FirstHitOptions inner;
  inner.interior_feet = true;
  // Only the two endpoint rays of a horizontal flow reach a marked point.
  inner.crossing_budget = 50;
  CHECK_THROWS_AS(flow_interval_first_hit(s, straight(Vec2(0, 0), Vec2(0, 1)), Side::Right, inner), Error);
  const FirstHit in = flow_interval_first_hit(s, straight(Vec2(0, 0), Vec2(0, 1)), Vec2(2, 1), inner);
  CHECK(in.foot == Scalar(mpq_class(1, 2)));
  CHECK(in.t == Scalar(mpq_class(1, 2)));
}

TEST_CASE("cylinder decompositions") {
  const Decomposition t = direction_decomposition(builtin("square_torus"), Vec2(1, 0));
  REQUIRE(t.periodic);
  REQUIRE(t.cylinders.size() == 1);
  CHECK(t.cylinders[0].circumference == Scalar(1));
  CHECK(t.cylinders[0].height == Scalar(1));
  CHECK(t.cylinders[0].simple());
  CHECK(t.connections.size() == 1);
  CHECK(t.cylinders[0].bottom[0].id == t.cylinders[0].top[0].id);

  const Surface o = builtin("regular_octagon");
  const Decomposition od = direction_decomposition(o, Vec2(1, 0));
  REQUIRE(od.periodic);
  CHECK(od.cylinders.size() == 2);
  Scalar area;
  for (const auto& c : od.cylinders) area += c.area();
  CHECK(area == o.total_area());

  const Decomposition l = direction_decomposition(builtin("L_shape_2x1"), Vec2(1, 0));
  REQUIRE(l.periodic);
  REQUIRE(l.cylinders.size() == 2);
  std::multiset<Scalar> circ;
  for (const auto& c : l.cylinders) {
    circ.insert(c.circumference);
    CHECK(c.height == Scalar(1));
  }
  CHECK(circ == std::multiset<Scalar>{Scalar(1), Scalar(2)});

  const Decomposition diag = direction_decomposition(builtin("square_torus"), Vec2(2, 1));
  REQUIRE(diag.periodic);
  REQUIRE(diag.cylinders.size() == 1);
  CHECK(diag.cylinders[0].circumference * Scalar(5) * diag.cylinders[0].height == Scalar(5));

  const Surface t2 = torus_over(2);
  const Decomposition irr =
      direction_decomposition(t2, Vec2(Scalar(1), Scalar(mpq_class(0), mpq_class(1), 2)), 200);
  CHECK_FALSE(irr.periodic);
}
