#include <algorithm>
#include <set>

#include "doctest.h"
#include "flatsc/admissible.hpp"

using namespace flatsc;

namespace {

std::vector<Vec2> pts(std::initializer_list<std::pair<long, long>> l) {
  std::vector<Vec2> out;
  for (auto [x, y] : l) out.emplace_back(x, y);
  return out;
}

bool has_violation(const AdmissibilityReport& r, const std::string& needle) {
  return std::any_of(r.violations.begin(), r.violations.end(),
                     [&](const std::string& v) { return v.find(needle) != std::string::npos; });
}

int flat_vertices(const std::vector<Vec2>& v) {
  const int n = static_cast<int>(v.size());
  int c = 0;
  for (int k = 0; k < n; ++k) c += orient(v[(k + n - 1) % n], v[k], v[(k + 1) % n]) == 0 ? 1 : 0;
  return c;
}

// Every embedded polygon fits in the surface.
void check_polygon(const Surface& s, const AdmissiblePolygon& p) {
  CHECK(p.area() <= s.total_area());
  const auto again = is_admissible(s, p.vertices, p.anchor);
  CHECK(again.admissible);
  for (int i = 0; i < p.size(); ++i) {
    for (int j = i + 1; j < p.size(); ++j) {
      CHECK((p.side_ids[i] == p.side_ids[j] || intersections(s, p.sides[i], p.sides[j]) == 0));
    }
  }
}

const Anchor origin{{0, 0}, 1};

}  // namespace

TEST_CASE("torus polygons") {
  const Surface s = builtin("square_torus");
  const auto square = is_admissible(s, pts({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), origin);
  REQUIRE(square.admissible);
  CHECK(square.polygon->side_ids[0] == square.polygon->side_ids[2]);
  CHECK(square.polygon->side_ids[1] == square.polygon->side_ids[3]);
  CHECK(square.polygon->diagonal_ids.size() == 2);
  CHECK(square.polygon->area() == Scalar(1));

  const auto tall = is_admissible(s, pts({{0, 0}, {1, 0}, {1, 2}, {0, 2}}), origin);
  CHECK_FALSE(tall.admissible);
  CHECK(has_violation(tall, "not embedded"));
  CHECK(has_violation(tall, "marked point"));

  const auto tri = is_admissible(s, pts({{0, 0}, {2, 0}, {0, 2}}), origin);
  CHECK_FALSE(tri.admissible);
  CHECK(has_violation(tri, "marked point at non-vertex point"));

  // Shifted and turned copies of the same triangle.
  const auto t1 = is_admissible(s, pts({{3, 5}, {4, 5}, {4, 6}}), origin);
  const auto t2 = is_admissible(s, pts({{0, 0}, {-1, 0}, {-1, -1}}), {{0, 0}, -1});
  REQUIRE(t1.admissible);
  REQUIRE(t2.admissible);
  CHECK(t1.polygon->side_ids == t2.polygon->side_ids);

  CHECK_THROWS_AS(is_admissible(s, pts({{0, 0}, {1, 0}, {1, 1}}), {{0, 0}, -1}), Error);
  CHECK_THROWS_AS(is_admissible(s, pts({{0, 0}, {1, 1}, {1, 0}}), origin), Error);
  CHECK_THROWS_AS(is_admissible(s, pts({{0, 0}, {2, 0}, {2, 2}, {1, 0}, {0, 2}}), origin), Error);
}

TEST_CASE("strip extension on the torus") {
  const Surface s = builtin("square_torus");
  const auto tri = is_admissible(s, pts({{0, 0}, {1, 0}, {1, 1}}), origin);
  REQUIRE(tri.admissible);
  const AdmissiblePolygon q = extend_strip(s, *tri.polygon, 2);
  CHECK(q.vertices == pts({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  check_polygon(s, q);

  // A slanted flow across the same side finds the same vertex.
  const AdmissiblePolygon q2 = extend_strip(s, *tri.polygon, 2, Vec2(-2, 1));
  CHECK(q2.vertices[3] == Vec2(0, 1));

  try {
    extend_strip(s, q, 0);
    FAIL("expected HypothesisViolated");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::HypothesisViolated);
  }
  CHECK_THROWS_AS(extend_strip(s, *tri.polygon, 2, Vec2(1, -1)), Error);
}

TEST_CASE("torus triangle lies in a simple cylinder") {
  const Surface s = builtin("square_torus");
  Catalog cat(s);
  const Triangulation t = complete_triangulation(cat);
  for (const Face& f : t.faces) {
    TriangleWitness tw{f.side_ids(), f, f.key()};
    const PentagonResult r = pentagon_of_triangle(s, tw);
    CHECK(r.kind == PentagonKind::SimpleCylinderCase);
    CHECK(r.polygon.size() == 4);
    CHECK(r.polygon.area() == Scalar(1));
    check_polygon(s, r.polygon);
  }
}

TEST_CASE("strip extension on the octagon") {
  const Surface s = builtin("regular_octagon");
  Catalog cat(s);
  const Triangulation t = complete_triangulation(cat);
  for (const Face& f : t.faces) {
    int k = 0;
    for (int i = 1; i < 3; ++i) {
      if (f.half[i]->len2 > f.half[k]->len2) k = i;
    }
    const AdmissiblePolygon tri = triangle_polygon(s, f, k);
    check_polygon(s, tri);
    const AdmissiblePolygon q = extend_strip(s, tri, 0);
    CHECK(q.size() == 4);
    check_polygon(s, q);
    for (int i : {0, 2, 3}) CHECK(q.vertices[i] == tri.vertices[i == 0 ? 0 : i - 1]);
    CHECK(q.side_ids[2] == tri.side_ids[1]);
    CHECK(q.side_ids[3] == tri.side_ids[2]);
    CHECK(q.area() > tri.area());
  }
}

TEST_CASE("pentagons of octagon triangles") {
  const Surface s = builtin("regular_octagon");
  Catalog cat(s);
  const Triangulation t = complete_triangulation(cat);
  int pentagons = 0;
  for (const Face& f : t.faces) {
    const PentagonResult r = pentagon_of_triangle(s, {f.side_ids(), f, f.key()});
    check_polygon(s, r.polygon);
    if (r.kind == PentagonKind::Pentagon) {
      ++pentagons;
      CHECK(r.polygon.size() == 5);
      CHECK(strictly_convex(r.polygon.vertices));
    } else {
      CHECK(r.kind == PentagonKind::SimpleCylinderCase);
      CHECK(r.polygon.size() == 4);
      CHECK(strictly_convex(r.polygon.vertices));
    }
  }
  CHECK(pentagons == 2);

  // One flip away some faces sit in the non-simple horizontal cylinder.
  const FlipGraph fg = flip_bfs(cat, t, 1);
  std::set<std::string> seen;
  int non_simple = 0;
  for (const Triangulation& u : fg.nodes) {
    for (const Face& f : u.faces) {
      if (!seen.insert(f.key()).second) continue;
      const PentagonResult r = pentagon_of_triangle(s, {f.side_ids(), f, f.key()});
      if (r.kind != PentagonKind::NonSimpleCylinderCase) continue;
      ++non_simple;
      CHECK(r.polygon.size() == 5);
      CHECK(flat_vertices(r.polygon.vertices) == 1);
      check_polygon(s, r.polygon);
    }
  }
  CHECK(non_simple > 0);
}

TEST_CASE("non-simple cylinder pentagon on the L") {
  const Surface s = builtin("L_shape_2x1");
  Catalog cat(s);
  int non_simple = 0;
  for (const Face& f : complete_triangulation(cat).faces) {
    const PentagonResult r = pentagon_of_triangle(s, {f.side_ids(), f, f.key()});
    check_polygon(s, r.polygon);
    if (r.kind == PentagonKind::NonSimpleCylinderCase) {
      ++non_simple;
      CHECK(flat_vertices(r.polygon.vertices) == 1);
      const Vec2 u = r.polygon.vertices[1] - r.polygon.vertices[0];
      CHECK(u.y.is_zero());
    }
  }
  CHECK(non_simple == 2);
}

TEST_CASE("coconvexify") {
  const Surface torus = builtin("square_torus");
  Catalog tcat(torus);
  const auto square = is_admissible(torus, pts({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), origin);
  CHECK(coconvexify(tcat, *square.polygon, 2).steps.empty());
  const auto tri = is_admissible(torus, pts({{0, 0}, {1, 0}, {1, 1}}), origin);
  CHECK_THROWS_AS(coconvexify(tcat, *tri.polygon, 0), Error);

  // A quadrilateral with a reflex vertex: a slanted strip off an octagon face.
  const Surface s = builtin("regular_octagon");
  Catalog cat(s);
  const Face f = complete_triangulation(cat).faces[0];
  const AdmissiblePolygon base = triangle_polygon(s, f, 1);
  const Vec2 d = base.vertices[1] - base.vertices[0];
  const AdmissiblePolygon q = extend_strip(s, base, 0, Vec2(d.x + 3 * d.y, d.y - 3 * d.x), true);
  check_polygon(s, q);
  int reflex = -1;
  for (int k = 0; k < 4; ++k) {
    if (!strictly_convex_at(q.vertices, k)) {
      CHECK(reflex == -1);
      reflex = k;
    }
  }
  REQUIRE(reflex >= 0);

  const CoconvexResult r = coconvexify(cat, q, reflex);
  REQUIRE(r.steps.size() >= 2);
  CHECK(static_cast<int>(r.steps.size()) - 1 <= r.cap);
  CHECK(r.cap > 0);
  const AdmissiblePolygon& last = r.steps.back();
  CHECK(last.size() == 4);
  CHECK(strictly_convex(last.vertices));
  CHECK(last.vertices[0] == q.vertices[reflex]);
  CHECK(last.vertices[2] == q.vertices[(reflex + 2) % 4]);
  CHECK(last.vertices[3] == q.vertices[(reflex + 3) % 4]);
  std::set<std::string> a3_sides;
  for (std::size_t i = 0; i + 1 < r.steps.size(); ++i) {
    const AdmissiblePolygon& p = r.steps[i];
    check_polygon(s, p);
    CHECK(p.size() == 5);
    CHECK(strictly_convex({p.vertices[0], p.vertices[1], p.vertices[2], p.vertices[3]}));
    CHECK(a3_sides.insert(p.side_ids[2]).second);
  }
  // Squared lengths below T^2, counted independently of the cap.
  long below = 0;
  for (const SaddleConnection* sc : cat.upto(r.T2)) below += sc->len2 < r.T2 ? 1 : 0;
  CHECK(below == r.cap);
}
