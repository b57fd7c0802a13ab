#include <fstream>
#include <sstream>

#include "doctest.h"
#include "flatsc/surface.hpp"

using namespace flatsc;

namespace {

std::string read_file(const std::string& name) {
  std::ifstream in(std::string(FLATSC_TEST_DATA) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Independent area: sum of fan triangles |(v_i - v_0) ^ (v_{i+1} - v_0)| / 2.
Scalar fan_area(const Surface& s) {
  Scalar total;
  for (const auto& p : s.polygons()) {
    for (std::size_t i = 1; i + 1 < p.vertices.size(); ++i) {
      total += wedge(p.vertices[i] - p.vertices[0], p.vertices[i + 1] - p.vertices[0]).abs();
    }
  }
  return total / Scalar(2);
}

// Interior angles of a convex n-gon sum to (n - 2) pi, so the cone angles of
// all classes must add up to sum (n_P - 2) pi.
int angle_budget(const Surface& s) {
  int total = 0;
  for (const auto& p : s.polygons()) total += static_cast<int>(p.vertices.size()) - 2;
  return total;
}

int class_angle_sum(const Surface& s) {
  int total = 0;
  for (int k = 0; k < s.num_classes(); ++k) total += s.vclass(k).angle_pi;
  return total;
}

SurfaceData square_data(int sign_bottom_top) {
  SurfaceData d;
  d.polygons.push_back({"sq", {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)}});
  d.gluings = {{{0, 0}, {0, 2}, sign_bottom_top}, {{0, 1}, {0, 3}, 1}};
  return d;
}

}  // namespace

TEST_CASE("square torus") {
  const Surface s = builtin("square_torus");
  const SurfaceInfo info = s.info();
  CHECK(info.genus == 1);
  CHECK(info.num_marked == 1);
  CHECK(info.stratum == std::vector<int>{0});
  CHECK(info.total_area == Scalar(1));
  CHECK(info.is_translation);
  CHECK(class_angle_sum(s) == angle_budget(s));
  const Surface f = parse_surface(read_file("square_torus.json"));
  CHECK(surface_to_json(f) == surface_to_json(s));
}

TEST_CASE("regular octagon") {
  const Surface s = builtin("regular_octagon");
  const SurfaceInfo info = s.info();
  CHECK(info.genus == 2);
  CHECK(info.num_marked == 1);
  CHECK(info.stratum == std::vector<int>{4});
  CHECK(s.vclass(0).angle_pi == 6);
  CHECK(class_angle_sum(s) == angle_budget(s));
  CHECK(info.total_area == Scalar(mpq_class(8), mpq_class(8), 2));
  CHECK(info.total_area == fan_area(s));
  CHECK(info.is_translation);
}

TEST_CASE("L shape") {
  const Surface s = builtin("L_shape_2x1");
  const SurfaceInfo info = s.info();
  CHECK(info.genus == 2);
  CHECK(info.stratum == std::vector<int>{4});
  CHECK(info.total_area == Scalar(3));
  CHECK(class_angle_sum(s) == angle_budget(s));
  CHECK_THROWS_AS(builtin("klein_bottle"), Error);
}

TEST_CASE("pillowcase is not a translation surface") {
  const Surface s = parse_surface(read_file("pillowcase.json"));
  const SurfaceInfo info = s.info();
  CHECK(info.genus == 0);
  CHECK(info.stratum == std::vector<int>{-1, -1, -1, -1});
  CHECK_FALSE(info.is_translation);
  for (int k = 0; k < s.num_classes(); ++k) CHECK(s.vclass(k).loop_sign == -1);
  CHECK(class_angle_sum(s) == angle_budget(s));
}

TEST_CASE("validation errors") {
  auto code_of = [](const SurfaceData& d) {
    try {
      Surface s(d);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Internal;
  };
  CHECK(code_of(square_data(-1)) == ErrorCode::GluingMismatch);

  SurfaceData trap;
  trap.polygons.push_back({"t", {Vec2(0, 0), Vec2(2, 0), Vec2(1, 1), Vec2(0, 1)}});
  trap.gluings = {{{0, 0}, {0, 2}, 1}, {{0, 1}, {0, 3}, 1}};
  CHECK(code_of(trap) == ErrorCode::GluingMismatch);

  SurfaceData reflex = square_data(1);
  reflex.polygons[0].vertices = {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1), Vec2(0, 0)};
  CHECK(code_of(reflex) == ErrorCode::NonConvexPolygon);

  SurfaceData cw = square_data(1);
  std::reverse(cw.polygons[0].vertices.begin(), cw.polygons[0].vertices.end());
  CHECK(code_of(cw) == ErrorCode::NonConvexPolygon);

  SurfaceData two = square_data(1);
  two.polygons.push_back({"b", {Vec2(5, 0), Vec2(6, 0), Vec2(6, 1), Vec2(5, 1)}});
  two.gluings.push_back({{1, 0}, {1, 2}, 1});
  two.gluings.push_back({{1, 1}, {1, 3}, 1});
  CHECK(code_of(two) == ErrorCode::Disconnected);

  SurfaceData open = square_data(1);
  open.gluings.pop_back();
  CHECK(code_of(open) == ErrorCode::GluingMismatch);

  CHECK_THROWS_AS(parse_surface("{\"field_d\":1,\"polygons\":[],\"gluings\":[],\"x\":1}"), Error);
  CHECK_THROWS_AS(parse_surface("not json"), Error);
}

TEST_CASE("corner walk bookkeeping") {
  for (const char* name : {"square_torus", "regular_octagon", "L_shape_2x1"}) {
    const Surface s = builtin(name);
    for (int k = 0; k < s.num_classes(); ++k) {
      const VertexClass& vc = s.vclass(k);
      for (std::size_t i = 0; i < vc.corners.size(); ++i) {
        const Corner c = vc.corners[i];
        auto [ccw, sigma] = s.step(c, Rotation::CCW);
        auto [back, tau] = s.step(ccw, Rotation::CW);
        CHECK(back == c);
        CHECK(sigma * tau == 1);
        // Incoming direction of c is the outgoing direction of its CCW neighbour.
        CHECK(sigma * s.in_dir(c) == s.out_dir(ccw));
      }
    }
  }
}

TEST_CASE("germ rotation on the square torus") {
  const Surface s = builtin("square_torus");
  const Germ g{{0, 0}, Vec2(1, 0)};
  const Germ up = s.rotate_to(g, Vec2(0, 1), Rotation::CCW);
  CHECK(up.dir == Vec2(0, 1));
  CHECK(s.in_sector(up.corner, up.dir));
  const Germ left = s.rotate_to(g, Vec2(-1, 0), Rotation::CCW);
  CHECK(s.in_sector(left.corner, left.dir));
  // A full turn comes back to the same germ.
  const Germ full = s.rotate_to(g, Vec2(1, 0), Rotation::CCW);
  CHECK(full.corner == g.corner);
  const Germ diag = s.rotate_to(g, Vec2(1, 1), Rotation::CW);
  CHECK(diag.corner == Corner{0, 0});
}

TEST_CASE("matrix action on surfaces") {
  const Surface t = builtin("square_torus");
  CHECK(surface_to_json(apply_matrix(t, Mat2::identity())) == surface_to_json(t));
  CHECK(apply_matrix(t, Mat2{1, 1, 0, 1}).total_area() == Scalar(1));
  CHECK(apply_matrix(t, Mat2{2, 0, 0, 1}).total_area() == Scalar(2));
  CHECK_THROWS_AS(apply_matrix(t, Mat2{1, 1, 1, 1}), Error);

  const Surface o = builtin("regular_octagon");
  const Mat2 a{Scalar(mpq_class(1), mpq_class(1), 2), 1, 0, 1};
  const Surface oa = apply_matrix(o, a);
  CHECK(oa.total_area() == a.det().abs() * o.total_area());
  const Surface back = apply_matrix(oa, a.inverse());
  CHECK(surface_to_json(back) == surface_to_json(o));

  for (const char* name : {"regular_octagon", "L_shape_2x1"}) {
    const Surface s = builtin(name);
    const Surface r = apply_matrix(s, Mat2{1, 0, 0, -1});
    CHECK(r.info().stratum == s.info().stratum);
    CHECK(r.total_area() == s.total_area());
    const Surface rr = apply_matrix(r, Mat2{1, 0, 0, -1});
    CHECK(surface_to_json(rr) == surface_to_json(s));
  }
  CHECK_THROWS_AS(apply_matrix(t, Mat2{Scalar(mpq_class(0), mpq_class(1), 3), 0, 0, 1}), Error);
}
