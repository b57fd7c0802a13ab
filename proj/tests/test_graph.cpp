#include <chrono>
#include <cstdlib>

#include "doctest.h"
#include "flatsc/graph.hpp"
#include "oracles.hpp"

using namespace flatsc;

namespace {

using IV = std::pair<long, long>;

IV int_hol(const SaddleConnection& sc) {
  const Vec2 h = sc.canonical_hol();
  return {h.x.rational().get_num().get_si(), h.y.rational().get_num().get_si()};
}

std::string torus_id(const SCGraph& g, long p, long q) {
  const Vec2 want = Vec2(p, q).canonical();
  for (const SaddleConnection* sc : g.conns) {
    if (sc->canonical_hol() == want) return sc->id;
  }
  FAIL("missing ", p, ",", q);
  return {};
}

}  // namespace

TEST_CASE("torus graph adjacency is the determinant law") {
  const Surface s = builtin("square_torus");
  Catalog cat(s);
  const SCGraph g2 = build_graph(cat, Scalar(2));
  CHECK(g2.num_vertices() == 4);
  CHECK(g2.num_edges() == 5);
  CHECK(build_graph(cat, Scalar(1)).num_edges() == 1);
  CHECK(build_graph(cat, Scalar(mpq_class(1, 2))).num_vertices() == 0);

  const SCGraph g = build_graph(cat, Scalar(25));
  for (int i = 0; i < g.num_vertices(); ++i) {
    for (int j = i + 1; j < g.num_vertices(); ++j) {
      const auto [p1, q1] = int_hol(*g.conns[i]);
      const auto [p2, q2] = int_hol(*g.conns[j]);
      const long det = std::labs(p1 * q2 - p2 * q1);
      CHECK(g.adjacent(i, j) == (det == 1));
      CHECK(intersections(s, *g.conns[i], *g.conns[j]) == oracle::torus_crossings_scan(p1, q1, p2, q2));
    }
  }
  // Induced subgraph property.
  const SCGraph small = build_graph(cat, Scalar(10));
  for (int i = 0; i < small.num_vertices(); ++i) {
    for (int j = 0; j < small.num_vertices(); ++j) {
      if (i == j) continue;
      CHECK(small.adjacent(i, j) == g.adjacent(g.index_of(small.ids[i]), g.index_of(small.ids[j])));
    }
  }
}

TEST_CASE("distances") {
  const Surface s = builtin("square_torus");
  Catalog cat(s);
  const SCGraph g = build_graph(cat, Scalar(5));
  CHECK(distance(g, torus_id(g, 1, 0), torus_id(g, 0, 1)) == 1);
  CHECK(distance(g, torus_id(g, 1, 0), torus_id(g, 1, 2)) == 2);
  CHECK(distance(g, torus_id(g, 1, 0), torus_id(g, 1, 0)) == 0);
  try {
    distance(g, "nope", torus_id(g, 1, 0));
    FAIL("expected UnknownVertex");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownVertex);
  }
}

TEST_CASE("triangles") {
  const Surface s = builtin("square_torus");
  Catalog cat(s);
  const SCGraph g = build_graph(cat, Scalar(2));
  const TriangleScan t = triangles(cat, g, 100);
  CHECK(t.complete);
  CHECK(t.witnesses.size() == 4);
  std::set<std::string> keys;
  for (const auto& w : t.witnesses) keys.insert(w.face_key);
  CHECK(keys.size() == 4);
  const TriangleScan capped = triangles(cat, g, 3);
  CHECK(capped.witnesses.size() == 3);
  CHECK_FALSE(capped.complete);
  CHECK(triangles(cat, build_graph(cat, Scalar(mpq_class(1, 2))), 10).witnesses.empty());
}

TEST_CASE("export") {
  const Surface s = builtin("square_torus");
  Catalog cat(s);
  const SCGraph g1 = build_graph(cat, Scalar(1));
  const std::string dot = export_graph(g1, "dot");
  CHECK(dot.find(" -- ") != std::string::npos);
  CHECK(dot.find(" -- ") == dot.rfind(" -- "));

  const SCGraph g = build_graph(cat, Scalar(10));
  const SCGraph back = import_graph(export_graph(g, "jsonl"), "jsonl");
  CHECK(back.ids == g.ids);
  CHECK(back.edge_list() == g.edge_list());
  CHECK(back.L2 == g.L2);
  CHECK(export_graph(back, "jsonl") != "");

  const SCGraph empty = build_graph(cat, Scalar(mpq_class(1, 4)));
  CHECK(export_graph(empty, "dot") == "graph sc {\n}\n");
  CHECK(import_graph(export_graph(empty, "jsonl"), "jsonl").num_vertices() == 0);
  CHECK_THROWS_AS(export_graph(g, "svg"), Error);
}

TEST_CASE("torus truncation at len2 233") {
  const auto t0 = std::chrono::steady_clock::now();
  const Surface s = builtin("square_torus");
  Catalog cat(s);
  const SCGraph g = build_graph(cat, Scalar(233));
  MESSAGE("vertices ", g.num_vertices(), " edges ", g.num_edges(), " in ",
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), " s");
  const std::string a = torus_id(g, 1, 0);
  CHECK(distance(g, a, torus_id(g, 8, 13)) >= 3);
}
