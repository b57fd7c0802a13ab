#include <algorithm>
#include <fstream>
#include <iterator>
#include <random>

#include "doctest.h"
#include "flatsc/triangulation.hpp"
#include "oracles.hpp"

using namespace flatsc;

namespace {

using IV = std::pair<long, long>;

IV int_hol(const SaddleConnection& sc) {
  const Vec2 h = sc.canonical_hol();
  return {h.x.rational().get_num().get_si(), h.y.rational().get_num().get_si()};
}

std::string torus_id(Catalog& cat, long p, long q) {
  const Vec2 want = Vec2(p, q).canonical();
  for (const SaddleConnection* sc : cat.upto(Scalar(p * p + q * q))) {
    if (sc->canonical_hol() == want) return sc->id;
  }
  FAIL("no connection with holonomy ", p, ",", q);
  return {};
}

std::set<IV> hols(const Triangulation& t) {
  std::set<IV> out;
  for (const SaddleConnection* e : t.edges) out.insert(int_hol(*e));
  return out;
}

// Primitive vectors in (len2, angle) order.
std::vector<IV> ordered_primitive(long bound) {
  const auto all = oracle::primitive_vectors(bound);
  std::vector<IV> v(all.begin(), all.end());
  std::sort(v.begin(), v.end(), [](IV a, IV b) {
    const long la = a.first * a.first + a.second * a.second;
    const long lb = b.first * b.first + b.second * b.second;
    if (la != lb) return la < lb;
    return a.first * b.second - a.second * b.first > 0;
  });
  return v;
}

void check_invariants(const Surface& s, const Triangulation& t) {
  CHECK(static_cast<int>(t.edges.size()) == expected_edges(s));
  CHECK(static_cast<int>(t.faces.size()) == expected_faces(s));
  Scalar area;
  for (const Face& f : t.faces) {
    area += f.area;
    for (int k = 0; k < 3; ++k) {
      CHECK(f.vertex[(k + 1) % 3] - f.vertex[k] == f.kappa[k] * f.half[k]->hol);
    }
  }
  CHECK(area == s.total_area());
  for (std::size_t i = 0; i < t.edges.size(); ++i) {
    for (std::size_t j = i + 1; j < t.edges.size(); ++j) {
      CHECK(intersections(s, *t.edges[i], *t.edges[j]) == 0);
    }
  }
}

}  // namespace

TEST_CASE("torus completion follows the greedy oracle") {
  const Surface s = builtin("square_torus");
  Catalog cat(s);
  const Triangulation t = complete_triangulation(cat);
  check_invariants(s, t);
  const auto greedy = oracle::greedy_torus(ordered_primitive(50));
  CHECK(hols(t) == std::set<IV>(greedy.begin(), greedy.end()));
  CHECK(hols(t) == std::set<IV>{{1, 0}, {0, 1}, {1, 1}});
  for (const Face& f : t.faces) CHECK(f.area == Scalar(mpq_class(1, 2)));
  CHECK(t.faces[0].key() != t.faces[1].key());

  const std::string id12 = torus_id(cat, 1, 2);
  const Triangulation seeded = complete_triangulation(cat, {id12});
  check_invariants(s, seeded);
  std::vector<IV> order{{1, 2}};
  for (IV v : ordered_primitive(50)) order.push_back(v);
  const auto g2 = oracle::greedy_torus(order);
  CHECK(hols(seeded) == std::set<IV>(g2.begin(), g2.end()));
  CHECK(hols(seeded).count({1, 2}) == 1);

  CHECK_THROWS_WITH_AS(complete_triangulation(cat, {id12, torus_id(cat, 1, 0)}), doctest::Contains("meets"),
                       Error);
  CHECK(complete_triangulation(cat).key() == t.key());
}

TEST_CASE("completion on other surfaces") {
  for (const char* name : {"regular_octagon", "L_shape_2x1"}) {
    INFO(name);
    const Surface s = builtin(name);
    Catalog cat(s);
    const Triangulation t = complete_triangulation(cat);
    CHECK(t.edges.size() == 9);
    CHECK(t.faces.size() == 6);
    check_invariants(s, t);
    const int V = s.num_classes();
    CHECK(V - static_cast<int>(t.edges.size()) + static_cast<int>(t.faces.size()) == 2 - 2 * s.info().genus);
  }
  std::ifstream in(std::string(FLATSC_TEST_DATA) + "/pillowcase.json");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const Surface p = parse_surface(text);
  Catalog cat(p);
  const Triangulation t = complete_triangulation(cat);
  CHECK(t.edges.size() == 6);
  CHECK(t.faces.size() == 4);
  check_invariants(p, t);
}

TEST_CASE("flips on the torus") {
  const Surface s = builtin("square_torus");
  Catalog cat(s);
  const Triangulation t = complete_triangulation(cat);
  const Triangulation a = flip(cat, t, torus_id(cat, 1, 1));
  CHECK(hols(a) == std::set<IV>{{1, 0}, {0, 1}, {-1, 1}});
  const Triangulation b = flip(cat, t, torus_id(cat, 1, 0));
  CHECK(hols(b) == std::set<IV>{{0, 1}, {1, 1}, {1, 2}});
  CHECK(flip(cat, b, torus_id(cat, 1, 2)).key() == t.key());
  CHECK_THROWS_AS(flip(cat, t, torus_id(cat, 1, 2)), Error);
  try {
    flip(cat, t, "nope");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownEdge);
  }

  // Farey mediant: flipping a side replaces it by the sum or difference of
  // the other two, whichever is not already present.
  std::mt19937 rng(7);
  Triangulation cur = t;
  for (int step = 0; step < 30; ++step) {
    const auto ids = cur.edge_ids();
    const std::string id = ids[rng() % ids.size()];
    const auto before = hols(cur);
    const Triangulation next = flip(cat, cur, id);
    check_invariants(s, next);
    std::vector<IV> kept;
    IV gone{};
    for (IV v : before) {
      if (int_hol(cat.get(id)) == v) gone = v;
      else kept.push_back(v);
    }
    const auto after = hols(next);
    std::set<IV> expect(kept.begin(), kept.end());
    const IV sum{kept[0].first + kept[1].first, kept[0].second + kept[1].second};
    const IV diff{kept[0].first - kept[1].first, kept[0].second - kept[1].second};
    const IV sc = Vec2(sum.first, sum.second).canonical() == Vec2(gone.first, gone.second) ? diff : sum;
    const Vec2 c = Vec2(sc.first, sc.second).canonical();
    expect.insert({c.x.rational().get_num().get_si(), c.y.rational().get_num().get_si()});
    CHECK(after == expect);
    cur = next;
  }
}

TEST_CASE("flip graph") {
  const Surface s = builtin("square_torus");
  Catalog cat(s);
  const Triangulation t = complete_triangulation(cat);
  CHECK(flip_bfs(cat, t, 0).nodes.size() == 1);
  const FlipGraph g1 = flip_bfs(cat, t, 1);
  CHECK(g1.nodes.size() == 4);
  CHECK(g1.not_flippable.empty());
  for (std::size_t k = 1; k < g1.nodes.size(); ++k) {
    const auto a = g1.nodes[0].edge_ids();
    const auto b = g1.nodes[k].edge_ids();
    std::vector<std::string> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    CHECK(common.size() == 2);
  }
  const FlipGraph g3 = flip_bfs(cat, t, 3);
  // The flip graph of the torus is the trivalent tree: 1 + 3 + 6 + 12.
  CHECK(g3.nodes.size() == 22);
  CHECK(g3.edges.size() == 21);
  for (const Triangulation& n : g3.nodes) CHECK(n.edges.size() == 3);

  const Surface o = builtin("regular_octagon");
  Catalog oc(o);
  const FlipGraph og = flip_bfs(oc, complete_triangulation(oc), 1);
  for (const Triangulation& n : og.nodes) check_invariants(o, n);
  CHECK(og.nodes.size() == 1 + 9 - og.not_flippable.size());
}

TEST_CASE("triangle witnesses") {
  const Surface s = builtin("square_torus");
  Catalog cat(s);
  const std::string x = torus_id(cat, 1, 0), y = torus_id(cat, 0, 1);
  const auto w = bounds_triangle(cat, x, y, torus_id(cat, 1, 1));
  REQUIRE(w.size() == 2);
  CHECK(w[0].face_key != w[1].face_key);
  const auto w2 = bounds_triangle(cat, x, y, torus_id(cat, 1, -1));
  CHECK(w2.size() == 2);
  CHECK_THROWS_AS(bounds_triangle(cat, x, y, torus_id(cat, 1, 2)), Error);
  CHECK_THROWS_AS(bounds_triangle(cat, x, x, y), Error);
  for (const auto& t : w) {
    Vec2 sum;
    for (int k = 0; k < 3; ++k) sum = sum + t.face.kappa[k] * t.face.half[k]->hol;
    CHECK(sum.is_zero());
  }
}
