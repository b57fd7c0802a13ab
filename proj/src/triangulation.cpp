#include "flatsc/triangulation.hpp"

#include "flatsc/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace flatsc {

namespace {

using GermKey = std::pair<Corner, Vec2>;

GermKey key_of(const Germ& g) { return {g.corner, direction_key(g.dir)}; }

bool sc_less(const SaddleConnection* a, const SaddleConnection* b) { return canonical_less(*a, *b); }

// Germs of the chosen half-edges around every marked point in
// counterclockwise order, with the frame sign of each relative to the first
// corner of the class walk.
struct Rotations {
  struct Slot {
    const SaddleConnection* half;
    int cls;
    int pos;
    int frame;
  };
  std::vector<std::vector<Slot>> around;
  std::map<GermKey, std::pair<int, int>> where;

  Rotations(const Surface& s, const std::vector<const SaddleConnection*>& halves) {
    around.resize(s.num_classes());
    for (const SaddleConnection* h : halves) {
      const int cls = s.vertex_class(h->start.corner);
      const int wi = s.walk_index(h->start.corner);
      around[cls].push_back({h, cls, wi, s.vclass(cls).frame_sign[wi]});
    }
    for (auto& list : around) {
      std::sort(list.begin(), list.end(), [](const Slot& a, const Slot& b) {
        if (a.pos != b.pos) return a.pos < b.pos;
        return wedge(a.half->start.dir, b.half->start.dir).sign() > 0;
      });
      for (std::size_t k = 0; k < list.size(); ++k) {
        where[key_of(list[k].half->start)] = {list[k].cls, static_cast<int>(k)};
      }
    }
  }

  // Clockwise neighbour of germ g and the sign s with
  // (vector in the neighbour's frame) = s * (vector in g's frame).
  std::pair<const SaddleConnection*, int> clockwise_of(const Surface& s, const Germ& g) const {
    const auto it = where.find(key_of(g));
    if (it == where.end()) throw Error(ErrorCode::Internal, "germ is not an edge end");
    const auto [cls, k] = it->second;
    const auto& list = around[cls];
    const int j = k == 0 ? static_cast<int>(list.size()) - 1 : k - 1;
    int sign = list[k].frame * list[j].frame;
    if (k == 0) sign *= s.vclass(cls).loop_sign;
    return {list[j].half, sign};
  }
};

}  // namespace

std::array<std::string, 3> Face::side_ids() const {
  std::array<std::string, 3> ids{half[0]->id, half[1]->id, half[2]->id};
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::string Face::key() const {
  // Sides tagged with their start germs, least rotation.
  std::array<std::string, 3> parts;
  for (int k = 0; k < 3; ++k) {
    const Germ& g = half[k]->start;
    parts[k] = half[k]->id + "@" + std::to_string(g.corner.poly) + "." +
               std::to_string(g.corner.idx) + ":" + direction_key(g.dir).str();
  }
  std::string best;
  for (int r = 0; r < 3; ++r) {
    std::string s = parts[r] + " " + parts[(r + 1) % 3] + " " + parts[(r + 2) % 3];
    if (r == 0 || s < best) best = s;
  }
  return best;
}

std::vector<std::string> Triangulation::edge_ids() const {
  std::vector<std::string> ids;
  for (const SaddleConnection* e : edges) ids.push_back(e->id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::string Triangulation::key() const {
  std::string out;
  for (const std::string& id : edge_ids()) out += (out.empty() ? "" : ";") + id;
  return out;
}

int expected_edges(const Surface& s) {
  const SurfaceInfo in = s.info();
  return 6 * in.genus - 6 + 3 * in.num_marked;
}

int expected_faces(const Surface& s) {
  const SurfaceInfo in = s.info();
  return 4 * in.genus - 4 + 2 * in.num_marked;
}

Triangulation triangulation_from_edges(Catalog& cat, std::vector<const SaddleConnection*> edges) {
  const Surface& s = cat.surface();
  std::sort(edges.begin(), edges.end(), sc_less);
  Triangulation t;
  t.edges = edges;
  if (static_cast<int>(edges.size()) != expected_edges(s)) {
    throw Error(ErrorCode::Internal, "edge count is not 6g-6+3p");
  }
  std::vector<const SaddleConnection*> halves;
  for (const SaddleConnection* e : edges) {
    halves.push_back(e);
    halves.push_back(&cat.reverse_of(*e));
  }
  const Rotations rot(s, halves);
  std::set<GermKey> seen;
  for (const SaddleConnection* h0 : halves) {
    if (seen.count(key_of(h0->start))) continue;
    Face f;
    const SaddleConnection* h = h0;
    int kappa = 1;
    Vec2 p = h0->origin();
    for (int k = 0; k < 3; ++k) {
      if (k > 0 && h == h0) throw Error(ErrorCode::Internal, "face is not a triangle");
      seen.insert(key_of(h->start));
      f.half[k] = h;
      f.vertex[k] = p;
      f.kappa[k] = kappa;
      p = p + kappa * h->hol;
      const auto [next, rho] = rot.clockwise_of(s, h->end);
      const int tau = dot(h->end.dir, h->hol).sign() < 0 ? 1 : -1;
      kappa = kappa * tau * rho;
      h = next;
    }
    if (h != h0 || !(p == f.vertex[0]) || kappa != f.kappa[0]) {
      throw Error(ErrorCode::Internal, "face does not close up");
    }
    f.area = wedge(f.vertex[1] - f.vertex[0], f.vertex[2] - f.vertex[0]) / Scalar(2);
    if (f.area.sign() <= 0) throw Error(ErrorCode::Internal, "face is not positively oriented");
    t.faces.push_back(f);
  }
  std::sort(t.faces.begin(), t.faces.end(),
            [](const Face& a, const Face& b) { return a.key() < b.key(); });
  if (static_cast<int>(t.faces.size()) != expected_faces(s)) {
    throw Error(ErrorCode::Internal, "face count is not 4g-4+2p");
  }
  Scalar area;
  for (const Face& f : t.faces) area += f.area;
  if (area != s.total_area()) throw Error(ErrorCode::Internal, "faces do not tile the surface");
  const int V = s.num_classes();
  const int E = static_cast<int>(t.edges.size());
  const int F = static_cast<int>(t.faces.size());
  if (V - E + F != 2 - 2 * s.info().genus) throw Error(ErrorCode::Internal, "Euler characteristic");
  return t;
}

Triangulation complete_triangulation(Catalog& cat, const std::vector<std::string>& seed) {
  const Surface& s = cat.surface();
  std::vector<const SaddleConnection*> chosen;
  std::set<std::string> ids;
  Scalar L2 = s.total_area();
  for (const std::string& id : seed) {
    const SaddleConnection* sc = &resolve_id(cat, id);
    if (!ids.insert(id).second) continue;
    for (const SaddleConnection* other : chosen) {
      if (!disjoint(s, *sc, *other)) {
        throw Error(ErrorCode::SeedNotDisjoint, id + " meets " + other->id);
      }
    }
    chosen.push_back(sc);
  }
  const int target = expected_edges(s);
  for (int round = 0; static_cast<int>(chosen.size()) < target; ++round) {
    if (round > 60) throw Error(ErrorCode::Internal, "greedy completion did not terminate");
    for (const SaddleConnection* sc : cat.upto(L2)) {
      if (static_cast<int>(chosen.size()) == target) break;
      if (ids.count(sc->id)) continue;
      bool ok = true;
      for (const SaddleConnection* other : chosen) {
        if (!disjoint(s, *sc, *other)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      chosen.push_back(sc);
      ids.insert(sc->id);
    }
    L2 = L2 * Scalar(2);
  }
  return triangulation_from_edges(cat, chosen);
}

Triangulation flip(Catalog& cat, const Triangulation& t, const std::string& edge_id) {
  const Surface& s = cat.surface();
  const auto eit = std::find_if(t.edges.begin(), t.edges.end(),
                                [&](const SaddleConnection* e) { return e->id == edge_id; });
  if (eit == t.edges.end()) throw Error(ErrorCode::UnknownEdge, "not an edge: " + edge_id);
  const SaddleConnection* h = *eit;
  const SaddleConnection* r = &cat.reverse_of(*h);
  int f1 = -1, k1 = -1, f2 = -1, k2 = -1;
  for (int i = 0; i < static_cast<int>(t.faces.size()); ++i) {
    for (int k = 0; k < 3; ++k) {
      if (t.faces[i].half[k] == h) f1 = i, k1 = k;
      if (t.faces[i].half[k] == r) f2 = i, k2 = k;
    }
  }
  if (f1 < 0 || f2 < 0) throw Error(ErrorCode::Internal, "edge without faces");
  if (f1 == f2) throw Error(ErrorCode::NotFlippable, edge_id + " borders a single face");
  const Face& F1 = t.faces[f1];
  const Face& F2 = t.faces[f2];
  // Develop both faces in the start frame of h, with A at the origin.
  const Vec2 A(0, 0);
  const Vec2 B = h->hol;
  const Vec2 C = F1.kappa[k1] * (F1.vertex[(k1 + 2) % 3] - F1.vertex[k1]);
  const Vec2 rh = F2.kappa[k2] * r->hol;
  int mu = 1;
  if (rh == -h->hol) mu = 1;
  else if (rh == h->hol) mu = -1;
  else throw Error(ErrorCode::Internal, "faces disagree along the flipped edge");
  const Vec2 D = B + mu * (F2.vertex[(k2 + 2) % 3] - F2.vertex[k2]);
  if (orient(A, D, B) <= 0 || orient(D, B, C) <= 0 || orient(B, C, A) <= 0 ||
      orient(C, A, D) <= 0) {
    throw Error(ErrorCode::NotFlippable, edge_id + " is not the diagonal of a strictly convex quadrilateral");
  }
  // Leave D along the side D -> B, then turn toward C.
  const SaddleConnection* hd = F2.half[(k2 + 2) % 3];
  const Vec2 db = B - D;
  int nu = 1;
  if (hd->hol == db) nu = 1;
  else if (hd->hol == -db) nu = -1;
  else throw Error(ErrorCode::Internal, "quadrilateral side mismatch");
  const Vec2 dc = C - D;
  const Germ g = s.rotate_to(hd->start, nu * dc, Rotation::CCW);
  TraceBudget budget;
  budget.max_len2 = dc.norm2();
  const Trajectory tr = trace_ray(s, g, budget);
  if (tr.terminal != Terminal::HitMarked || tr.len2 != dc.norm2()) {
    throw Error(ErrorCode::Internal, "new diagonal is not a saddle connection");
  }
  const SaddleConnection& diag = cat.add(connection_from_trace(s, g, tr));
  std::vector<const SaddleConnection*> edges;
  for (const SaddleConnection* e : t.edges) {
    if (e != h) edges.push_back(e);
  }
  edges.push_back(&diag);
  return triangulation_from_edges(cat, edges);
}

FlipGraph flip_bfs(Catalog& cat, const Triangulation& t0, int depth) {
  if (depth < 0) throw Error(ErrorCode::PreconditionViolated, "negative depth");
  FlipGraph g;
  std::map<std::string, int> index;
  g.nodes.push_back(t0);
  g.depth.push_back(0);
  index[t0.key()] = 0;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    if (g.depth[u] >= depth) continue;
    for (const std::string& id : g.nodes[u].edge_ids()) {
      Triangulation next;
      try {
        next = flip(cat, g.nodes[u], id);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NotFlippable) throw;
        g.not_flippable.emplace_back(u, id);
        continue;
      }
      const std::string k = next.key();
      auto it = index.find(k);
      int v;
      if (it == index.end()) {
        v = static_cast<int>(g.nodes.size());
        index[k] = v;
        g.nodes.push_back(std::move(next));
        g.depth.push_back(g.depth[u] + 1);
        queue.push_back(v);
      } else {
        v = it->second;
      }
      if (u < v || g.depth[v] > g.depth[u]) g.edges.emplace_back(u, v, id);
    }
  }
  return g;
}

std::vector<TriangleWitness> bounds_triangle(Catalog& cat, const std::string& a,
                                             const std::string& b, const std::string& c) {
  const Surface& s = cat.surface();
  const std::array<const SaddleConnection*, 3> sc{&resolve_id(cat, a), &resolve_id(cat, b),
                                                   &resolve_id(cat, c)};
  if (a == b || b == c || a == c) {
    throw Error(ErrorCode::NotPairwiseDisjoint, "sides are not distinct");
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      if (!disjoint(s, *sc[i], *sc[j])) {
        throw Error(ErrorCode::NotPairwiseDisjoint, sc[i]->id + " meets " + sc[j]->id);
      }
    }
  }
  std::vector<TriangleWitness> out;
  bool balanced = false;
  for (int e1 : {1, -1}) {
    for (int e2 : {1, -1}) {
      balanced = balanced || (sc[0]->hol + e1 * sc[1]->hol + e2 * sc[2]->hol).is_zero();
    }
  }
  // Holonomy frames differ between sides, so this is only a filter on
  // translation surfaces.
  if (!balanced && s.info().is_translation) return out;
  std::array<std::string, 3> want{a, b, c};
  std::sort(want.begin(), want.end());
  const Triangulation t = complete_triangulation(cat, {a, b, c});
  for (const Face& f : t.faces) {
    if (f.side_ids() == want) out.push_back({want, f, f.key()});
  }
  return out;
}

}  // namespace flatsc
