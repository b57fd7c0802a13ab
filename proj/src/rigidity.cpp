#include "flatsc/rigidity.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

namespace flatsc {

namespace {

std::vector<Vec2> plane_polygon(const Surface& s, int poly, const Mat2& A, bool flip) {
  const int n = s.num_vertices(poly);
  std::vector<Vec2> out;
  for (int j = 0; j < n; ++j) out.push_back(A.apply(s.vertex(poly, flip ? (n - j) % n : j)));
  return out;
}

// Side of the plane polygon carrying edge i of the source polygon.
int plane_side(int n, int i, bool flip) { return flip ? n - i - 1 : i; }

std::optional<AdmissiblePolygon> try_develop(const Surface& dst, const std::vector<Vec2>& v, const Anchor& a,
                                             int at) {
  try {
    auto rep = is_admissible_at(dst, v, a, at);
    if (!rep.admissible) return std::nullopt;
    return std::move(*rep.polygon);
  } catch (const Error&) {
    return std::nullopt;
  }
}

void check_matrix(const Surface& s, const Mat2& A) {
  if (A.det().is_zero()) throw Error(ErrorCode::SingularMatrix, "matrix " + A.str() + " is singular");
  const int f = A.field();
  if (f != 1 && f != s.field()) throw Error(ErrorCode::FieldMismatch, "matrix entries lie outside the surface field");
}

Mat2 from_columns(const Vec2& c0, const Vec2& c1) { return {c0.x, c1.x, c0.y, c1.y}; }

}  // namespace

int AffineMap::plane_index(int poly, int idx) const {
  const int n = src_->num_vertices(poly);
  return flip_ ? (n - idx) % n : idx;
}

std::pair<Germ, int> AffineMap::image(const Germ& g) const {
  const AdmissiblePolygon& q = images_[g.corner.poly];
  const auto hit = germ_at_vertex(*dst_, q, q.vertices[plane_index(g.corner.poly, g.corner.idx)], A_.apply(g.dir));
  if (!hit) throw Error(ErrorCode::Internal, "germ has no image");
  return *hit;
}

SaddleConnection AffineMap::image(const SaddleConnection& sc) const {
  const auto [h, sign] = image(sc.start);
  const Scalar len2 = A_.apply(sc.hol).norm2();
  TraceBudget budget;
  budget.max_len2 = len2;
  const Trajectory tr = trace_ray(*dst_, h, budget);
  if (tr.terminal != Terminal::HitMarked || tr.len2 != len2) {
    throw Error(ErrorCode::Internal, "image of " + sc.id + " is not a saddle connection");
  }
  return connection_from_trace(*dst_, h, tr);
}

std::vector<Anchor> AffineMap::polygon_anchors() const {
  std::vector<Anchor> out;
  for (const AdmissiblePolygon& q : images_) out.push_back(q.anchor);
  return out;
}

std::optional<AffineMap> develop_affine(const Surface& src, const Surface& dst, const Mat2& A,
                                        const Anchor& anchor) {
  AffineMap m;
  m.src_ = &src;
  m.dst_ = &dst;
  m.A_ = A;
  m.flip_ = A.det().sign() < 0;
  if (src.total_area() * A.det().abs() != dst.total_area()) return std::nullopt;
  const int np = src.num_polygons();
  std::vector<std::optional<AdmissiblePolygon>> images(np);
  images[0] = try_develop(dst, plane_polygon(src, 0, A, m.flip_), anchor, 0);
  if (!images[0]) return std::nullopt;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int p = queue.front();
    queue.pop_front();
    const AdmissiblePolygon& q = *images[p];
    const int n = src.num_vertices(p);
    for (int i = 0; i < n; ++i) {
      const EdgeRef e{p, i};
      const EdgeRef pe = src.partner(e);
      const int k = plane_side(n, i, m.flip_);
      const int kp = plane_side(src.num_vertices(pe.poly), pe.edge, m.flip_);
      const Vec2 end = q.vertices[(k + 1) % n];
      const auto hit = germ_at_vertex(dst, q, end, q.vertices[k] - end);
      if (!hit) return std::nullopt;
      const Anchor there{hit->first.corner, src.transition(e).sign * hit->second};
      if (!images[pe.poly]) {
        images[pe.poly] = try_develop(dst, plane_polygon(src, pe.poly, A, m.flip_), there, kp);
        if (!images[pe.poly]) return std::nullopt;
        queue.push_back(pe.poly);
      }
      const AdmissiblePolygon& r = *images[pe.poly];
      const Anchor& known = r.side_anchor[kp];
      if (!(known.corner == there.corner) || known.sign != there.sign || r.side_ids[kp] != q.side_ids[k]) {
        return std::nullopt;
      }
    }
  }
  for (auto& q : images) {
    if (!q) return std::nullopt;
    m.images_.push_back(std::move(*q));
  }
  return m;
}

AffineMap transport_map(const Surface& s, const Surface& image, const Mat2& A) {
  auto m = develop_affine(s, image, A, {{0, 0}, 1});
  if (!m) throw Error(ErrorCode::Internal, "image surface does not match the transported polygons");
  return std::move(*m);
}

std::vector<AffineMap> affine_automorphisms(const Surface& s, const Mat2& A) {
  check_matrix(s, A);
  const std::vector<Vec2> q0 = plane_polygon(s, 0, A, A.det().sign() < 0);
  const Vec2 d = q0[1] - q0[0];
  std::vector<AffineMap> out;
  for (int p = 0; p < s.num_polygons(); ++p) {
    for (int i = 0; i < s.num_vertices(p); ++i) {
      for (int sign : {1, -1}) {
        if (!s.in_sector({p, i}, sign * d)) continue;
        if (auto m = develop_affine(s, s, A, {{p, i}, sign})) out.push_back(std::move(*m));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string GraphIso::image_of(const std::string& id) const {
  const int i = source.graph.index_of(id);
  if (i < 0) throw Error(ErrorCode::UnknownVertex, "no vertex " + id + " in the source truncation");
  if (map[i] < 0) throw Error(ErrorCode::UnknownVertex, id + " has no image");
  return target.graph.ids[map[i]];
}

void validate(GraphIso& iso) {
  iso.problems.clear();
  const SCGraph& a = iso.source.graph;
  const SCGraph& b = iso.target.graph;
  std::set<std::string> used;
  for (int i = 0; i < a.num_vertices(); ++i) {
    if (iso.map[i] < 0) {
      iso.problems.push_back(a.ids[i] + " has no image");
    } else if (!used.insert(b.ids[iso.map[i]]).second) {
      iso.problems.push_back("two vertices map to " + b.ids[iso.map[i]]);
    }
  }
  if (iso.problems.empty()) {
    long bad = 0;
    for (int i = 0; i < a.num_vertices(); ++i) {
      for (int j = i + 1; j < a.num_vertices(); ++j) {
        if (a.adjacent(i, j) == b.adjacent(iso.map[i], iso.map[j])) continue;
        if (++bad <= 20) {
          iso.problems.push_back(std::string(a.adjacent(i, j) ? "edge " : "non-edge ") + a.ids[i] + " -- " +
                                 a.ids[j] + " not preserved");
        }
      }
    }
    if (bad > 20) iso.problems.push_back(std::to_string(bad - 20) + " more adjacency mismatches");
  }
  iso.valid = iso.problems.empty();
}

namespace {

void map_by_images(GraphIso& iso, const AffineMap& f) {
  std::vector<std::string> ids;
  Scalar top;
  for (const SaddleConnection* sc : iso.source.graph.conns) {
    const SaddleConnection& img = iso.target.catalog->add(f.image(*sc));
    ids.push_back(img.id);
    if (top < img.len2) top = img.len2;
  }
  iso.target.graph = build_graph(*iso.target.catalog, top.sign() > 0 ? top : Scalar(1));
  for (const std::string& id : ids) iso.map.push_back(iso.target.graph.index_of(id));
  iso.provenance = "affine";
  iso.matrix = f.matrix();
  validate(iso);
}

}  // namespace

GraphIso induced_vertex_map(const Surface& s, const Mat2& A, const Scalar& L2) {
  check_matrix(s, A);
  auto src = std::make_shared<const Surface>(s);
  auto scat = std::make_shared<Catalog>(*src);
  auto dst = std::make_shared<const Surface>(apply_matrix(s, A));
  auto dcat = std::make_shared<Catalog>(*dst);
  GraphIso iso;
  iso.source = {src, scat, build_graph(*scat, L2)};
  iso.target = {dst, dcat, {}};
  map_by_images(iso, transport_map(*src, *dst, A));
  return iso;
}

GraphIso automorphism_iso(const std::shared_ptr<const Surface>& s, const std::shared_ptr<Catalog>& cat,
                          const AffineMap& f, const Scalar& L2) {
  GraphIso iso;
  iso.source = {s, cat, build_graph(*cat, L2)};
  iso.target = {s, cat, {}};
  map_by_images(iso, f);
  return iso;
}

GraphIso iso_from_map(const std::shared_ptr<const Surface>& s,
                      const std::vector<std::pair<std::string, std::string>>& pairs) {
  auto cat = std::make_shared<Catalog>(*s);
  std::vector<std::string> from, to;
  for (const auto& [a, b] : pairs) {
    from.push_back(a);
    to.push_back(b);
  }
  GraphIso iso;
  iso.source = {s, cat, induced_graph(*cat, from)};
  iso.target = {s, cat, induced_graph(*cat, to)};
  iso.map.resize(to.size());
  std::iota(iso.map.begin(), iso.map.end(), 0);
  iso.provenance = "user";
  validate(iso);
  return iso;
}

TriangleReport check_triangle_preserving(GraphIso& iso, int budget) {
  TriangleReport rep;
  const TriangleScan scan = triangles(*iso.source.catalog, iso.source.graph, budget);
  rep.complete = scan.complete;
  std::set<std::array<std::string, 3>> seen;
  for (const TriangleWitness& w : scan.witnesses) {
    if (!seen.insert(w.sides).second) continue;
    ++rep.checked;
    try {
      const auto img = bounds_triangle(*iso.target.catalog, iso.image_of(w.sides[0]), iso.image_of(w.sides[1]),
                                       iso.image_of(w.sides[2]));
      if (img.empty()) rep.failures.push_back({w.sides, "image sides bound no triangle"});
    } catch (const Error& e) {
      rep.failures.push_back({w.sides, std::string(error_code_name(e.code())) + ": " + e.what()});
    }
  }
  return rep;
}

Mat2 sign_normalized(const Mat2& A) {
  for (const Scalar* x : {&A.a, &A.b, &A.c, &A.d}) {
    if (x->sign() != 0) return x->sign() > 0 ? A : -A;
  }
  return A;
}

DerivativeReport derivative_of_iso(GraphIso& iso, int budget) {
  const TriangleScan scan = triangles(*iso.source.catalog, iso.source.graph, budget);
  if (scan.witnesses.empty()) {
    throw Error(ErrorCode::NoTriangleInTruncation, "no triangle among the source vertices");
  }
  DerivativeReport rep;
  rep.consistent = true;
  for (int t = 0; t < static_cast<int>(scan.witnesses.size()); ++t) {
    const Face& f = scan.witnesses[t].face;
    std::array<Vec2, 3> v, w;
    for (int k = 0; k < 3; ++k) {
      v[k] = f.vertex[(k + 1) % 3] - f.vertex[k];
      w[k] = resolve_id(*iso.target.catalog, iso.image_of(f.half[k]->id)).hol;
    }
    std::optional<std::pair<int, int>> signs;
    for (int e1 : {1, -1}) {
      for (int e2 : {1, -1}) {
        if (!signs && (w[0] + e1 * w[1] + e2 * w[2]).is_zero()) signs = {e1, e2};
      }
    }
    if (!signs) {
      rep.consistent = false;
      rep.offending = {t, t};
      rep.detail = "image of triangle " + std::to_string(t) + " does not close up";
      return rep;
    }
    const Mat2 A = sign_normalized(from_columns(w[0], signs->first * w[1]) * from_columns(v[0], v[1]).inverse());
    ++rep.triangles;
    (A.det().sign() > 0 ? rep.preserving : rep.reversing) += 1;
    if (t == 0) {
      rep.A = A;
    } else if (!(A == rep.A)) {
      rep.consistent = false;
      rep.offending = {0, t};
      rep.detail = "triangles 0 and " + std::to_string(t) + " give " + rep.A.str() + " and " + A.str();
    }
  }
  rep.orientation = rep.reversing == 0 ? 1 : rep.preserving == 0 ? -1 : 0;
  return rep;
}

Scalar edge_wedge(Catalog& cat, const std::string& a, const std::string& b) {
  const SaddleConnection& x = resolve_id(cat, a);
  const SaddleConnection& y = resolve_id(cat, b);
  if (x.id == y.id || !disjoint(cat.surface(), x, y)) throw Error(ErrorCode::NotAnEdge, a + " and " + b + " meet");
  return wedge(x.hol, y.hol).abs();
}

std::vector<std::pair<Scalar, long>> wedge_histogram(const SCGraph& g) {
  if (g.conns.size() != g.ids.size()) throw Error(ErrorCode::PreconditionViolated, "graph has no holonomy data");
  std::map<Scalar, long> h;
  for (int i = 0; i < g.num_vertices(); ++i) {
    for (int j : g.adj[i]) {
      if (i < j) ++h[wedge(g.conns[i]->hol, g.conns[j]->hol).abs()];
    }
  }
  return {h.begin(), h.end()};
}

// ---------------------------------------------------------------------------

namespace {

struct UnionFind {
  std::vector<int> parent;
  int add() {
    parent.push_back(static_cast<int>(parent.size()));
    return parent.back();
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

QuotientReport orbits(Catalog& cat, const SCGraph& g, const std::vector<Mat2>& generators,
                      const Scalar& ambient_factor) {
  const Surface& s = cat.surface();
  if (g.conns.size() != g.ids.size()) throw Error(ErrorCode::PreconditionViolated, "graph has no holonomy data");
  if (ambient_factor < Scalar(1)) throw Error(ErrorCode::PreconditionViolated, "ambient factor must be >= 1");
  QuotientReport rep;
  rep.ambient_L2 = ambient_factor * g.L2;
  std::vector<AffineMap> maps;
  for (const Mat2& A : generators) {
    if (A.det().abs() != Scalar(1)) throw Error(ErrorCode::BadGenerator, A.str() + " does not have |det| = 1");
    std::vector<AffineMap> fw, bw;
    try {
      fw = affine_automorphisms(s, A);
      bw = affine_automorphisms(s, A.inverse());
    } catch (const Error& e) {
      throw Error(ErrorCode::BadGenerator, A.str() + ": " + e.what());
    }
    if (fw.empty()) throw Error(ErrorCode::BadGenerator, "no affine automorphism has derivative " + A.str());
    for (auto& m : fw) maps.push_back(std::move(m));
    for (auto& m : bw) maps.push_back(std::move(m));
  }
  rep.maps = static_cast<int>(maps.size());

  // Vertices: explore images inside the ambient bound.
  std::vector<SaddleConnection> nodes;
  std::map<std::string, int> index;
  UnionFind vu;
  auto node_of = [&](const SaddleConnection& sc, std::deque<int>& queue) {
    const auto it = index.find(sc.id);
    if (it != index.end()) return it->second;
    const int k = vu.add();
    index[sc.id] = k;
    nodes.push_back(sc);
    queue.push_back(k);
    return k;
  };
  std::deque<int> queue;
  for (const SaddleConnection* sc : g.conns) node_of(*sc, queue);
  std::vector<std::vector<int>> image;
  bool escaped_v = false;
  while (!queue.empty()) {
    const int i = queue.front();
    queue.pop_front();
    if (static_cast<int>(image.size()) <= i) image.resize(i + 1);
    image[i].assign(maps.size(), -1);
    for (std::size_t m = 0; m < maps.size(); ++m) {
      const SaddleConnection img = maps[m].image(nodes[i]);
      if (img.len2 > rep.ambient_L2) {
        escaped_v = true;
        continue;
      }
      const int j = node_of(img, queue);
      image[i][m] = j;
      vu.unite(i, j);
    }
  }
  const int nv = g.num_vertices();
  std::set<int> vroots;
  std::set<std::pair<int, int>> vinv;
  for (int i = 0; i < nv; ++i) {
    vroots.insert(vu.find(i));
    const int a = s.vclass(nodes[i].start_class).angle_pi;
    const int b = s.vclass(nodes[i].end_class).angle_pi;
    vinv.insert({std::min(a, b), std::max(a, b)});
  }
  rep.vertex_orbit_count = static_cast<int>(vroots.size());
  rep.vertex_lower_bound = static_cast<int>(vinv.size());
  rep.vertex_certified = !escaped_v || rep.vertex_orbit_count == rep.vertex_lower_bound;

  // Edges.
  std::map<std::pair<int, int>, int> eindex;
  std::vector<std::pair<int, int>> edges;
  UnionFind eu;
  std::deque<int> equeue;
  auto edge_of = [&](int a, int b) {
    const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
    const auto it = eindex.find(key);
    if (it != eindex.end()) return it->second;
    const int k = eu.add();
    eindex[key] = k;
    edges.push_back(key);
    equeue.push_back(k);
    return k;
  };
  for (int i = 0; i < nv; ++i) {
    for (int j : g.adj[i]) {
      if (i < j) edge_of(i, j);
    }
  }
  const int ne = static_cast<int>(edges.size());
  bool escaped_e = false;
  while (!equeue.empty()) {
    const int k = equeue.front();
    equeue.pop_front();
    const auto [a, b] = edges[k];
    for (std::size_t m = 0; m < maps.size(); ++m) {
      const int x = image[a][m], y = image[b][m];
      if (x < 0 || y < 0) {
        escaped_e = true;
        continue;
      }
      eu.unite(k, edge_of(x, y));
    }
  }
  std::map<int, Scalar> root_wedge;
  std::set<Scalar> wedges;
  for (int k = 0; k < static_cast<int>(edges.size()); ++k) {
    const Scalar w = wedge(nodes[edges[k].first].hol, nodes[edges[k].second].hol).abs();
    const int r = eu.find(k);
    const auto [it, fresh] = root_wedge.emplace(r, w);
    if (!fresh && it->second != w) rep.wedge_consistent = false;
    if (k < ne) wedges.insert(w);
  }
  std::set<int> eroots;
  for (int k = 0; k < ne; ++k) eroots.insert(eu.find(k));
  rep.edge_orbit_count = static_cast<int>(eroots.size());
  rep.edge_lower_bound = static_cast<int>(wedges.size());
  rep.edge_certified = !escaped_e || rep.edge_orbit_count == rep.edge_lower_bound;
  rep.escaped = escaped_v || escaped_e;
  rep.wedge_values = wedge_histogram(g);
  return rep;
}

// ---------------------------------------------------------------------------

std::vector<AffineCandidate> automorphism_candidates(const Surface& s, const Scalar& L2, int budget) {
  auto sp = std::make_shared<const Surface>(s);
  auto cat = std::make_shared<Catalog>(*sp);
  const SCGraph g = build_graph(*cat, L2);
  const TriangleScan scan = triangles(*cat, g, budget);
  std::vector<AffineCandidate> out;
  if (scan.witnesses.empty()) return out;
  auto edges = [](const Face& f) {
    std::array<Vec2, 3> e;
    for (int k = 0; k < 3; ++k) e[k] = f.vertex[(k + 1) % 3] - f.vertex[k];
    return e;
  };
  const auto v = edges(scan.witnesses[0].face);
  const Mat2 vinv = from_columns(v[0], v[1]).inverse();
  std::vector<Mat2> mats;
  for (const TriangleWitness& w : scan.witnesses) {
    const auto u = edges(w.face);
    for (int r = 0; r < 3; ++r) {
      for (const Mat2& A : {from_columns(u[r], u[(r + 1) % 3]) * vinv,
                            from_columns(-u[r], -u[(r + 2) % 3]) * vinv}) {
        if (A.det().abs() != Scalar(1)) continue;
        const Mat2 n = sign_normalized(A);
        if (std::find(mats.begin(), mats.end(), n) == mats.end()) mats.push_back(n);
      }
    }
  }
  std::vector<std::vector<int>> maps_seen;
  for (const Mat2& A : mats) {
    const std::vector<AffineMap> lifts = affine_automorphisms(s, A);
    if (lifts.empty()) continue;
    GraphIso iso = automorphism_iso(sp, cat, lifts[0], L2);
    if (!iso.valid) continue;
    const DerivativeReport der = derivative_of_iso(iso, budget);
    if (!der.consistent || !(der.A == A)) continue;
    std::vector<int> signature;
    for (int j : iso.map) signature.push_back(j < 0 ? -1 : j);
    std::vector<std::string> sig_ids;
    for (int j : iso.map) sig_ids.push_back(iso.target.graph.ids[j]);
    bool merged = false;
    for (std::size_t c = 0; c < out.size() && !merged; ++c) {
      if (maps_seen[c] == signature) {
        out[c].matrices.push_back(A);
        merged = true;
      }
    }
    if (merged) continue;
    AffineCandidate cand;
    cand.A = A;
    cand.matrices = {A};
    cand.det_sign = A.det().sign();
    cand.orientation_preserving = cand.det_sign > 0;
    cand.surface_map = lifts[0].polygon_anchors();
    cand.iso_valid = true;
    cand.derivative_matches = true;
    cand.lifts = static_cast<int>(lifts.size());
    for (const AffineMap& f : lifts) {
      bool same = true;
      for (int i = 0; i < g.num_vertices() && same; ++i) {
        same = f.image(*g.conns[i]).id == sig_ids[i];
      }
      cand.lifts_same_map += same ? 1 : 0;
    }
    out.push_back(std::move(cand));
    maps_seen.push_back(std::move(signature));
  }
  return out;
}

}  // namespace flatsc
