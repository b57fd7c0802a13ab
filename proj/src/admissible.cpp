#include "flatsc/admissible.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <tuple>

namespace flatsc {

namespace {

Scalar area2(const std::vector<Vec2>& v) {
  Scalar a;
  for (std::size_t i = 0; i < v.size(); ++i) a += wedge(v[i], v[(i + 1) % v.size()]);
  return a;
}

void dedupe(std::vector<Vec2>& v) {
  std::vector<Vec2> out;
  for (const Vec2& p : v) {
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  }
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  v = std::move(out);
}

// Part of the convex polygon on the closed left of the line a -> b.
std::vector<Vec2> clip(const std::vector<Vec2>& poly, const Vec2& a, const Vec2& b) {
  std::vector<Vec2> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& P = poly[i];
    const Vec2& Q = poly[(i + 1) % n];
    const int sp = orient(a, b, P);
    const int sq = orient(a, b, Q);
    if (sp >= 0) out.push_back(P);
    if ((sp > 0 && sq < 0) || (sp < 0 && sq > 0)) {
      const Scalar t = -wedge(b - a, P - a) / wedge(b - a, Q - P);
      out.push_back(P + t * (Q - P));
    }
  }
  dedupe(out);
  return out;
}

bool contains_closed(const std::vector<Vec2>& region, const Vec2& p) {
  for (std::size_t i = 0; i < region.size(); ++i) {
    if (orient(region[i], region[(i + 1) % region.size()], p) < 0) return false;
  }
  return true;
}

bool separated_by_edges_of(const std::vector<Vec2>& A, const std::vector<Vec2>& B) {
  for (std::size_t i = 0; i < A.size(); ++i) {
    const Vec2& a = A[i];
    const Vec2& b = A[(i + 1) % A.size()];
    bool all_out = true;
    for (const Vec2& x : B) {
      if (orient(a, b, x) > 0) {
        all_out = false;
        break;
      }
    }
    if (all_out) return true;
  }
  return false;
}

bool interiors_overlap(const std::vector<Vec2>& A, const std::vector<Vec2>& B) {
  return !separated_by_edges_of(A, B) && !separated_by_edges_of(B, A);
}

// At least two distinct region vertices on the closed segment.
bool touches_along(const std::vector<Vec2>& region, const Vec2& a, const Vec2& b) {
  int n = 0;
  for (const Vec2& p : region) n += on_segment(p, a, b) ? 1 : 0;
  return n >= 2;
}

void check_simple(const std::vector<Vec2>& v) {
  const std::size_t n = v.size();
  if (n < 3) throw Error(ErrorCode::PreconditionViolated, "polygon needs at least 3 vertices");
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] == v[(i + 1) % n]) throw Error(ErrorCode::PreconditionViolated, "repeated vertex");
  }
  if (area2(v).sign() <= 0) throw Error(ErrorCode::PreconditionViolated, "polygon is not counterclockwise");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const SegRelation rel = seg_relation({v[i], v[(i + 1) % n]}, {v[j], v[(j + 1) % n]});
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (rel == SegRelation::CollinearOverlap || (!adjacent && rel != SegRelation::Disjoint) ||
          (adjacent && rel == SegRelation::InteriorCross)) {
        throw Error(ErrorCode::PreconditionViolated, "polygon is not simple");
      }
    }
  }
}

// d points strictly into the polygon at vertex i.
bool points_inside(const std::vector<Vec2>& v, int i, const Vec2& d) {
  const int n = static_cast<int>(v.size());
  const Vec2 out = v[(i + 1) % n] - v[i];
  const Vec2 in = v[(i + n - 1) % n] - v[i];
  const int turn = wedge(out, in).sign();
  if (turn > 0) return wedge(out, d).sign() > 0 && wedge(d, in).sign() > 0;
  if (turn == 0) return wedge(out, d).sign() > 0;
  return !(wedge(in, d).sign() >= 0 && wedge(d, out).sign() >= 0);
}

bool is_interior_diagonal(const std::vector<Vec2>& v, int i, int j) {
  const int n = static_cast<int>(v.size());
  if (!points_inside(v, i, v[j] - v[i])) return false;
  for (int k = 0; k < n; ++k) {
    if (k != i && k != j && on_segment(v[k], v[i], v[j])) return false;
    const int k1 = (k + 1) % n;
    if (k == i || k == j || k1 == i || k1 == j) continue;
    if (seg_relation({v[i], v[j]}, {v[k], v[k1]}) != SegRelation::Disjoint) return false;
  }
  return true;
}

struct Developed {
  int apex = -1;
  std::vector<std::array<int, 3>> cells;
  std::vector<CellPiece> pieces;
};

int pick_apex(const std::vector<Vec2>& v) {
  const int n = static_cast<int>(v.size());
  for (int a = 0; a < n; ++a) {
    bool ok = true;
    for (int c = 0; c + 2 < n && ok; ++c) {
      const int j = (a + 1 + c) % n;
      ok = orient(v[a], v[j], v[(j + 1) % n]) > 0;
    }
    if (ok) return a;
  }
  throw Error(ErrorCode::PreconditionViolated, "polygon is not star-shaped from a vertex");
}

std::vector<Vec2> placed_polygon(const Surface& s, int poly, const Placement& place) {
  std::vector<Vec2> out;
  for (const Vec2& z : s.polygons()[poly].vertices) out.push_back(place.apply(z));
  return out;
}

// The anchor sits at vertex `at` and holds the germ of side `at`.
Developed develop(const Surface& s, const std::vector<Vec2>& v, const Anchor& anchor, int at,
                  std::vector<std::string>& violations) {
  const int n = static_cast<int>(v.size());
  Developed dev;
  dev.apex = pick_apex(v);
  for (int c = 0; c + 2 < n; ++c) {
    const int j = (dev.apex + 1 + c) % n;
    dev.cells.push_back({dev.apex, j, (j + 1) % n});
  }
  int seed_cell = -1;
  for (int c = 0; c < static_cast<int>(dev.cells.size()) && seed_cell < 0; ++c) {
    const auto& t = dev.cells[c];
    const bool has0 = std::count(t.begin(), t.end(), at) > 0;
    const bool has1 = std::count(t.begin(), t.end(), (at + 1) % n) > 0;
    if (has0 && has1) seed_cell = c;
  }
  const Placement seed{anchor.sign, v[at] - anchor.sign * s.vertex(anchor.corner)};

  using Key = std::tuple<int, int, Placement>;
  std::map<Key, int> seen;
  std::deque<Key> queue;
  auto push = [&](int cell, int poly, const Placement& place) {
    const Key k{cell, poly, place};
    if (seen.count(k)) return;
    seen[k] = -1;
    queue.push_back(k);
  };
  push(seed_cell, anchor.corner.poly, seed);
  const std::size_t piece_cap = 200000;
  // Around a marked point inside the polygon the development never closes
  // up; it is already rejected, so stop soon after one is seen.
  std::optional<std::size_t> stray;
  while (!queue.empty()) {
    const auto [cell, poly, place] = queue.front();
    queue.pop_front();
    const auto& t = dev.cells[cell];
    std::vector<Vec2> region{v[t[0]], v[t[1]], v[t[2]]};
    const std::vector<Vec2> P = placed_polygon(s, poly, place);
    for (std::size_t i = 0; i < P.size() && region.size() >= 3; ++i) {
      region = clip(region, P[i], P[(i + 1) % P.size()]);
    }
    if (region.size() < 3 || area2(region).sign() <= 0) continue;
    if (dev.pieces.size() >= piece_cap || (stray && dev.pieces.size() > *stray + 16 * dev.cells.size())) {
      violations.push_back("development does not close up");
      return dev;
    }
    dev.pieces.push_back({cell, poly, place, region});
    for (std::size_t i = 0; i < P.size() && !stray; ++i) {
      if (contains_closed(region, P[i]) && std::find(v.begin(), v.end(), P[i]) == v.end()) {
        stray = dev.pieces.size();
      }
    }
    std::vector<std::pair<int, std::array<Vec2, 2>>> diagonals;
    if (cell > 0) diagonals.push_back({cell - 1, {v[t[0]], v[t[1]]}});
    if (cell + 1 < static_cast<int>(dev.cells.size())) diagonals.push_back({cell + 1, {v[t[0]], v[t[2]]}});
    for (const auto& [nb, d] : diagonals) {
      if (touches_along(region, d[0], d[1])) push(nb, poly, place);
    }
    for (int i = 0; i < static_cast<int>(P.size()); ++i) {
      const Vec2& a = P[i];
      const Vec2& b = P[(i + 1) % P.size()];
      if (!touches_along(region, a, b)) continue;
      const EdgeRef e{poly, i};
      const int next = s.partner(e).poly;
      const Placement there = place.compose(s.transition(e));
      push(cell, next, there);
      // A diagonal lying along the edge: cross both at once.
      for (const auto& [nb, d] : diagonals) {
        if (orient(a, b, d[0]) == 0 && orient(a, b, d[1]) == 0 && touches_along(region, d[0], d[1])) {
          push(nb, next, there);
        }
      }
    }
  }
  return dev;
}

struct GermHit {
  Germ germ;
  int sign = 1;
};

std::optional<GermHit> germ_at(const Surface& s, const std::vector<CellPiece>& pieces,
                               const Vec2& point, const Vec2& d) {
  for (const CellPiece& pc : pieces) {
    const int m = static_cast<int>(pc.region.size());
    int at = -1;
    for (int r = 0; r < m && at < 0; ++r) at = pc.region[r] == point ? r : -1;
    if (at < 0) continue;
    const Vec2 rn = pc.region[(at + 1) % m] - point;
    const Vec2 rp = pc.region[(at + m - 1) % m] - point;
    if (wedge(rn, d).sign() < 0 || wedge(d, rp).sign() < 0) continue;
    const int nv = s.num_vertices(pc.poly);
    for (int i = 0; i < nv; ++i) {
      if (!(pc.place.apply(s.vertex(pc.poly, i)) == point)) continue;
      const Vec2 pd = pc.place.sign * d;
      const Corner c{pc.poly, i};
      if (!s.in_closed_sector(c, pd)) continue;
      const Germ g = s.normalize_germ(c, pd);
      return GermHit{g, pc.place.sign * (g.dir == pd ? 1 : -1)};
    }
  }
  return std::nullopt;
}

std::optional<SaddleConnection> segment_connection(const Surface& s, const std::vector<CellPiece>& pieces,
                                                   const Vec2& a, const Vec2& b, GermHit* hit_out) {
  const auto hit = germ_at(s, pieces, a, b - a);
  if (!hit) return std::nullopt;
  TraceBudget budget;
  budget.max_len2 = (b - a).norm2();
  const Trajectory tr = trace_ray(s, hit->germ, budget);
  if (tr.terminal != Terminal::HitMarked || tr.len2 != (b - a).norm2()) return std::nullopt;
  if (hit_out != nullptr) *hit_out = *hit;
  return connection_from_trace(s, hit->germ, tr);
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& x : v) out += (out.empty() ? "" : "; ") + x;
  return out;
}

AdmissiblePolygon require(const AdmissibilityReport& r, ErrorCode code, const std::string& what) {
  if (!r.admissible) throw Error(code, what + ": " + join(r.violations));
  return *r.polygon;
}

}  // namespace

Scalar AdmissiblePolygon::area() const { return area2(vertices) / Scalar(2); }

Anchor AdmissiblePolygon::anchor_at(int k) const { return side_anchor[k]; }

bool strictly_convex_at(const std::vector<Vec2>& v, int k) {
  const int n = static_cast<int>(v.size());
  return orient(v[(k + n - 1) % n], v[k], v[(k + 1) % n]) > 0;
}

bool strictly_convex(const std::vector<Vec2>& v) {
  for (int k = 0; k < static_cast<int>(v.size()); ++k) {
    if (!strictly_convex_at(v, k)) return false;
  }
  return true;
}

namespace {

AdmissibilityReport check_at(const Surface& s, const std::vector<Vec2>& v, const Anchor& anchor, int at) {
  check_simple(v);
  if (anchor.corner.poly < 0 || anchor.corner.poly >= s.num_polygons() || anchor.corner.idx < 0 ||
      anchor.corner.idx >= s.num_vertices(anchor.corner.poly) || (anchor.sign != 1 && anchor.sign != -1)) {
    throw Error(ErrorCode::AnchorInvalid, "anchor corner out of range");
  }
  const int n = static_cast<int>(v.size());
  if (!s.in_sector(anchor.corner, anchor.sign * (v[(at + 1) % n] - v[at]))) {
    throw Error(ErrorCode::AnchorInvalid,
                "side " + std::to_string(at) + " does not leave the anchor corner's sector");
  }
  AdmissibilityReport rep;
  Developed dev = develop(s, v, anchor, at, rep.violations);

  // Marked points: exactly the vertices.
  std::set<std::string> msgs;
  for (const CellPiece& pc : dev.pieces) {
    for (int i = 0; i < s.num_vertices(pc.poly); ++i) {
      const Vec2 pv = pc.place.apply(s.vertex(pc.poly, i));
      if (!contains_closed(pc.region, pv)) continue;
      if (std::find(v.begin(), v.end(), pv) == v.end()) {
        msgs.insert("marked point at non-vertex point " + pv.str());
      }
    }
  }
  for (int k = 0; k < n; ++k) {
    for (const CellPiece& pc : dev.pieces) {
      if (!contains_closed(pc.region, v[k])) continue;
      bool marked = false;
      for (int i = 0; i < s.num_vertices(pc.poly) && !marked; ++i) {
        marked = pc.place.apply(s.vertex(pc.poly, i)) == v[k];
      }
      if (!marked) msgs.insert("vertex " + std::to_string(k) + " is not a marked point");
    }
  }
  // Interior embedding: no two pieces overlap inside one surface polygon.
  std::map<int, std::vector<std::vector<Vec2>>> by_poly;
  for (const CellPiece& pc : dev.pieces) {
    std::vector<Vec2> local;
    for (const Vec2& p : pc.region) local.push_back(pc.place.unapply(p));
    by_poly[pc.poly].push_back(std::move(local));
  }
  for (const auto& [poly, regions] : by_poly) {
    for (std::size_t i = 0; i < regions.size(); ++i) {
      for (std::size_t j = i + 1; j < regions.size(); ++j) {
        if (interiors_overlap(regions[i], regions[j])) {
          msgs.insert("interior is not embedded (overlap in polygon " + std::to_string(poly) + ")");
        }
      }
    }
  }
  for (const auto& m : msgs) rep.violations.push_back(m);
  if (!rep.violations.empty()) return rep;

  AdmissiblePolygon p;
  p.vertices = v;
  p.apex = dev.apex;
  p.pieces = std::move(dev.pieces);
  for (int k = 0; k < n; ++k) {
    GermHit hit;
    auto sc = segment_connection(s, p.pieces, v[k], v[(k + 1) % n], &hit);
    if (!sc) {
      rep.violations.push_back("side " + std::to_string(k) + " is not a saddle connection");
      return rep;
    }
    p.side_ids.push_back(sc->id);
    p.sides.push_back(std::move(*sc));
    p.side_anchor.push_back({hit.germ.corner, hit.sign});
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (!is_interior_diagonal(v, i, j)) continue;
      auto sc = segment_connection(s, p.pieces, v[i], v[j], nullptr);
      if (!sc) {
        rep.violations.push_back("diagonal " + std::to_string(i) + "-" + std::to_string(j) +
                                 " is not a saddle connection");
        return rep;
      }
      p.diagonal_ids.push_back({{i, j}, sc->id});
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (p.side_ids[i] == p.side_ids[j]) continue;
      if (!disjoint(s, p.sides[i], p.sides[j])) {
        rep.violations.push_back("sides " + std::to_string(i) + " and " + std::to_string(j) + " cross");
      }
    }
  }
  if (!rep.violations.empty()) return rep;
  p.anchor = p.side_anchor[0];
  rep.admissible = true;
  rep.polygon = std::move(p);
  return rep;
}

}  // namespace

AdmissibilityReport is_admissible(const Surface& s, const std::vector<Vec2>& v, const Anchor& anchor) {
  return check_at(s, v, anchor, 0);
}

AdmissibilityReport is_admissible_at(const Surface& s, const std::vector<Vec2>& v, const Anchor& anchor,
                                     int at) {
  if (at < 0 || at >= static_cast<int>(v.size())) throw Error(ErrorCode::AnchorInvalid, "no such vertex");
  return check_at(s, v, anchor, at);
}

std::optional<std::pair<Germ, int>> germ_at_vertex(const Surface& s, const AdmissiblePolygon& p,
                                                   const Vec2& point, const Vec2& d) {
  const auto hit = germ_at(s, p.pieces, point, d);
  if (!hit) return std::nullopt;
  return std::make_pair(hit->germ, hit->sign);
}

AdmissibilityReport sub_polygon(const Surface& s, const AdmissiblePolygon& p, const std::vector<int>& keep) {
  if (keep.size() < 3) throw Error(ErrorCode::PreconditionViolated, "sub-polygon needs 3 vertices");
  std::vector<Vec2> v;
  for (int k : keep) v.push_back(p.vertices.at(k));
  const auto hit = germ_at(s, p.pieces, v[0], v[1] - v[0]);
  if (!hit) throw Error(ErrorCode::AnchorInvalid, "first sub-polygon side leaves the polygon");
  return is_admissible(s, v, {hit->germ.corner, hit->sign});
}

AdmissiblePolygon triangle_polygon(const Surface& s, const Face& f, int k) {
  std::vector<Vec2> v{f.vertex[k], f.vertex[(k + 1) % 3], f.vertex[(k + 2) % 3]};
  return require(is_admissible(s, v, {f.half[k]->start.corner, f.kappa[k]}), ErrorCode::Internal,
                 "face is not admissible");
}

AdmissiblePolygon extend_strip(const Surface& s, const AdmissiblePolygon& p, int side,
                               std::optional<Vec2> f, bool open_strip) {
  const int n = p.size();
  if (side < 0 || side >= n) throw Error(ErrorCode::PreconditionViolated, "no such side");
  const Vec2 d = p.vertices[(side + 1) % n] - p.vertices[side];
  const Vec2 flow = f ? *f : Vec2(d.y, -d.x);
  if (wedge(d, flow).sign() >= 0) {
    throw Error(ErrorCode::PreconditionViolated, "flow does not leave the polygon through the side");
  }
  for (int k = 0; k < n; ++k) {
    if (k != side && p.side_ids[k] == p.side_ids[side]) {
      throw Error(ErrorCode::HypothesisViolated,
                  "side " + std::to_string(side) + " has the same image as side " + std::to_string(k));
    }
  }
  const SaddleConnection& sc = p.sides[side];
  const int sigma = p.side_anchor[side].sign;
  FirstHitOptions opt;
  opt.interior_feet = open_strip;
  const FirstHit hit = flow_interval_first_hit(s, sc.transversal(), sigma * flow, opt);
  const Vec2 A = p.vertices[side] + sigma * (hit.point - sc.origin());
  std::vector<Vec2> v = p.vertices;
  v.insert(v.begin() + side + 1, A);
  try {
    const int keep = (side + 1) % n;
    const int at = keep > side ? keep + 1 : keep;
    return require(check_at(s, v, p.side_anchor[keep], at), ErrorCode::HypothesisViolated,
                   "extension is not admissible");
  } catch (const Error& e) {
    if (e.code() == ErrorCode::PreconditionViolated) {
      throw Error(ErrorCode::HypothesisViolated, std::string("extended polygon: ") + e.what());
    }
    throw;
  }
}

const char* pentagon_kind_name(PentagonKind k) {
  switch (k) {
    case PentagonKind::Pentagon: return "Pentagon";
    case PentagonKind::SimpleCylinderCase: return "SimpleCylinderCase";
    case PentagonKind::NonSimpleCylinderCase: return "NonSimpleCylinderCase";
  }
  return "?";
}

namespace {

Scalar ratio(const Vec2& w, const Vec2& v) { return (v.x.is_zero() ? w.y / v.y : w.x / v.x).abs(); }

bool same_germ(const Germ& a, const Germ& b) {
  return a.corner == b.corner && direction_key(a.dir) == direction_key(b.dir);
}

// Marked point reached from the face vertex where half `h` starts, leaving
// in plane direction `dir` (reached by turning in `sense` from h).
Vec2 walk_boundary(const Surface& s, const Face& f, int h, const Vec2& dir, Rotation sense,
                   const Scalar& max_len2) {
  const auto [g, sign] = s.rotate_to_signed(f.half[h]->start, f.kappa[h] * dir, sense);
  TraceBudget b;
  b.max_len2 = max_len2;
  const Trajectory tr = trace_ray(s, g, b);
  if (tr.terminal != Terminal::HitMarked) throw Error(ErrorCode::Internal, "cylinder boundary walk failed");
  return f.vertex[h] + (f.kappa[h] * sign) * (tr.param * g.dir);
}

}  // namespace

PentagonResult pentagon_of_triangle(const Surface& s, const TriangleWitness& tw, long crossing_budget) {
  const Face& f = tw.face;
  const Scalar twice_area = f.area * Scalar(2);
  std::optional<std::pair<int, const Cylinder*>> simple, non_simple;
  std::vector<Decomposition> keep(3);
  std::vector<std::pair<std::size_t, std::size_t>> sizes(3);
  for (int k = 0; k < 3; ++k) {
    const SaddleConnection* h = f.half[k];
    keep[k] = direction_decomposition(s, h->hol, crossing_budget);
    if (!keep[k].periodic) {
      throw Error(ErrorCode::UnknownCylinderStatus, "direction " + h->hol.str() + " not periodic within budget");
    }
    for (const Cylinder& c : keep[k].cylinders) {
      const auto holds = [&](const std::vector<SaddleConnection>& list) {
        return std::any_of(list.begin(), list.end(), [&](const SaddleConnection& b) {
          return b.id == h->id && same_germ(b.start, h->start);
        });
      };
      const bool in_bottom = holds(c.bottom);
      if (!in_bottom && !holds(c.top)) continue;
      if (c.height * ratio(h->hol, c.direction) != twice_area) continue;
      sizes[k] = in_bottom ? std::make_pair(c.bottom.size(), c.top.size())
                           : std::make_pair(c.top.size(), c.bottom.size());
      if (c.simple()) {
        if (!simple) simple = {k, &c};
      } else if (!non_simple) {
        non_simple = {k, &c};
      }
    }
  }
  PentagonResult out;
  if (simple || non_simple) {
    const auto [k, cyl] = simple ? *simple : *non_simple;
    const int k1 = (k + 1) % 3, k2 = (k + 2) % 3;
    const Vec2& P = f.vertex[k];
    const Vec2& Q = f.vertex[k1];
    const Vec2& R = f.vertex[k2];
    const Vec2 u = Q - P;
    const Scalar budget = cyl->circumference * cyl->circumference * cyl->direction.norm2() * Scalar(4);
    const Vec2 Y = walk_boundary(s, f, k2, -u, Rotation::CW, budget);
    std::vector<Vec2> v;
    if (simple) {
      out.kind = PentagonKind::SimpleCylinderCase;
      v = {P, Q, R, Y};
    } else if (sizes[k].first >= 2) {
      out.kind = PentagonKind::NonSimpleCylinderCase;
      v = {P, Q, walk_boundary(s, f, k1, u, Rotation::CW, budget), R, Y};
    } else {
      out.kind = PentagonKind::NonSimpleCylinderCase;
      v = {P, Q, walk_boundary(s, f, k2, u, Rotation::CCW, budget), R, Y};
    }
    out.side = k;
    out.polygon = require(is_admissible(s, v, {f.half[k]->start.corner, f.kappa[k]}), ErrorCode::Internal,
                          "cylinder polygon is not admissible");
    return out;
  }
  // Not in any cylinder: two strip extensions along the direction of side 0.
  const AdmissiblePolygon tri = triangle_polygon(s, f, 0);
  const Vec2 u = tri.vertices[1] - tri.vertices[0];
  const AdmissiblePolygon quad = extend_strip(s, tri, 2, -u, true);
  const AdmissiblePolygon pent = extend_strip(s, quad, 1, u, true);
  if (!strictly_convex(pent.vertices)) throw Error(ErrorCode::Internal, "pentagon is not strictly convex");
  out.kind = PentagonKind::Pentagon;
  out.side = 0;
  out.polygon = pent;
  return out;
}

CoconvexResult coconvexify(Catalog& cat, const AdmissiblePolygon& quad, int reflex_vertex) {
  const Surface& s = cat.surface();
  if (quad.size() != 4 || reflex_vertex < 0 || reflex_vertex >= 4) {
    throw Error(ErrorCode::PreconditionViolated, "need a quadrilateral and one of its vertices");
  }
  for (int k = 1; k < 4; ++k) {
    if (!strictly_convex_at(quad.vertices, (reflex_vertex + k) % 4)) {
      throw Error(ErrorCode::PreconditionViolated, "quadrilateral is not strictly convex at the other vertices");
    }
  }
  CoconvexResult out;
  if (strictly_convex_at(quad.vertices, reflex_vertex)) return out;
  std::vector<int> order;
  for (int k = 0; k < 4; ++k) order.push_back((reflex_vertex + k) % 4);
  AdmissiblePolygon cur = require(sub_polygon(s, quad, order), ErrorCode::Internal, "relabelled quadrilateral");

  // Bound on |A3 A_k|: area(A1 A_k A3) < area(X) with the angle at A3 kept
  // between its first value and the exterior angle of (A1 A3 A4).
  const Vec2& A1 = cur.vertices[0];
  const Vec2& A3 = cur.vertices[2];
  const Vec2 a = A1 - A3, b = cur.vertices[1] - A3, c = cur.vertices[3] - A3;
  const Scalar sin0 = wedge(a, b) * wedge(a, b) / (a.norm2() * b.norm2());
  const Scalar sin4 = wedge(a, c) * wedge(a, c) / (a.norm2() * c.norm2());
  const Scalar m = std::min(sin0, sin4);
  const Scalar area = s.total_area();
  out.T2 = Scalar(4) * area * area / (a.norm2() * m);
  for (const SaddleConnection* sc : cat.upto(out.T2)) out.cap += sc->len2 < out.T2 ? 1 : 0;

  const Vec2 flow = cur.vertices[2] - cur.vertices[3];
  for (int step = 1;; ++step) {
    if (step > out.cap + 1) throw Error(ErrorCode::Internal, "coconvexify exceeded its length bound");
    const AdmissiblePolygon pent = extend_strip(s, cur, 1, flow, true);
    if (!strictly_convex({pent.vertices[0], pent.vertices[1], pent.vertices[2], pent.vertices[3]})) {
      throw Error(ErrorCode::Internal, "intermediate quadrilateral is not strictly convex");
    }
    out.steps.push_back(pent);
    cur = require(sub_polygon(s, pent, {0, 2, 3, 4}), ErrorCode::Internal, "next quadrilateral");
    for (int k = 1; k < 4; ++k) {
      if (!strictly_convex_at(cur.vertices, k)) throw Error(ErrorCode::Internal, "convexity moved off A1");
    }
    if (strictly_convex_at(cur.vertices, 0)) {
      out.steps.push_back(cur);
      return out;
    }
  }
}

}  // namespace flatsc
