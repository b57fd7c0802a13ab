#include "flatsc/saddle.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace flatsc {

namespace {

std::string corner_word(const Corner& c) {
  return "c" + std::to_string(c.poly) + "." + std::to_string(c.idx);
}

std::string edge_word(const EdgeRef& e) {
  return "|" + std::to_string(e.poly) + "." + std::to_string(e.edge);
}

bool word_less(int ca, const std::string& wa, int cb, const std::string& wb) {
  return std::tie(ca, wa) < std::tie(cb, wb);
}

}  // namespace

Vec2 direction_key(const Vec2& v) {
  const Scalar m = v.x.is_zero() ? v.y.abs() : v.x.abs();
  return {v.x / m, v.y / m};
}

Vec2 SaddleConnection::origin() const { return pieces.front().place.apply(pieces.front().a); }

Transversal SaddleConnection::transversal() const {
  const Vec2 A = origin();
  return {A, A + hol, pieces};
}

SaddleConnection connection_from_trace(const Surface& s, const Germ& start, const Trajectory& tr) {
  if (tr.terminal != Terminal::HitMarked) {
    throw Error(ErrorCode::Internal, "trace did not end at a marked point");
  }
  SaddleConnection sc;
  sc.start = start;
  sc.start_class = s.vertex_class(start.corner);
  sc.end = s.normalize_germ(tr.end_corner, -tr.arrival_dir);
  sc.end_class = tr.end_class;
  sc.hol = tr.param * start.dir;
  sc.len2 = tr.len2;
  sc.crossings = tr.crossings;
  Placement place;
  std::size_t next_crossing = 0;
  for (std::size_t k = 0; k < tr.pieces.size(); ++k) {
    if (k > 0) {
      place = place.compose(s.transition(tr.crossings[next_crossing]));
      ++next_crossing;
    }
    sc.pieces.push_back({tr.pieces[k].poly, place, tr.pieces[k].a, tr.pieces[k].b});
  }
  sc.word = corner_word(start.corner);
  for (const EdgeRef& e : tr.crossings) sc.word += edge_word(e);
  std::string rev_word = corner_word(sc.end.corner);
  for (auto it = tr.crossings.rbegin(); it != tr.crossings.rend(); ++it) {
    rev_word += edge_word(s.partner(*it));
  }
  const bool forward = !word_less(sc.end_class, rev_word, sc.start_class, sc.word);
  const Vec2 h = sc.hol.canonical();
  sc.id = "v" + std::to_string(forward ? sc.start_class : sc.end_class) + ":h" + h.x.str() + "," +
          h.y.str() + ":w" + (forward ? sc.word : rev_word);
  return sc;
}

SaddleConnection reversed(const Surface& s, const SaddleConnection& sc) {
  TraceBudget b;
  b.max_len2 = sc.len2;
  return connection_from_trace(s, sc.end, trace_ray(s, sc.end, b));
}

std::string sc_id(const SaddleConnection& sc) { return sc.id; }

// ---------------------------------------------------------------------------

std::vector<SaddleConnection> enumerate_from_corner(const Surface& s, const Corner& c,
                                                     const Scalar& L2) {
  struct Node {
    int poly;
    Placement place;
    int entry;
    Vec2 dl, dr;
  };
  const Vec2 O = s.vertex(c);
  const int n0 = s.num_vertices(c.poly);
  std::vector<Vec2> hits;
  std::vector<Node> stack;
  for (int k = 0; k < n0; ++k) {
    if (k == c.idx) continue;
    const Vec2 d = s.vertex(c.poly, k) - O;
    if (s.in_sector(c, d) && d.norm2() <= L2) hits.push_back(d);
  }
  for (int k = 0; k < n0; ++k) {
    if (k == c.idx || (k + 1) % n0 == c.idx) continue;
    const Vec2 a = s.vertex(c.poly, k) - O;
    const Vec2 b = s.vertex(c.poly, k + 1) - O;
    if (dist2_origin_segment(a, b) > L2) continue;
    const EdgeRef e{c.poly, k};
    const EdgeRef p = s.partner(e);
    stack.push_back({p.poly, s.transition(e), p.edge, a, b});
  }
  while (!stack.empty()) {
    const Node node = stack.back();
    stack.pop_back();
    const int n = s.num_vertices(node.poly);
    std::vector<Vec2> pv(n);
    for (int k = 0; k < n; ++k) pv[k] = node.place.apply(s.vertex(node.poly, k)) - O;
    for (int k = 0; k < n; ++k) {
      if (k == node.entry || k == (node.entry + 1) % n) continue;
      const Vec2& d = pv[k];
      if (wedge(node.dl, d).sign() > 0 && wedge(d, node.dr).sign() > 0 && d.norm2() <= L2) {
        hits.push_back(d);
      }
    }
    for (int k = 0; k < n; ++k) {
      if (k == node.entry) continue;
      const Vec2& a = pv[k];
      const Vec2& b = pv[(k + 1) % n];
      if (wedge(a, b).sign() <= 0) continue;
      const Vec2& dl = wedge(node.dl, a).sign() > 0 ? a : node.dl;
      const Vec2& dr = wedge(b, node.dr).sign() > 0 ? b : node.dr;
      if (wedge(dl, dr).sign() <= 0) continue;
      if (dist2_origin_segment(a, b) > L2) continue;
      const EdgeRef e{node.poly, k};
      const EdgeRef p = s.partner(e);
      stack.push_back({p.poly, node.place.compose(s.transition(e)), p.edge, dl, dr});
    }
  }
  std::vector<SaddleConnection> out;
  out.reserve(hits.size());
  for (const Vec2& d : hits) {
    TraceBudget b;
    b.max_len2 = d.norm2();
    const Germ g{c, d};
    const Trajectory tr = trace_ray(s, g, b);
    if (tr.terminal != Terminal::HitMarked || tr.param != Scalar(1)) {
      throw Error(ErrorCode::Internal, "unfolding and tracing disagree");
    }
    out.push_back(connection_from_trace(s, g, tr));
  }
  return out;
}

namespace {

using GermKey = std::pair<Corner, Vec2>;

GermKey germ_key(const Germ& g) { return {g.corner, direction_key(g.dir)}; }

bool canonical_orientation(const SaddleConnection& a, const SaddleConnection& rev) {
  if (word_less(a.start_class, a.word, rev.start_class, rev.word)) return true;
  if (word_less(rev.start_class, rev.word, a.start_class, a.word)) return false;
  return germ_key(a.start) <= germ_key(rev.start);
}

}  // namespace

bool canonical_less(const SaddleConnection& a, const SaddleConnection& b) {
  if (a.len2 != b.len2) return a.len2 < b.len2;
  const int turn = wedge(a.canonical_hol(), b.canonical_hol()).sign();
  if (turn != 0) return turn > 0;
  return a.id < b.id;
}

std::vector<SaddleConnection> enumerate(const Surface& s, const Scalar& L2) {
  Catalog cat(s);
  cat.ensure(L2);
  std::vector<SaddleConnection> out;
  for (const SaddleConnection* sc : cat.upto(L2)) out.push_back(*sc);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

int count_meetings(const Surface& s, const SaddleConnection& A, const SaddleConnection& B,
                   bool stop_at_first) {
  if (A.id == B.id) return 0;
  int count = 0;
  std::set<std::pair<EdgeRef, Vec2>> boundary;
  for (const DevelopedPiece& p : A.pieces) {
    for (const DevelopedPiece& q : B.pieces) {
      if (p.poly != q.poly) continue;
      const SegRelation rel = seg_relation({p.a, p.b}, {q.a, q.b});
      if (rel == SegRelation::Disjoint) continue;
      if (rel == SegRelation::CollinearOverlap) {
        throw Error(ErrorCode::Internal, "distinct saddle connections overlap");
      }
      if (rel == SegRelation::InteriorCross) {
        ++count;
        if (stop_at_first) return count;
        continue;
      }
      Vec2 X;
      if (on_segment(p.a, q.a, q.b)) X = p.a;
      else if (on_segment(p.b, q.a, q.b)) X = p.b;
      else if (on_segment(q.a, p.a, p.b)) X = q.a;
      else X = q.b;
      const int n = s.num_vertices(p.poly);
      bool corner = false;
      for (int k = 0; k < n && !corner; ++k) corner = s.vertex(p.poly, k) == X;
      if (corner) continue;
      int edge = -1;
      for (int k = 0; k < n && edge < 0; ++k) {
        if (on_segment(X, s.vertex(p.poly, k), s.vertex(p.poly, k + 1))) edge = k;
      }
      if (edge < 0) throw Error(ErrorCode::Internal, "piece endpoint inside a polygon");
      EdgeRef e{p.poly, edge};
      const EdgeRef f = s.partner(e);
      if (f < e) {
        X = s.transition(e).unapply(X);
        e = f;
      }
      boundary.insert({e, X});
      if (stop_at_first) return 1;
    }
  }
  return count + static_cast<int>(boundary.size());
}

}  // namespace

int intersections(const Surface& s, const SaddleConnection& a, const SaddleConnection& b) {
  return count_meetings(s, a, b, false);
}

bool disjoint(const Surface& s, const SaddleConnection& a, const SaddleConnection& b) {
  return count_meetings(s, a, b, true) == 0;
}

// ---------------------------------------------------------------------------

void Catalog::ensure(const Scalar& L2) {
  if (any_ && L2 <= bound_) return;
  std::vector<SaddleConnection> oriented;
  std::map<GermKey, std::size_t> index;
  for (int p = 0; p < s_.num_polygons(); ++p) {
    for (int i = 0; i < s_.num_vertices(p); ++i) {
      for (SaddleConnection& sc : enumerate_from_corner(s_, {p, i}, L2)) {
        if (by_id_.count(sc.id)) continue;
        index[germ_key(sc.start)] = oriented.size();
        oriented.push_back(std::move(sc));
      }
    }
  }
  std::vector<bool> done(oriented.size(), false);
  for (std::size_t k = 0; k < oriented.size(); ++k) {
    if (done[k]) continue;
    const auto it = index.find(germ_key(oriented[k].end));
    if (it == index.end()) throw Error(ErrorCode::Internal, "reverse orientation not enumerated");
    done[k] = done[it->second] = true;
    insert_pair(oriented[k], oriented[it->second]);
  }
  bound_ = L2;
  any_ = true;
  resort();
}

void Catalog::insert_pair(SaddleConnection a, SaddleConnection b) {
  if (!canonical_orientation(a, b)) std::swap(a, b);
  if (by_id_.count(a.id)) return;
  store_.push_back(std::make_unique<SaddleConnection>(std::move(a)));
  const SaddleConnection* pa = store_.back().get();
  store_.push_back(std::make_unique<SaddleConnection>(std::move(b)));
  const SaddleConnection* pb = store_.back().get();
  by_id_[pa->id] = {pa, pb};
  by_germ_[germ_key(pa->start)] = pa;
  by_germ_[germ_key(pb->start)] = pb;
  sorted_.push_back(pa);
}

void Catalog::resort() { std::sort(sorted_.begin(), sorted_.end(),
            [](const SaddleConnection* a, const SaddleConnection* b) { return canonical_less(*a, *b); }); }

std::vector<const SaddleConnection*> Catalog::upto(const Scalar& L2) {
  ensure(L2);
  std::vector<const SaddleConnection*> out;
  for (const SaddleConnection* sc : sorted_) {
    if (sc->len2 > L2) break;
    out.push_back(sc);
  }
  return out;
}

const SaddleConnection* Catalog::find(const std::string& id) const {
  const auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : it->second.first;
}

const SaddleConnection& Catalog::get(const std::string& id) const {
  const SaddleConnection* sc = find(id);
  if (sc == nullptr) throw Error(ErrorCode::UnknownVertex, "unknown saddle connection " + id);
  return *sc;
}

const SaddleConnection* Catalog::by_germ(const Germ& g) const {
  const auto it = by_germ_.find(germ_key(g));
  return it == by_germ_.end() ? nullptr : it->second;
}

const SaddleConnection& Catalog::reverse_of(const SaddleConnection& sc) const {
  const auto it = by_id_.find(sc.id);
  if (it == by_id_.end()) throw Error(ErrorCode::UnknownVertex, "unknown saddle connection " + sc.id);
  const auto [a, b] = it->second;
  return germ_key(a->start) == germ_key(sc.start) ? *b : *a;
}

const SaddleConnection& Catalog::add(const SaddleConnection& sc) {
  if (const SaddleConnection* known = find(sc.id)) return *known;
  insert_pair(sc, reversed(s_, sc));
  resort();
  return *find(sc.id);
}

}  // namespace flatsc
