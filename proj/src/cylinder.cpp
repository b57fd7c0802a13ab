#include "flatsc/cylinder.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <tuple>

namespace flatsc {

namespace {

using GermKey = std::pair<Corner, Vec2>;

GermKey key_of(const Germ& g) { return {g.corner, direction_key(g.dir)}; }

// |t| with w = t * v for w parallel to v.
Scalar ratio(const Vec2& w, const Vec2& v) {
  return (v.x.is_zero() ? w.y / v.y : w.x / v.x).abs();
}

struct Seg {
  Vec2 a, b;
  std::size_t conn;
};

}  // namespace

Decomposition direction_decomposition(const Surface& s, const Vec2& v, long crossing_budget) {
  check_direction(s, v);
  if (v.is_zero()) throw Error(ErrorCode::PreconditionViolated, "zero direction");
  Decomposition out;
  const Vec2 dir = v.canonical();

  // Every separatrix, oriented.
  std::vector<SaddleConnection> oriented;
  std::map<GermKey, std::size_t> index;
  TraceBudget budget;
  budget.max_crossings = crossing_budget;
  for (int p = 0; p < s.num_polygons(); ++p) {
    for (int i = 0; i < s.num_vertices(p); ++i) {
      const Corner c{p, i};
      for (const Vec2& d : {dir, -dir}) {
        if (!s.in_sector(c, d)) continue;
        const Trajectory tr = trace_ray(s, Germ{c, d}, budget);
        if (tr.terminal != Terminal::HitMarked) return out;
        index[key_of({c, d})] = oriented.size();
        oriented.push_back(connection_from_trace(s, {c, d}, tr));
      }
    }
  }
  const std::size_t m = oriented.size();
  auto lookup = [&](const Germ& g) {
    const auto it = index.find(key_of(g));
    if (it == index.end()) throw Error(ErrorCode::Internal, "separatrix germ missing");
    return it->second;
  };
  std::vector<std::size_t> rev(m), next(m);
  for (std::size_t k = 0; k < m; ++k) {
    rev[k] = lookup(oriented[k].end);
    const Germ& back = oriented[k].end;
    next[k] = lookup(s.rotate_to(back, -back.dir, Rotation::CW));
  }
  auto defines_id = [&](std::size_t k) {
    const std::string tail = ":w" + oriented[k].word;
    const std::string& id = oriented[k].id;
    return id.size() >= tail.size() && id.compare(id.size() - tail.size(), tail.size(), tail) == 0;
  };
  for (std::size_t k = 0; k < m; ++k) {
    const bool mine = defines_id(k);
    const bool theirs = defines_id(rev[k]);
    if (mine && (!theirs || k <= rev[k])) out.connections.push_back(oriented[k]);
  }
  std::sort(out.connections.begin(), out.connections.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });

  // Boundary cycles: the cylinder lies to the left of each.
  std::vector<int> cycle_of(m, -1);
  std::vector<std::vector<std::size_t>> cycles;
  std::vector<std::size_t> order(m);
  for (std::size_t k = 0; k < m; ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(oriented[a].id, oriented[a].word) < std::tie(oriented[b].id, oriented[b].word);
  });
  for (std::size_t k : order) {
    if (cycle_of[k] >= 0) continue;
    std::vector<std::size_t> cyc;
    std::size_t h = k;
    do {
      cycle_of[h] = static_cast<int>(cycles.size());
      cyc.push_back(h);
      h = next[h];
    } while (h != k && cyc.size() <= m);
    if (h != k) throw Error(ErrorCode::Internal, "boundary walk does not close");
    cycles.push_back(std::move(cyc));
  }

  std::map<int, std::vector<Seg>> segs;
  for (std::size_t k = 0; k < m; ++k) {
    for (const DevelopedPiece& p : oriented[k].pieces) segs[p.poly].push_back({p.a, p.b, k});
  }

  std::vector<bool> used(cycles.size(), false);
  Scalar total;
  for (std::size_t ci = 0; ci < cycles.size(); ++ci) {
    if (used[ci]) continue;
    const SaddleConnection& h = oriented[cycles[ci].front()];
    std::optional<std::pair<std::size_t, Scalar>> found;
    for (int den = 2; den <= 64 && !found; ++den) {
      for (int num = 1; num < den && !found; ++num) {
        if (std::gcd(num, den) != 1) continue;
        const Scalar lam(mpq_class(num, den));
        const Vec2 X = h.origin() + lam * h.hol;
        // Locate the developed point in one of the pieces.
        const DevelopedPiece* piece = nullptr;
        for (const auto& p : h.pieces) {
          if (on_segment(X, p.place.apply(p.a), p.place.apply(p.b))) {
            piece = &p;
            break;
          }
        }
        if (piece == nullptr) continue;
        const Vec2 start = piece->place.unapply(X);
        const Vec2 w = piece->place.sign * h.hol.rot90();
        PieceStop stop = [&](int poly, const Vec2& a, const Vec2& b) -> std::optional<Scalar> {
          std::optional<Scalar> best;
          const auto it = segs.find(poly);
          if (it == segs.end()) return best;
          for (const Seg& q : it->second) {
            const Vec2 e = q.b - q.a;
            const Scalar den2 = wedge(e, b - a);
            if (den2.is_zero()) continue;
            const Scalar t = wedge(e, q.a - a) / den2;
            if (t.sign() <= 0 || t > Scalar(1)) continue;
            if (!on_segment(a + t * (b - a), q.a, q.b)) continue;
            if (!best || t < *best) best = t;
          }
          return best;
        };
        const StoppedTrace st = trace_until(s, {piece->poly, start}, w, budget, stop);
        if (!st.stopped) continue;
        const Vec2& Z = st.stop_point.pos;
        bool at_vertex = false;
        for (int k = 0; k < s.num_vertices(st.stop_point.poly); ++k) {
          at_vertex = at_vertex || s.vertex(st.stop_point.poly, k) == Z;
        }
        if (at_vertex) continue;
        // Which connection and which side.
        for (const Seg& q : segs[st.stop_point.poly]) {
          if (!on_segment(Z, q.a, q.b)) continue;
          const bool left_of_forward = wedge(q.b - q.a, st.stop_dir).sign() < 0;
          found = {left_of_forward ? q.conn : rev[q.conn], st.trace.param};
          break;
        }
      }
    }
    if (!found) throw Error(ErrorCode::Internal, "could not measure a cylinder height");
    const int cj = cycle_of[found->first];
    if (cj == static_cast<int>(ci) || used[cj]) throw Error(ErrorCode::Internal, "cylinder boundaries are inconsistent");
    used[ci] = used[cj] = true;
    Cylinder cyl;
    cyl.direction = dir;
    Scalar c_bottom, c_top;
    for (std::size_t k : cycles[ci]) {
      cyl.bottom.push_back(oriented[k]);
      c_bottom += ratio(oriented[k].hol, dir);
    }
    for (std::size_t k : cycles[cj]) {
      cyl.top.push_back(oriented[k]);
      c_top += ratio(oriented[k].hol, dir);
    }
    if (c_bottom != c_top) throw Error(ErrorCode::Internal, "cylinder boundary lengths differ");
    cyl.circumference = c_bottom;
    cyl.height = found->second * ratio(h.hol, dir) * dir.norm2();
    total += cyl.area();
    out.cylinders.push_back(std::move(cyl));
  }
  if (total != s.total_area()) {
    throw Error(ErrorCode::Internal, "cylinder areas do not add up to the surface area");
  }
  out.periodic = true;
  return out;
}

}  // namespace flatsc
