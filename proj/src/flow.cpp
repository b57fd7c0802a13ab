#include "flatsc/flow.hpp"

#include <queue>

namespace flatsc {

void check_direction(const Surface& s, const Vec2& v) {
  for (const Scalar* c : {&v.x, &v.y}) {
    if (c->field() != 1 && c->field() != s.field()) {
      throw Error(ErrorCode::DirectionLeavesField,
                  "direction " + v.str() + " is outside Q(sqrt " + std::to_string(s.field()) + ")");
    }
  }
}

Scalar dist2_origin_segment(const Vec2& a, const Vec2& b) {
  const Vec2 e = b - a;
  if (dot(-a, e).sign() <= 0) return a.norm2();
  if (dot(-b, -e).sign() <= 0) return b.norm2();
  const Scalar w = wedge(a, b);
  return w * w / e.norm2();
}

namespace {

bool budget_exceeded(const TraceBudget& b, const Scalar& param, const Scalar& norm2) {
  return b.max_len2 && param * param * norm2 > *b.max_len2;
}

StoppedTrace walk(const Surface& s, int poly, Vec2 X, Vec2 w, const TraceBudget& budget,
                  const PieceStop* stop) {
  if (!budget.max_len2 && budget.max_crossings < 0) {
    throw Error(ErrorCode::PreconditionViolated, "trace needs a length or crossing budget");
  }
  StoppedTrace out;
  Trajectory& tr = out.trace;
  const Scalar norm2 = w.norm2();
  Scalar T;
  int frame = 1;
  long crossings = 0;
  while (true) {
    const int n = s.num_vertices(poly);
    int exit_edge = -1;
    Scalar t_exit;
    for (int k = 0; k < n; ++k) {
      const Vec2& a = s.vertex(poly, k);
      const Vec2 e = s.vertex(poly, k + 1) - a;
      const Scalar den = wedge(e, w);
      if (den.sign() >= 0) continue;
      const Scalar t = wedge(e, a - X) / den;
      if (exit_edge < 0 || t < t_exit) {
        exit_edge = k;
        t_exit = t;
      }
    }
    if (exit_edge < 0) throw Error(ErrorCode::Internal, "ray has no exit edge");
    const Vec2 Y = X + t_exit * w;
    if (stop != nullptr && !(Y == X)) {
      if (auto lam = (*stop)(poly, X, Y)) {
        const Vec2 Z = X + (*lam * t_exit) * w;
        const Scalar total = T + *lam * t_exit;
        if (budget_exceeded(budget, total, norm2)) {
          tr.terminal = Terminal::BudgetExceeded;
          tr.param = T;
          tr.len2 = T * T * norm2;
          return out;
        }
        tr.pieces.push_back({poly, X, Z});
        tr.param = total;
        tr.len2 = total * total * norm2;
        tr.frame_sign = frame;
        out.stopped = true;
        out.stop_point = {poly, Z};
        out.stop_dir = w;
        return out;
      }
    }
    const Scalar total = T + t_exit;
    if (budget_exceeded(budget, total, norm2)) {
      tr.terminal = Terminal::BudgetExceeded;
      tr.param = T;
      tr.len2 = T * T * norm2;
      return out;
    }
    if (!(Y == X)) tr.pieces.push_back({poly, X, Y});
    T = total;
    int hit = -1;
    if (Y == s.vertex(poly, exit_edge)) hit = exit_edge;
    if (Y == s.vertex(poly, exit_edge + 1)) hit = (exit_edge + 1) % n;
    if (hit >= 0) {
      tr.terminal = Terminal::HitMarked;
      tr.param = T;
      tr.len2 = T * T * norm2;
      tr.end_corner = {poly, hit};
      tr.end_class = s.vertex_class(tr.end_corner);
      tr.arrival_dir = w;
      tr.frame_sign = frame;
      return out;
    }
    if (budget.max_crossings >= 0 && crossings >= budget.max_crossings) {
      tr.terminal = Terminal::BudgetExceeded;
      tr.param = T;
      tr.len2 = T * T * norm2;
      return out;
    }
    ++crossings;
    const EdgeRef e{poly, exit_edge};
    tr.crossings.push_back(e);
    const Placement& g = s.transition(e);
    X = g.unapply(Y);
    w = g.sign * w;
    frame *= g.sign;
    poly = s.partner(e).poly;
  }
}

bool inside_closed(const Surface& s, int poly, const Vec2& p) {
  const int n = s.num_vertices(poly);
  for (int k = 0; k < n; ++k) {
    if (orient(s.vertex(poly, k), s.vertex(poly, k + 1), p) < 0) return false;
  }
  return true;
}

void check_point(const Surface& s, const SurfacePoint& p) {
  if (p.poly < 0 || p.poly >= s.num_polygons() || !inside_closed(s, p.poly, p.pos)) {
    throw Error(ErrorCode::PreconditionViolated, "start point is not in its polygon");
  }
  for (int k = 0; k < s.num_vertices(p.poly); ++k) {
    if (s.vertex(p.poly, k) == p.pos) {
      throw Error(ErrorCode::PreconditionViolated, "start point is a marked corner; use a germ");
    }
  }
}

}  // namespace

Trajectory trace_ray(const Surface& s, const Germ& start, const TraceBudget& budget) {
  check_direction(s, start.dir);
  if (start.dir.is_zero() || !s.in_sector(start.corner, start.dir)) {
    throw Error(ErrorCode::PreconditionViolated, "direction is not in the corner sector");
  }
  return walk(s, start.corner.poly, s.vertex(start.corner), start.dir, budget, nullptr).trace;
}

Trajectory trace_ray(const Surface& s, const SurfacePoint& start, const Vec2& dir,
                     const TraceBudget& budget) {
  check_direction(s, dir);
  if (dir.is_zero()) throw Error(ErrorCode::PreconditionViolated, "zero direction");
  check_point(s, start);
  return walk(s, start.poly, start.pos, dir, budget, nullptr).trace;
}

StoppedTrace trace_until(const Surface& s, const SurfacePoint& start, const Vec2& dir,
                         const TraceBudget& budget, const PieceStop& stop) {
  check_direction(s, dir);
  if (dir.is_zero()) throw Error(ErrorCode::PreconditionViolated, "zero direction");
  check_point(s, start);
  return walk(s, start.poly, start.pos, dir, budget, &stop);
}

// ---------------------------------------------------------------------------

namespace {

struct Beam {
  int poly;
  Placement place;
  Scalar u0, u1;
  Scalar tmin;
};

struct BeamLater {
  bool operator()(const Beam& l, const Beam& r) const { return l.tmin > r.tmin; }
};

}  // namespace

FirstHit flow_interval_first_hit(const Surface& s, const Transversal& tr, const Vec2& f,
                                 const FirstHitOptions& opt) {
  const Vec2 D = tr.B - tr.A;
  if (D.is_zero()) throw Error(ErrorCode::PreconditionViolated, "transversal has length 0");
  check_direction(s, f);
  const Scalar den = wedge(D, f);
  if (den.is_zero()) throw Error(ErrorCode::PreconditionViolated, "flow is parallel to the transversal");
  if (tr.pieces.empty()) throw Error(ErrorCode::PreconditionViolated, "transversal has no pieces");

  auto foot = [&](const Vec2& V) { return wedge(V - tr.A, f) / den; };
  auto time = [&](const Vec2& V) { return wedge(D, V - tr.A) / den; };

  std::priority_queue<Beam, std::vector<Beam>, BeamLater> queue;
  for (const DevelopedPiece& p : tr.pieces) {
    Scalar ua = foot(p.place.apply(p.a));
    Scalar ub = foot(p.place.apply(p.b));
    if (ub < ua) std::swap(ua, ub);
    queue.push({p.poly, p.place, ua, ub, Scalar(0)});
  }

  std::optional<FirstHit> best;
  auto better = [&](const Scalar& t, const Scalar& u, int cls) {
    if (!best) return true;
    if (t != best->t) return t < best->t;
    if (u != best->foot) return u < best->foot;
    return cls < best->hit_class;
  };
  const Scalar zero(0), one(1);
  long crossings = 0;
  while (!queue.empty()) {
    Beam beam = queue.top();
    queue.pop();
    if (best && beam.tmin > best->t) break;
    const int n = s.num_vertices(beam.poly);
    std::vector<Vec2> pv;
    pv.reserve(n);
    for (int k = 0; k < n; ++k) pv.push_back(beam.place.apply(s.vertex(beam.poly, k)));
    for (int k = 0; k < n; ++k) {
      const Scalar t = time(pv[k]);
      if (t.sign() <= 0) continue;
      const Scalar u = foot(pv[k]);
      if (u < beam.u0 || u > beam.u1) continue;
      if (opt.interior_feet && (u <= zero || u >= one)) continue;
      const Corner c{beam.poly, k};
      const int cls = s.vertex_class(c);
      if (better(t, u, cls)) {
        best = FirstHit{cls, c, t, u, pv[k], t * t * f.norm2(), beam.place};
      }
    }
    for (int k = 0; k < n; ++k) {
      const Vec2& a = pv[k];
      const Vec2& b = pv[(k + 1) % n];
      if (wedge(b - a, f).sign() >= 0) continue;
      const Scalar ua = foot(a), ub = foot(b);
      const Scalar ta = time(a), tb = time(b);
      Scalar lo = ua < ub ? ua : ub;
      Scalar hi = ua < ub ? ub : ua;
      if (lo < beam.u0) lo = beam.u0;
      if (hi > beam.u1) hi = beam.u1;
      if (!(lo < hi)) continue;
      auto t_at = [&](const Scalar& u) { return ta + (u - ua) / (ub - ua) * (tb - ta); };
      const Scalar tlo = t_at(lo), thi = t_at(hi);
      const EdgeRef e{beam.poly, k};
      if (++crossings > opt.crossing_budget) {
        throw Error(ErrorCode::NoHitWithinBudget,
                    "no marked point within " + std::to_string(opt.crossing_budget) + " crossings");
      }
      queue.push({s.partner(e).poly, beam.place.compose(s.transition(e)), lo, hi,
                  tlo < thi ? tlo : thi});
    }
  }
  if (!best) throw Error(ErrorCode::NoHitWithinBudget, "flow met no marked point");
  return *best;
}

FirstHit flow_interval_first_hit(const Surface& s, const Transversal& tr, Side side,
                                 const FirstHitOptions& opt) {
  const Vec2 n = (tr.B - tr.A).rot90();
  return flow_interval_first_hit(s, tr, side == Side::Left ? n : -n, opt);
}

}  // namespace flatsc
