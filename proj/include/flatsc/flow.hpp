#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "flatsc/surface.hpp"

namespace flatsc {

/// A point given in the coordinates of one polygon: interior or on an edge,
/// never a vertex.
struct SurfacePoint {
  int poly = 0;
  Vec2 pos;
};

/// Straight segment inside one polygon, in that polygon's coordinates.
struct TracePiece {
  int poly = 0;
  Vec2 a;
  Vec2 b;
};

enum class Terminal { HitMarked, BudgetExceeded };

struct Trajectory {
  std::vector<TracePiece> pieces;
  /// Edge left at each crossing, named in the polygon being left.
  std::vector<EdgeRef> crossings;
  Terminal terminal = Terminal::BudgetExceeded;
  /// Total travel is param * dir (dir as given at the start).
  Scalar param;
  Scalar len2;
  /// Only meaningful for HitMarked.
  Corner end_corner;
  int end_class = -1;
  /// Direction of travel on arrival, in the frame of end_corner.poly.
  Vec2 arrival_dir;
  /// Product of gluing signs along the way: arrival_dir = frame_sign * dir.
  int frame_sign = 1;
};

/// Budget for tracing: squared length and, optionally, polygon crossings.
struct TraceBudget {
  std::optional<Scalar> max_len2;
  long max_crossings = -1;
};

/// Straight-line flow from a marked corner (dir must lie in the corner's
/// half-open sector) until the first marked point or the budget.
Trajectory trace_ray(const Surface& s, const Germ& start, const TraceBudget& budget);
/// Same, from a non-singular point.
Trajectory trace_ray(const Surface& s, const SurfacePoint& start, const Vec2& dir,
                     const TraceBudget& budget);

/// Optional early stop for trace_from: given a piece (poly, a, b) of the
/// ray, return the parameter in [0, 1] at which to stop, if any.
using PieceStop = std::function<std::optional<Scalar>(int poly, const Vec2& a, const Vec2& b)>;

struct StoppedTrace {
  Trajectory trace;
  bool stopped = false;  // stop hook fired before any marked point
  SurfacePoint stop_point;
  Vec2 stop_dir;  // travel direction at the stop, in stop_point.poly's frame
};

StoppedTrace trace_until(const Surface& s, const SurfacePoint& start, const Vec2& dir,
                         const TraceBudget& budget, const PieceStop& stop);

/// One straight piece of a transversal, placed in a common developed plane.
struct DevelopedPiece {
  int poly = 0;
  Placement place;  // polygon coordinates -> developed plane
  Vec2 a;           // polygon coordinates
  Vec2 b;
};

/// Oriented straight segment A -> B on the surface, developed in one plane.
struct Transversal {
  Vec2 A;
  Vec2 B;
  std::vector<DevelopedPiece> pieces;
};

struct FirstHit {
  int hit_class = -1;
  Corner hit_corner;
  /// Hit point is A + foot (B - A) + t f in the developed plane.
  Scalar t;
  Scalar foot;
  Vec2 point;
  /// t^2 |f|^2.
  Scalar dist2;
  /// Placement of the polygon containing the hit corner.
  Placement place;
};

struct FirstHitOptions {
  long crossing_budget = 10000;
  /// Exclude the two endpoint rays (feet 0 and 1).
  bool interior_feet = false;
};

/// Flow every point of the transversal along f (developed frame) and return
/// the first marked point met. Ties: smaller t, then smaller foot, then
/// smaller class index.
FirstHit flow_interval_first_hit(const Surface& s, const Transversal& tr, const Vec2& f,
                                 const FirstHitOptions& opt = {});

enum class Side { Left, Right };
/// Flow perpendicular to the transversal: f = +-rot90(B - A).
FirstHit flow_interval_first_hit(const Surface& s, const Transversal& tr, Side side,
                                 const FirstHitOptions& opt = {});

/// Throws DirectionLeavesField unless v lives in the surface field.
void check_direction(const Surface& s, const Vec2& v);

/// Squared distance from the origin to the closed segment [a, b].
Scalar dist2_origin_segment(const Vec2& a, const Vec2& b);

}  // namespace flatsc
