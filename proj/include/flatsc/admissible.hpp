#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flatsc/cylinder.hpp"
#include "flatsc/triangulation.hpp"

namespace flatsc {

/// Where polygon vertex 0 sits: the marked corner whose sector holds the
/// direction of side 0, and the frame sign (plane vector = sign * vector in
/// corner.poly's frame).
struct Anchor {
  Corner corner;
  int sign = 1;
};

/// Part of a fan cell that lands in one surface polygon. `region` is a
/// convex counterclockwise polygon in the plane of the admissible polygon.
struct CellPiece {
  int cell = 0;
  int poly = 0;
  Placement place;  // surface polygon coordinates -> plane
  std::vector<Vec2> region;
};

/// An admissible map from a plane polygon into the surface, stored as a fan
/// triangulation from `apex` with every cell developed piece by piece.
struct AdmissiblePolygon {
  std::vector<Vec2> vertices;
  Anchor anchor;
  int apex = 0;
  std::vector<CellPiece> pieces;
  /// sides[k] runs from vertex k to vertex k+1; side_anchor[k] is its
  /// start germ with the plane frame sign.
  std::vector<SaddleConnection> sides;
  std::vector<Anchor> side_anchor;
  std::vector<std::string> side_ids;
  /// Interior diagonals (i < j) and their ids.
  std::vector<std::pair<std::pair<int, int>, std::string>> diagonal_ids;

  Scalar area() const;
  int size() const { return static_cast<int>(vertices.size()); }
  /// Anchor at vertex k (germ of side k).
  Anchor anchor_at(int k) const;
};

struct AdmissibilityReport {
  bool admissible = false;
  std::vector<std::string> violations;
  std::optional<AdmissiblePolygon> polygon;
};

/// Develops the polygon from the anchor and checks that the interior embeds,
/// that exactly the vertices land on marked points, and that side images are
/// pairwise equal or disjoint. Throws AnchorInvalid, PreconditionViolated
/// (polygon not simple and counterclockwise, or not star-shaped from a
/// vertex).
AdmissibilityReport is_admissible(const Surface& s, const std::vector<Vec2>& vertices,
                                  const Anchor& anchor);

/// Same, with the anchor holding the germ of side `at` at vertex `at`.
AdmissibilityReport is_admissible_at(const Surface& s, const std::vector<Vec2>& vertices,
                                     const Anchor& anchor, int at);

/// Germ at a polygon vertex in plane direction d (pointing into the closed
/// interior angle), with plane d = sign * germ.dir.
std::optional<std::pair<Germ, int>> germ_at_vertex(const Surface& s, const AdmissiblePolygon& p,
                                                   const Vec2& point, const Vec2& d);

/// The polygon obtained by keeping the listed vertex indices (increasing,
/// cyclic order), re-anchored at the first of them.
AdmissibilityReport sub_polygon(const Surface& s, const AdmissiblePolygon& p,
                                const std::vector<int>& keep);

/// The face as an admissible triangle, side 0 = face.half[k].
AdmissiblePolygon triangle_polygon(const Surface& s, const Face& f, int k = 0);

bool strictly_convex_at(const std::vector<Vec2>& v, int k);
bool strictly_convex(const std::vector<Vec2>& v);

/// Flows from side k along f (plane direction, pointing out of the polygon;
/// default: the outward normal) to the first marked point and inserts it as
/// a vertex after k. With open_strip, the two boundary rays are excluded.
/// Throws HypothesisViolated, NoHitWithinBudget, PreconditionViolated.
AdmissiblePolygon extend_strip(const Surface& s, const AdmissiblePolygon& p, int side,
                               std::optional<Vec2> f = std::nullopt, bool open_strip = false);

enum class PentagonKind { Pentagon, SimpleCylinderCase, NonSimpleCylinderCase };
const char* pentagon_kind_name(PentagonKind k);

struct PentagonResult {
  PentagonKind kind = PentagonKind::Pentagon;
  AdmissiblePolygon polygon;
  /// Triangle side lying on the cylinder boundary, or the side used as the
  /// strip direction.
  int side = 0;
};

/// Throws UnknownCylinderStatus when a side direction is not periodic within
/// the budget.
PentagonResult pentagon_of_triangle(const Surface& s, const TriangleWitness& tw,
                                    long crossing_budget = 10000);

struct CoconvexResult {
  /// Intermediate pentagons, then the final quadrilateral; empty when the
  /// input is already strictly convex.
  std::vector<AdmissiblePolygon> steps;
  /// Squared length bound T^2 and the number of saddle connections below it.
  Scalar T2;
  int cap = 0;
};

/// Throws PreconditionViolated when the quadrilateral is not strictly convex
/// at the other three vertices.
CoconvexResult coconvexify(Catalog& cat, const AdmissiblePolygon& quad, int reflex_vertex);

}  // namespace flatsc
