#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "flatsc/exact.hpp"

namespace flatsc {

/// Corner i of polygon `poly`: the vertex v_i together with the angular
/// sector between its outgoing edge (v_i -> v_{i+1}) and incoming edge.
struct Corner {
  int poly = 0;
  int idx = 0;
  friend auto operator<=>(const Corner&, const Corner&) = default;
};

/// Edge i of polygon `poly` runs from v_i to v_{i+1}.
struct EdgeRef {
  int poly = 0;
  int edge = 0;
  friend auto operator<=>(const EdgeRef&, const EdgeRef&) = default;
};

struct Gluing {
  EdgeRef from;
  EdgeRef to;
  int sign = 1;  // +1: z -> z + c, -1: z -> -z + c
};

struct Polygon {
  std::string name;
  std::vector<Vec2> vertices;  // counterclockwise, strictly convex
};

/// Map from a polygon's own coordinates into some ambient plane:
/// z -> sign * z + shift.
struct Placement {
  int sign = 1;
  Vec2 shift;

  Vec2 apply(const Vec2& z) const { return sign * z + shift; }
  Vec2 direction(const Vec2& d) const { return sign * d; }
  /// Plane point back to polygon coordinates.
  Vec2 unapply(const Vec2& p) const { return sign * (p - shift); }
  /// this o inner
  Placement compose(const Placement& inner) const {
    return {sign * inner.sign, sign * inner.shift + shift};
  }
  friend bool operator==(const Placement& l, const Placement& r) {
    return l.sign == r.sign && l.shift == r.shift;
  }
  friend std::strong_ordering operator<=>(const Placement& l, const Placement& r) {
    if (auto c = l.sign <=> r.sign; c != 0) return c;
    return l.shift <=> r.shift;
  }
};

/// A direction leaving a marked point, recorded in the frame of the polygon
/// whose corner sector (half-open: outgoing edge included, incoming edge
/// excluded) contains it.
struct Germ {
  Corner corner;
  Vec2 dir;
};

enum class Rotation { CCW, CW };

struct VertexClass {
  std::vector<Corner> corners;  // counterclockwise walk order
  /// frame_sign[k]: a vector in the frame of corners[k] equals
  /// frame_sign[k] times the same vector in the frame of corners[0].
  std::vector<int> frame_sign;
  /// Sign picked up after one full counterclockwise loop (-1 at poles).
  int loop_sign = 1;
  /// Cone angle divided by pi.
  int angle_pi = 0;
};

struct SurfaceData {
  int field_d = 1;
  std::vector<Polygon> polygons;
  std::vector<Gluing> gluings;
};

struct SurfaceInfo {
  int genus = 0;
  int num_marked = 0;
  std::vector<int> stratum;  // k_i = angle_i / pi - 2, sorted descending
  Scalar total_area;
  bool is_translation = false;
};

/// A validated half-translation surface (X, omega; Sigma) presented by
/// strictly convex polygons with +-translation edge gluings. Every vertex
/// class is a marked point. Immutable once constructed.
class Surface {
 public:
  /// Validates everything; throws GluingMismatch, NonConvexPolygon,
  /// Disconnected, BadConeAngle, StratumError, ParseError.
  explicit Surface(SurfaceData data);

  int field() const { return data_.field_d; }
  const SurfaceData& data() const { return data_; }
  const std::vector<Polygon>& polygons() const { return data_.polygons; }
  int num_polygons() const { return static_cast<int>(data_.polygons.size()); }
  int num_vertices(int poly) const {
    return static_cast<int>(data_.polygons[poly].vertices.size());
  }
  int num_edges() const { return num_edges_; }

  const Vec2& vertex(int poly, int idx) const;
  const Vec2& vertex(const Corner& c) const { return vertex(c.poly, c.idx); }
  Vec2 edge_vector(const EdgeRef& e) const;
  EdgeRef partner(const EdgeRef& e) const { return partner_[flat(e)]; }
  int gluing_sign(const EdgeRef& e) const { return sign_[flat(e)]; }
  /// Coordinates of the polygon across `e` expressed in the frame of e.poly.
  const Placement& transition(const EdgeRef& e) const { return transition_[flat(e)]; }

  int vertex_class(const Corner& c) const { return class_of_[flat_corner(c)]; }
  int num_classes() const { return static_cast<int>(classes_.size()); }
  const VertexClass& vclass(int k) const { return classes_[k]; }
  /// Position of a corner in its class walk.
  int walk_index(const Corner& c) const { return walk_index_[flat_corner(c)]; }

  Vec2 out_dir(const Corner& c) const;
  Vec2 in_dir(const Corner& c) const;
  /// d lies in the half-open sector [out, in) of c.
  bool in_sector(const Corner& c, const Vec2& d) const;
  /// d lies in the closed sector [out, in] of c.
  bool in_closed_sector(const Corner& c, const Vec2& d) const;

  /// Neighbouring corner around the same marked point and the sign that
  /// converts directions into its frame.
  std::pair<Corner, int> step(const Corner& c, Rotation sense) const;

  /// For d in the closed sector of c, the germ owning d.
  Germ normalize_germ(const Corner& c, const Vec2& d) const;
  /// Smallest strictly positive rotation, in the given sense, taking the
  /// germ `from` to a germ pointing along d (d given in from.corner's frame).
  Germ rotate_to(const Germ& from, const Vec2& d, Rotation sense) const;
  /// Also returns s with (vector in the result frame) = s * (vector in from's frame).
  std::pair<Germ, int> rotate_to_signed(const Germ& from, const Vec2& d, Rotation sense) const;

  /// Sign s such that a vector v in frame of a equals s * v in frame of b,
  /// when walking from a to b around their common vertex in `sense`
  /// without passing the start corner again.
  int frame_sign_between(const Corner& a, const Corner& b, Rotation sense) const;

  Scalar polygon_area(int poly) const;
  Scalar total_area() const;
  SurfaceInfo info() const;

 private:
  SurfaceData data_;
  std::vector<int> offset_;  // edge/corner flat offsets per polygon
  int num_edges_ = 0;
  std::vector<EdgeRef> partner_;
  std::vector<int> sign_;
  std::vector<Placement> transition_;
  std::vector<int> class_of_;
  std::vector<int> walk_index_;
  std::vector<VertexClass> classes_;

  int flat(const EdgeRef& e) const { return offset_[e.poly] + e.edge; }
  int flat_corner(const Corner& c) const { return offset_[c.poly] + c.idx; }
  void validate_and_index();
  void build_classes();
};

/// Strict JSON reader for the surface file format.
Surface parse_surface(std::string_view text);
/// Writes the same JSON format (deterministic).
std::string surface_to_json(const Surface& s);

/// Linear action on polygon coordinates. Vertex lists are reversed when
/// det < 0 to restore counterclockwise order (edge i becomes n-1-i, corner
/// i becomes -i mod n).
Surface apply_matrix(const Surface& s, const Mat2& m);
Corner image_corner(const Surface& s, const Corner& c, const Mat2& m);

/// square_torus, regular_octagon, L_shape_2x1. Throws UnknownName.
Surface builtin(std::string_view name);
std::vector<std::string> builtin_names();

/// Angle test: ray r lies in the half-open counterclockwise arc (a, b],
/// assuming that arc is shorter than pi.
bool ray_in_arc(const Vec2& a, const Vec2& b, const Vec2& r);

}  // namespace flatsc
